"""Computation fields: prime fields GF(q) and the exact rationals.

Both fields expose the same small interface so that the elimination,
tangent and Hessian code is written once.  Matrices over GF(q) are
``int64`` numpy arrays with entries in ``[0, q)``; matrices over the
rationals are ``object`` arrays holding ``int`` or ``Fraction`` entries.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DivisionByZero

MAX_MODULUS = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface.  Subclasses define ``exact`` and element handling."""

    exact: bool = False
    name: str = "field"

    def __call__(self, x):
        raise NotImplementedError

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def add(self, a, b):
        return self(a + b)

    def sub(self, a, b):
        return self(a - b)

    def neg(self, a):
        return self(-a)

    def mul(self, a, b):
        return self(a * b)

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b) -> bool:
        return self(a) == self(b)

    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def identity(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def random_array(self, rng: np.random.Generator, shape) -> np.ndarray:
        raise NotImplementedError


class PrimeField(Field):
    exact = False

    def __init__(self, q: int):
        q = int(q)
        if not is_prime(q):
            raise ValueError(f"modulus {q} is not prime")
        if q >= MAX_MODULUS:
            raise ValueError(f"modulus {q} must be below {MAX_MODULUS}")
        self.q = q
        self.name = f"GF({q})"

    def __repr__(self):
        return f"PrimeField({self.q})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return self.div(x.numerator, x.denominator)
        if isinstance(x, str):
            return self(parse_rational(x))
        return int(x) % self.q

    def inv(self, a) -> int:
        a = self(a)
        if a == 0:
            raise DivisionByZero(f"zero has no inverse in GF({self.q})")
        return pow(a, -1, self.q)

    def div(self, a, b) -> int:
        return self(a) * self.inv(b) % self.q

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data)
        if arr.dtype == object:
            return np.vectorize(self, otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
        return np.mod(arr.astype(np.int64), self.q)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def random_array(self, rng, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.mod(arr, self.q)


class RationalField(Field):
    exact = True
    name = "QQ"
    sample_bound = 99

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return parse_rational(x)
        if isinstance(x, (np.integer,)):
            x = int(x)
        return Fraction(x)

    def inv(self, a) -> Fraction:
        a = self(a)
        if a == 0:
            raise DivisionByZero("division by zero rational")
        return 1 / a

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx, x in np.ndenumerate(arr):
            out[idx] = _exact_entry(x)
        return out

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = 1
        return out

    def random_array(self, rng, shape) -> np.ndarray:
        b = self.sample_bound
        vals = rng.integers(-b, b + 1, size=shape)
        out = self.zeros(vals.shape)
        for idx, v in np.ndenumerate(vals):
            out[idx] = int(v)
        return out

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr


def _exact_entry(x):
    """Canonical exact entry: a plain int when integral, else a Fraction."""
    if isinstance(x, str):
        x = parse_rational(x)
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, float):
        if not x.is_integer():
            raise TypeError(f"refusing inexact float entry {x!r}")
        return int(x)
    return _exact_entry(Fraction(x))


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (also accepts ints) into a Fraction."""
    if isinstance(text, (int, np.integer)):
        return Fraction(int(text))
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise TypeError(f"cannot parse {text!r} as a rational")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        if sep:
            d = int(den)
            if d == 0:
                raise DivisionByZero(f"zero denominator in {text!r}")
            return Fraction(int(num), d)
        return Fraction(int(num))
    except ValueError as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(q: int) -> PrimeField:
    return PrimeField(q)


def field_from_spec(spec) -> Field:
    """``"exact"``/``"QQ"``/``None`` give the rationals, an integer gives GF(q)."""
    if spec is None or isinstance(spec, RationalField):
        return QQ
    if isinstance(spec, PrimeField):
        return spec
    if isinstance(spec, str) and spec.lower() in ("exact", "qq", "rational", "rationals"):
        return QQ
    return GF(int(spec))
