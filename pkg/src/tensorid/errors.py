"""Exception types raised across the package."""


class TensorIdError(Exception):
    pass


class DivisionByZero(TensorIdError, ZeroDivisionError):
    pass


class IndexOutOfRange(TensorIdError, IndexError):
    pass


class InvalidRank(TensorIdError, ValueError):
    """Requested rank lies outside the range the algorithm handles."""


class NotApplicable(TensorIdError, ValueError):
    pass


class InternalError(TensorIdError, RuntimeError):
    pass


class RankShortfall(TensorIdError):
    """Young flattening rank is below r * C(n3 - 1, p)."""


class SingularBasisCompletion(TensorIdError):
    pass


class TooLarge(TensorIdError, ValueError):
    pass
