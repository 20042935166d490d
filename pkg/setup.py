"""Builds the optional compiled GF(q) elimination kernel.

If Cython or a C compiler is missing the package still installs and
falls back to the numpy kernel at import time.
"""
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernel not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc}); using numpy fallback")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("tensorid._modp", ["src/tensorid/_modp.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
