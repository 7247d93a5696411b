import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext
from setuptools.errors import CCompilerError, ExecError, PlatformError


class optional_build_ext(build_ext):
    """Build the accelerator if possible; the package runs without it."""

    def run(self):
        try:
            super().run()
        except (PlatformError, FileNotFoundError) as exc:
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except (CCompilerError, ExecError, ValueError) as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(
            "WARNING: building sluaug._speedups failed (%s); "
            "falling back to the pure-Python kernels." % (exc,)
        )


extensions = []
if not os.environ.get("SLUAUG_NO_EXTENSION"):
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [Extension("sluaug._speedups", ["src/sluaug/_speedups.pyx"])],
            language_level=3,
        )
    except ImportError:
        print("WARNING: Cython not available; using pure-Python kernels.")

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
