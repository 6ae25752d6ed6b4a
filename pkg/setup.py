"""Build script: compiles the optional accelerator extension.

The package is pure Python plus one small Cython module with the hot loops
(per-cell confusion tallies, kernel density sums). If the extension cannot
be built the install still succeeds and the numpy fallback is used at import.
"""

import logging

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

log = logging.getLogger(__name__)


class OptionalBuildExt(build_ext):
    """Build the accelerator if possible; never fail the install over it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            log.warning("accelerator build skipped: %s", exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            log.warning("accelerator %s skipped: %s", ext.name, exc)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "mapbayes._kernels._core",
        sources=["src/mapbayes/_kernels/_core.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
