"""Build script: compiles the optional Cython kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so a failed compilation only costs speed, not functionality.
"""

import warnings

import numpy
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Degrade to the pure-Python backend if the extension cannot build."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"building magnusosc._core._kernels failed ({exc}); "
                          "falling back to the pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); "
                          "falling back to the pure-Python kernel")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "magnusosc._core._kernels",
                ["src/magnusosc/_core/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
