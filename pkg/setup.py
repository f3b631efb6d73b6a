"""Build script for the optional compiled simulation kernels.

The package works without the extension (a pure-Python fallback is selected
at import time); building it just makes dataset generation much faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "sbls._kernels",
                ["src/sbls/_kernels.pyx"],
                # -ffp-contract=off keeps per-operation IEEE rounding so the
                # compiled kernels agree bitwise with the pure-Python ones.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level="3",
    )
else:
    extensions = []

setup(ext_modules=extensions)
