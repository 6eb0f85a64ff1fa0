"""Build script for the optional compiled kernels.

The Cython extension is marked optional: when no compiler (or no Cython) is
available the package installs without it and falls back to the pure-Python
kernels at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build environment without Cython
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "twistex._bessel_c",
                ["src/twistex/_bessel_c.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
