"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure numpy/python fallback is
selected at import time); compiling `gapdecay._fast` speeds up the series
and Volterra hot loops by roughly an order of magnitude.
"""
from setuptools import setup, Extension

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gapdecay._fast",
                ["src/gapdecay/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
