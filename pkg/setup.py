"""Build script: compiles the optional fast kernels extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so a failed or skipped compilation is not fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "photoncat.kernels._fastcore",
                ["src/photoncat/kernels/_fastcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    print("Cython not available; building without the compiled kernels.")

setup(ext_modules=ext_modules)
