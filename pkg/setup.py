"""Build script: compiles the hot-loop kernels when Cython is available.

The package works without the compiled extension (a numpy fallback is
selected at import time), so a failed extension build is not fatal:
    pip install -e . --no-build-isolation
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "rmslink._kernels._core",
                ["src/rmslink/_kernels/_core.pyx"],
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
