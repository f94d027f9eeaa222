"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension (a pure numpy
fallback is selected at import time); building it just makes the hot
Monte Carlo loops several times faster.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "shc._kernels._core",
                ["src/shc/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
