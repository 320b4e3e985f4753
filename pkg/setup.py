"""Build script for the optional compiled kernel core.

The package works without the extension (a numpy fallback is selected at
import time), so any failure to cythonize or compile is non-fatal.
"""
import numpy as np
from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pairces._kernels",
                ["src/pairces/_kernels.pyx"],
                include_dirs=[np.get_include()],
                # -fcx-limited-range: plain complex multiply, matching numpy
                # semantics instead of the Annex G library call
                extra_compile_args=["-O3", "-ffp-contract=off", "-fcx-limited-range"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
