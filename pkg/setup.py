"""Build the optional compiled kernel.

The Cython extension is optional: if it cannot be compiled the package
falls back to the numpy implementation in ``localenergy._pycore``.
"""
import os
import sys

from setuptools import setup, Extension

ext_modules = []
if os.environ.get("LOCALENERGY_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError as exc:  # pragma: no cover
        print(f"warning: building without compiled kernels ({exc})", file=sys.stderr)
    else:
        openmp = [] if sys.platform == "darwin" else ["-fopenmp"]
        ext = Extension(
            "localenergy._core",
            ["src/localenergy/_core.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3"] + openmp,
            extra_link_args=openmp,
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
        ext_modules = cythonize(
            [ext],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
