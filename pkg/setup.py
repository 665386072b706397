"""Build script: compiles the optional Cython kernel core.

The package is fully functional without the extension (a pure-numpy
backend is selected at import time); the extension only accelerates the
hot MLP forward/backward/Adam loops. If Cython or a C compiler is
unavailable the build degrades to pure Python with a warning.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "rcrl.numerics._core",
                ["src/rcrl/numerics/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    sys.stderr.write(
        f"rcrl: skipping Cython kernel build ({exc!r}); "
        "falling back to the pure-numpy backend\n"
    )

setup(ext_modules=ext_modules)
