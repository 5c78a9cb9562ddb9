import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "clnode._kernels._csr",
                ["src/clnode/_kernels/_csr.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    # Without Cython the package still installs; the pure-Python kernels
    # are selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
