import numpy as np
from setuptools import setup, Extension

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext = Extension(
        "snlevy.montecarlo._simcore",
        ["src/snlevy/montecarlo/_simcore.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
        optional=True,  # pure-Python kernel is used if the build fails
    )
    ext_modules = cythonize([ext], language_level="3")

setup(ext_modules=ext_modules)
