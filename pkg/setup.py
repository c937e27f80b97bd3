from setuptools import Extension, setup
from Cython.Build import cythonize
import numpy as np

ext = Extension(
    "geodisk.kernels._speedups",
    ["src/geodisk/kernels/_speedups.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O2", "-ffp-contract=off"],
)

setup(ext_modules=cythonize([ext], language_level=3))
