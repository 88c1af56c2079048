from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension("weightlab._kernels", ["src/weightlab/_kernels.pyx"]),
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
