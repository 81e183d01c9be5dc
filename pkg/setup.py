"""Build script: compiles the optional Cython kernels.

The compiled extension accelerates the hot loops (dictionary automaton scan,
feature hashing, SGD epochs). If Cython or a C compiler is missing the build
falls through and the package runs on the pure-Python kernels instead.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "suppmine._kernels._native",
                ["src/suppmine/_kernels/_native.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
