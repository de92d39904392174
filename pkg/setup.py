"""Build the optional Cython sweep kernel.

Without Cython (or a C compiler) the package installs pure Python and
``dysongas.montecarlo`` falls back to ``_metropolis_py``.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "dysongas._metropolis",
                ["src/dysongas/_metropolis.pyx"],
                # no FMA contraction: keeps results bit-identical to the Python kernel
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
