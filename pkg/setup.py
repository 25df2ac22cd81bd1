import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ngonstab._propagate_cy",
                ["src/ngonstab/_propagate_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    # Without Cython the package still installs; the pure NumPy kernel is
    # selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
