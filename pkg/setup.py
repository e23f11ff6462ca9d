import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


def _extensions():
    if cythonize is None or os.environ.get("RDE_NO_EXT"):
        return []
    ext = Extension(
        "rde._ecfast",
        ["src/rde/_ecfast.pyx"],
        libraries=["gmp"],
        extra_compile_args=["-O3"],
        # a failed compile leaves the pure-Python kernel in charge
        optional=True,
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
