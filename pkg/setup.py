"""Build the optional compiled determinant kernel; the package works without it."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        ["src/annulus_kit/_bareiss.pyx"],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules)
