import warnings

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/dendrokan/_zcore.pyx"], language_level=3
    )
except Exception as exc:  # build without the compiled kernel
    warnings.warn(f"building without the compiled kernel: {exc}")

setup(ext_modules=ext_modules)
