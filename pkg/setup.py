"""Build script.

The compiled kernel module is optional: if Cython is unavailable the package
installs anyway and falls back to the numpy implementation at import time.
"""

import os

from setuptools import setup

PYX = "src/triortho/_kernels/_ckernels.pyx"

ext_modules = []
if os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize([PYX], compiler_directives={"language_level": "3"})
    except ImportError:
        pass

setup(ext_modules=ext_modules)
