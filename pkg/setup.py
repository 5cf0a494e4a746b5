import os

from setuptools import setup

ext_modules = []
if os.environ.get("QHTT_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/qhtt/linalg/_ckernels.pyx"],
            compiler_directives={"language_level": 3},
        )
    except ImportError:  # no Cython: the numpy kernels are used
        pass

setup(ext_modules=ext_modules)
