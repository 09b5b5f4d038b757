"""Optional compiled folding kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("INVMON_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("invmon._fold_c", ["src/invmon/_fold_c.pyx"],
                       language="c++", extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
