"""Build script: compiles the search kernel to a C extension when Cython and a
C compiler are available.  The same source file runs uncompiled as a fallback,
so a failed extension build still yields a working (slower) install."""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("EVOCHESS_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "evochess.kernel._kernel",
        ["src/evochess/kernel/_kernel.py"],
        extra_compile_args=["-O2"],
    )
    return cythonize(
        [ext],
        language_level=3,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "nonecheck": False,
        },
    )


setup(ext_modules=extensions())
