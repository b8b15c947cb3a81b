"""Build script: compiles the optional C++ simulation kernels.

The package works without the extension (pure-Python engines are used as a
fallback), so a missing compiler or Cython only downgrades performance.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Let the build continue if the extension cannot be compiled."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, broken toolchain, ...
            print(f"WARNING: building C++ kernels failed ({exc}); "
                  "falling back to pure-Python engines")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  "falling back to pure-Python engines")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    if not os.path.exists("src/coevosim/engines/_kernels.pyx"):
        return []
    ext = Extension(
        "coevosim.engines._kernels",
        sources=["src/coevosim/engines/_kernels.pyx"],
        language="c++",
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-std=c++11"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
