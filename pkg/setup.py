"""Build script for the optional compiled simulation kernels.

The package works without the extension (a pure-numpy fallback is selected at
import time), so a failed compilation only costs speed, not functionality.
"""
import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Swallow compiler failures; the package falls back to pure numpy."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"WARNING: compiled kernels not built ({exc}); "
                  "using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  "using pure-Python fallback")


def make_extensions():
    import numpy as np
    from Cython.Build import cythonize

    nproot = os.path.dirname(np.__file__)
    ext = Extension(
        "levyfluct._kernels",
        ["src/levyfluct/_kernels.pyx"],
        include_dirs=[np.get_include()],
        # npyrandom moved under numpy/random/lib in numpy 2.x
        library_dirs=[os.path.join(nproot, "random", "lib"),
                      os.path.join(nproot, "_core", "lib"),
                      os.path.join(nproot, "core", "lib")],
        libraries=["npyrandom", "npymath"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={
        "language_level": 3,
        "boundscheck": False,
        "wraparound": False,
        "cdivision": True,
    })


setup(
    ext_modules=make_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
