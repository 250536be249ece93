"""Build script for the optional compiled kernel core.

The package is fully functional without the extension (pure numpy/Python
kernels are selected at import time), so a failed compile only costs speed.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the accelerator extension if possible, warn and continue if not."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"WARNING: compiled core not built ({exc}); "
              "the pure-Python kernels will be used")


def extensions():
    if os.environ.get("SVMDMOEA_NO_EXT"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "svmdmoea._speedups",
        ["src/svmdmoea/_speedups.pyx"],
        include_dirs=[np.get_include()],
        # -ffp-contract=off: no FMA contraction, so float arithmetic matches
        # the pure-Python fallback operation for operation (bit-equal results).
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
