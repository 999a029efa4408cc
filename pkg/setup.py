"""Build hook for the optional compiled kernels.

The package works without them; if Cython or a C compiler is missing the
extension is skipped and ``qmatops.kernels`` falls back to NumPy.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernels not built ({exc}); using the NumPy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc}); using the NumPy fallback")


ext_modules = []
if cythonize is not None and not os.environ.get("QMATOPS_NO_EXT"):
    ext_modules = cythonize(
        [Extension("qmatops._kernels_cy", ["src/qmatops/_kernels_cy.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
