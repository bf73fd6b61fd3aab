"""Build script: compiles the optional Cython kernels.

The package is fully functional without the compiled extension; the
pure-numpy twin in ``qubitherm._kernels._pure`` is selected at import
time whenever ``_speedups`` is missing.  Any build failure here is
therefore downgraded to a warning.
"""

import numpy
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class optional_build_ext(build_ext):
    """Never fail the install over the accelerator."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print("warning: skipping compiled kernels (%s); "
                  "the pure-python backend will be used" % (exc,))

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print("warning: could not build %s (%s); "
                  "the pure-python backend will be used" % (ext.name, exc))


extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "qubitherm._kernels._speedups",
                ["src/qubitherm/_kernels/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
