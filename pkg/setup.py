"""Build script: compiles the Aberth solver kernel, falling back to pure Python.

The compiled extension is optional; if Cython or a C compiler is missing the
package still installs and the numpy fallback backend is used at import time.
"""

import sys

import numpy
from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


def extensions():
    if cythonize is None:
        return []
    ext = Extension(
        "kacroots._kernels._aberth",
        sources=["src/kacroots/_kernels/_aberth.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-march=native", "-funroll-loops"],
        language="c",
    )
    return cythonize([ext], language_level=3)


try:
    setup(ext_modules=extensions())
except SystemExit:
    raise
except Exception as exc:  # noqa: BLE001 - extension build is best effort
    print(f"warning: compiled kernel unavailable ({exc}); installing pure-Python build",
          file=sys.stderr)
    setup(ext_modules=[])
