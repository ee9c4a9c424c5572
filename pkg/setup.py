"""Build script for the optional compiled kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile should not block installation: we degrade
to a pure-Python build with a warning.
"""

import sys

from setuptools import setup
from setuptools.extension import Extension


def extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"jumpmg: building without compiled kernels ({exc})", file=sys.stderr)
        return []
    ext = Extension(
        "jumpmg.kernels._fast",
        sources=["src/jumpmg/kernels/_fast.pyx"],
        include_dirs=[np.get_include()],
        # No -ffast-math: the fallback and the compiled kernel must agree
        # bit-for-bit, so IEEE semantics are required.
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions())
