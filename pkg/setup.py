"""Build hook for the optional compiled kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so a failed compile only costs speed.  Set
KHDETECT_NO_EXT=1 to skip the extension build entirely.
"""

import os
import sys

from setuptools import setup

ext_modules = []
if not os.environ.get("KHDETECT_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                "src/khdetect/_core.pyx",
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
        for ext in ext_modules:
            ext.include_dirs.append(numpy.get_include())
    except Exception as exc:  # pragma: no cover - build-time only
        sys.stderr.write(
            "khdetect: skipping compiled kernels (%s); pure fallback will be used\n" % exc
        )
        ext_modules = []

setup(ext_modules=ext_modules)
