"""Build script: compiles the optional extension core.

The package is fully functional without the extension (pure-Python engines
are selected at import time when the build is unavailable), so a failing
compile degrades to a warning instead of aborting the install.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def _extensions():
    if not os.path.exists("src/bobastar/_speedups.pyx"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("bobastar: Cython not available, skipping extension core", file=sys.stderr)
        return []
    return cythonize(
        [Extension("bobastar._speedups", ["src/bobastar/_speedups.pyx"])],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


class optional_build_ext(build_ext):
    """Degrade to the pure-Python fallback when no compiler is usable."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"bobastar: extension build skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"bobastar: building {ext.name} failed ({exc}); "
                  "falling back to pure Python", file=sys.stderr)


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
