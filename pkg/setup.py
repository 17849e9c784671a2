"""Build script for the optional compiled search kernel.

If Cython or a C compiler is unavailable the package still installs and
falls back to the pure-Python kernel at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - exercised only without Cython
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "factor_forge._search_ext",
                ["src/factor_forge/_search_ext.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
