"""Build hook for the optional compiled kernels.

The package works without them: ``measure_modes.kernels`` falls back to
pure Python when the extension is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("measure_modes._kernels", ["src/measure_modes/_kernels.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
