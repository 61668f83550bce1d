from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the pure-Python
# term operations when the extension is unavailable.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "peerhol.kernel._speedup",
                ["src/peerhol/kernel/_speedup.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
