from setuptools import Extension, setup

# The compiled kernels must produce bit-identical floating point results to
# their pure-Python twins in predalgs/_kernels_pure.py.  That rules out
# -ffast-math and fused multiply-add contraction, which change rounding.
# Plain -O2 with contraction disabled keeps every operation IEEE-754 exact
# while still running the hot loops at C speed.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "predalgs._kernels_cy",
                ["src/predalgs/_kernels_cy.pyx"],
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
