import os

from setuptools import setup

ext_modules = []
if not os.environ.get("CHAOSQAM_NO_EXTENSION"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "chaosqam._kernels",
                    ["src/chaosqam/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no FMA contraction: compiled and fallback kernels must agree bit for bit
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
