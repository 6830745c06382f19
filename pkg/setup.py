"""Build hook for the optional compiled kernels.

The Cython extension is built when Cython and a C compiler are available; a
failed build leaves the pure-Python kernels in charge.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print("warning: compiled kernels not built (%s); using pure Python" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print("warning: could not build %s (%s)" % (ext.name, exc))


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("diagkit._kernels", ["src/diagkit/_kernels.pyx"], extra_compile_args=["-O2"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:  # pragma: no cover
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
