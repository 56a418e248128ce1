"""CMake-driven build of the rgpucb._core extension.

The C++ core, CLI and tests build with plain CMake; this shim lets
`pip install .` (or `pip install -e . --no-build-isolation`) build just the
extension module and drop it inside the python package.
"""

import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        ext_path.parent.mkdir(parents=True, exist_ok=True)

        cfg = [
            "cmake",
            "-S",
            str(source_dir),
            "-B",
            str(build_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            "-DRGPUCB_BUILD_TESTING=OFF",
            "-DRGPUCB_BUILD_CLI=OFF",
            "-DRGPUCB_BUILD_PYTHON=ON",
            f"-DPYTHON_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(cfg, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core",
             "-j", str(os.cpu_count() or 2)],
            check=True,
        )

        built = sorted(build_dir.glob("_core*.so")) + sorted(build_dir.glob("_core*.pyd"))
        if not built:
            raise RuntimeError("cmake did not produce the _core module")
        shutil.copy2(built[0], ext_path)


setup(
    ext_modules=[CMakeExtension("rgpucb._core")],
    cmdclass={"build_ext": CMakeBuild},
)
