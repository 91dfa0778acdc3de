"""Builds the C++ extension; all metadata lives in pyproject.toml."""

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup

ParallelCompile("UAVNET_NUM_BUILD_JOBS").install()

ext = Pybind11Extension(
    "uavnet._core",
    sorted(
        [
            "src/scenario.cpp",
            "src/scenario_json.cpp",
            "src/radio.cpp",
            "src/energy.cpp",
            "src/mlp.cpp",
            "src/action_space.cpp",
            "src/checkpoint.cpp",
            "src/env.cpp",
            "src/ddpg.cpp",
            "src/apc.cpp",
            "src/eval.cpp",
            "src/pybind.cpp",
        ]
    ),
    include_dirs=["include", "vendor", "/usr/include/eigen3"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
