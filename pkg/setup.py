#!/usr/bin/env python
#
import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

version = {}
with open("nmdslab/version.py") as fp:
    exec(fp.read(), version)

setuptools.setup(
    name="nmdslab",
    version=version["__version__"],
    description="Construction, verification and search of near-MDS diffusion matrices",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["test", "test.*"]),
    package_data={"nmdslab": ["data/catalog.json"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    install_requires=["numpy", "scipy", "lark"],
    extras_require={"docs": ["mkdocs", "pymdown-extensions"], "mpi": ["mpi4py"]},
    entry_points={
        "console_scripts": [
            "nmdslab = nmdslab.__main__:main",
            "nmdslab.mpi = nmdslab.__main__:main_mpi",
        ]
    },
    python_requires=">=3.6",
)
