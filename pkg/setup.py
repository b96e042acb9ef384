#! /usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
    name="qsgdiag",
    version="1.0.0",
    author="qsgdiag developers",
    description=("Diagonalize hermitean matrices by simulated generalized "
                 "Stern-Gerlach measurements."),
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=["qsgdiag"],
    license="MIT",
    python_requires=">=3.8",
    install_requires=[
        "scipy>=1",
        "numpy>=1.17",
        "numba",
        ],
    extras_require={
        "tests": ["pytest"],
        },
    entry_points={
        "console_scripts": ["qsgdiag=qsgdiag.cli:main"],
        },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
