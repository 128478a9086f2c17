# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""A setuptools based setup module.

See:
https://packaging.python.org/en/latest/distributing.html
"""

from setuptools import setup

# To use a consistent encoding
from codecs import open
from os import path

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, "README.rst"), encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="shapegeo",
    use_scm_version=True,
    setup_requires=["setuptools_scm"],
    description="Geodesics between triangulated surfaces under curvature weighted metrics",
    long_description=long_description,
    long_description_content_type="text/x-rst",
    url="https://github.com/shapegeo/shapegeo",
    author="shapegeo contributors",
    python_requires=">=3.8",
    install_requires=["numpy", "scipy"],
    extras_require={"test": ["pytest"], "docs": ["sphinx>=4.0.0"]},
    license="MIT",
    # See https://pypi.python.org/pypi?%3Aaction=list_classifiers
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
    ],
    keywords="shape space geodesic riemannian metric mean curvature gauss curvature "
    "triangle mesh",
    packages=["shapegeo"],
    entry_points={"console_scripts": ["shapegeo = shapegeo.cli:main"]},
)
