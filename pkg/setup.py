#! /usr/bin/env python
#

DESCRIPTION = "solspace: solution-space topology and search-geometry laboratory"
LONG_DESCRIPTION = """ Generates CNF formula families, computes cubical-complex Betti numbers of their solution sets and runs the shattering, walk-strategy, XOR-closure and conflict-scaling experiments. """

DISTNAME = 'solspace'
AUTHOR = 'solspace developers'
MAINTAINER = 'solspace developers'
MAINTAINER_EMAIL = ''
URL = ''
LICENSE = 'BSD (3-clause)'
VERSION = '0.1.0'

try:
    from setuptools import setup, find_packages
    _has_setuptools = True
except ImportError:
    from distutils.core import setup
    _has_setuptools = False

if __name__ == "__main__":

    if _has_setuptools:
        packages = find_packages(exclude=["tests", "examples", "examples.*"])
    else:
        # This should be updated if new submodules are added
        packages = ['solspace',
                    "solspace.dask",
                    "solspace.script",
                    "solspace.utils"]

    setup(name=DISTNAME,
          author=AUTHOR,
          author_email=MAINTAINER_EMAIL,
          maintainer=MAINTAINER,
          maintainer_email=MAINTAINER_EMAIL,
          description=DESCRIPTION,
          long_description=LONG_DESCRIPTION,
          license=LICENSE,
          url=URL,
          version=VERSION,
          python_requires=">=3.8",
          install_requires=[
                "dask>=2023.2.1",
                "matplotlib>=3.5",
                "numpy>=1.21.6",
                "pandas>=1.3.0",
                "scipy>=1.7",
          ],
          extras_require={"test": ["pytest"]},
          scripts=["bin/solspace.py"],
          packages=packages,
          include_package_data=True,
          package_data={'solspace': ['data/*.json']},
          classifiers=[
              'Intended Audience :: Science/Research',
              'Programming Language :: Python :: 3',
              'License :: OSI Approved :: BSD License',
              'Topic :: Scientific/Engineering :: Mathematics',
              'Operating System :: POSIX',
              'Operating System :: Unix',
              'Operating System :: MacOS'],
          )
