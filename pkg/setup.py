## Setup version using setuptools so that pip install correctly treats the
## package data (test fixtures in increlearn/testdata).

## building source distro : python setup.py sdist
## install from checkout  : pip install -e .

from setuptools import setup, find_packages

import increlearn

EXCLUDE_FROM_PACKAGES = []

long_description = \
 """increlearn is a Python package for semi-supervised incremental learning
on fixed feature vectors: a softmax head is fine-tuned on inputs it was
unsure about, labeled by soft voting against k-means anchors of the
normalized training features, with balanced partial rehearsal.
"""

setup(
    name = "increlearn",
    version = increlearn.__version__,
    url = '',
    download_url= '',
    author = 'increlearn developers',
    author_email = '',
    description = 'semi-supervised incremental learning on feature vectors',
    long_description = long_description,
    provides=['increlearn'],

    ## available on PyPi
    install_requires=['numpy', 'scikit-learn', 'hypothesis', 'sphinx',
                      'sphinx_rtd_theme'],
    packages=find_packages(exclude=EXCLUDE_FROM_PACKAGES),
    include_package_data=True,
    package_data={'increlearn': ['testdata/*']},
    scripts = ['increlearn/scripts/ilearn.py'],

    classifiers= ['License :: OSI Approved :: Apache Software License',
                  'Topic :: Scientific/Engineering :: Artificial Intelligence',
                  'Programming Language :: Python :: 3',
                  'Operating System :: OS Independent',
                  'Intended Audience :: Science/Research',
                  'Development Status :: 4 - Beta'
                  ]
)
