#!/usr/bin/env python
import io
from setuptools import setup, find_packages

with io.open('./README.rst', encoding='utf-8') as f:
    readme = f.read()

setup(
    name="PyIRSDRL",
    version="0.1.0",
    description='Multi-IRS multi-cell uplink simulator with per-BS deep Q-learning agents',
    long_description=readme,
    packages=find_packages(exclude=['tests*', 'pyirsdrl.tests*']),
    python_requires='>=3.8',
    install_requires=[
        "numpy",
        "scipy",
        "arrow",
        "tqdm",
    ],
    entry_points={
        "console_scripts": [
            "pyirsdrl = pyirsdrl.cli:main",
        ],
    },
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: Implementation :: CPython',
        'License :: OSI Approved :: Apache Software License',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering',
    ],
    keywords=("IRS", "reinforcement learning", "cellular", "simulation"),
    license="Apache 2.0 Licence",
)
