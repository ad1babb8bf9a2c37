# setup.py
from setuptools import setup, find_packages

setup(
    name="visualisation_hsi",
    version="0.1.0",
    description="Visualisation d'images hyperspectrales en couleurs naturelles par apprentissage de variété contraint",
    author="Eric Van Bogaert et al.",
    author_email="contact@example.com",
    packages=find_packages(include=["visualisation_hsi", "visualisation_hsi.*"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.9",
        "spectral>=0.23",
        "pyyaml>=6.0",
        "tqdm>=4.64.0",
        "click>=8.0.0",
    ],
    extras_require={
        "dev": ["pytest>=7.0.0", "pytest-cov>=4.0.0", "black>=22.0.0", "isort>=5.10.0"]
    },
    entry_points={
        "console_scripts": [
            "visualisation-hsi=visualisation_hsi.cli.main:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Image Processing",
    ],
    tests_require=["pytest>=7.0.0", "pytest-cov>=4.0.0"],
)
