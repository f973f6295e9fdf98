from setuptools import find_packages, setup

setup(
    name="torchgrushin",
    version="0.0",
    description="joint functional calculus and restriction estimates for Grushin operators",
    license="BSD",
    packages=find_packages(exclude=("tests",)),
    install_requires=[
        "fannypack",
        "hypothesis",
        "numpy",
        "overrides",
        "pytest",
        "pyyaml",
        "scipy",
        "torch",
        "tqdm",
    ],
    entry_points={"console_scripts": ["torchgrushin=torchgrushin.cli:main"]},
)
