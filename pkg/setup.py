from setuptools import setup, find_packages

setup(
    name="indefinite_oga",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    include_package_data=True,
    package_data={
        "indefinite_oga": ["experiments/presets/*.json"],
    },
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20.0",
        "scipy>=1.7.0",
        "pandas>=1.5.0",
        "tqdm>=4.60.0",
    ],
    extras_require={
        "test": ["pytest>=6.2.5", "sympy>=1.9"],
    },
    entry_points={
        "console_scripts": [
            "indefinite-oga=indefinite_oga.cli:main",
        ],
    },
)
