from setuptools import setup, find_packages

setup(
    name="umbilicas",
    version="1.0.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "numpy==1.26.4",
        "scipy==1.12.0",
        "pandas==2.2.0",
        "python-dotenv==1.0.1",
    ],
    extras_require={
        "test": [
            "pytest==8.0.0",
            "hypothesis==6.98.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "umbilicas=src.tools.umbilicas_cli:main",
        ],
    },
    python_requires=">=3.9",
    author="Kauã Barcellos",
    description="Superfícies totalmente umbílicas em grupos de Lie métricos tridimensionais",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
)
