from setuptools import find_packages, setup

DESCRIPTION = "Forecast verification engine and desk-scale forecasting \
    harness for gridded and station benchmarks"

with open("requirements.txt") as requirements_file:
    requirements = requirements_file.read().splitlines()

with open("README.md", "r", encoding="utf-8") as readme_file:
    readme = readme_file.read()

setup(
    name="deepverif",
    author="deepverif developers",
    version="0.1.0",
    description=DESCRIPTION,
    long_description=readme,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.9",
    install_requires=requirements,
    entry_points={
        "console_scripts": ["deepverif=deepverif.cli.main:main"],
    },
)
