from setuptools import find_packages, setup

setup(
    name="pencil-rpd",
    version="0.1.0",
    package_dir={"": "src"},
    packages=find_packages("src"),
    include_package_data=True,
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "python-dotenv",
        "pandas",
        "click>=8.0.0",
        "rich-click>=1.6.1",
        "rich>=13.3.5",
    ],
    entry_points={
        "console_scripts": [
            "pencil-rpd=pencil_rpd.main:main",
        ],
    },
    description="Randomized inverse-free diagonalization of matrix pencils",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.9",
)
