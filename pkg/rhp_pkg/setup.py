import os
import setuptools

__location__ = os.path.realpath(os.path.join(os.getcwd(), os.path.dirname(__file__)))

# Open version file
version_file = open(os.path.join(__location__, 'VERSION'))

# Get version number
version = version_file.read().strip()

setuptools.setup(
    name='rational-herglotz-pencils',
    version=version,
    author="Alex Bennett",
    author_email="abennett@elexausa.com",
    description="Spectral toolkit for rational Herglotz Sturm-Liouville pencils",
    long_description="Solvers for Sturm-Liouville problems whose right-hand side is a \
            rational Herglotz function of the spectral parameter: dense \
            linearization with interval/oscillation indexing, Pruefer-angle \
            shooting, WKB quantization, Herglotz property checkers for \
            reaction-diffusion kinetics and a spatial rabies model with \
            vaccine-strategy sweeps.",
    url="https://github.com/elexausa/rational-herglotz-pencils",
    packages=setuptools.find_packages(exclude=['tests']),
    install_requires=[
        'dataclasses==0.6; python_version < "3.7"',
        'numpy>=1.17',
        'scipy>=1.4'
    ],
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
    ],
 )
