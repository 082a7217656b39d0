import os
import setuptools

__location__ = os.path.realpath(os.path.join(os.getcwd(), os.path.dirname(__file__)))

# Open version file
version_file = open(os.path.join(__location__, 'VERSION'))

# Get version number
version = version_file.read().strip()

setuptools.setup(
    name='rational-herglotz-pencils-cli',
    version=version,
    scripts=['rhp'] ,
    author="Alex Bennett",
    author_email="abennett@elexausa.com",
    description="Rational Herglotz pencil toolkit CLI",
    long_description="Command-line front end for rational-herglotz-pencils; \
            emits CSV/JSON for spectra, shooting, WKB and rabies experiments.",
    url="https://github.com/elexausa/rational-herglotz-pencils",
    packages=setuptools.find_packages(exclude=['tests']),
    install_requires=[
        'Click==7.0',
        'rational-herglotz-pencils'
    ],
    classifiers=[
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
    ],
 )
