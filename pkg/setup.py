import setuptools

from hyperbanana import __version__

setuptools.setup(
    name='hyperbanana-rigidity',
    version=__version__,
    description='Maxwell counts and generic rigidity of banana and hyperbanana graphs',
    license='MIT',
    packages=setuptools.find_packages(exclude=('tests*',)),
    install_requires=[
        # moved to requirements.txt
    ],
    package_data={'hyperbanana': [
        'logging.conf'
    ]},
    entry_points={'console_scripts': [
        'hyperbanana=hyperbanana.__main__:main',
    ]},
    python_requires='>=3.10',
    zip_safe=False,
)
