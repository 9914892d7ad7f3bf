from setuptools import setup, find_packages
from paxscore import __version__

with open('README.md', 'r') as f:
	long_description = f.read()

setup(
	description='Multiplex graph neural network scoring of RNA 3D structural models.',
	long_description=long_description,
	long_description_content_type='text/markdown',
	name='paxscore',
	version=__version__,
	packages=find_packages(include=['paxscore', 'paxscore.*']),
	include_package_data=True,
	python_requires='>=3.9',
	install_requires=[
		'numpy',
		'pandas>=1.5',
		'click>=8.2',
		'pydantic>=2',
	],
	extras_require={
		'test': ['pytest'],
	},
	entry_points={
		'console_scripts': [
			'paxscore=paxscore.cli:main',
		],
	},
)
