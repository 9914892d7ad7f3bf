import os

import numpy as np
import pytest

from paxscore.geom import Structure, write_structure
from paxscore.model import ModelConfig
from paxscore.training import (
	DatasetManifest,
	ManifestEntry,
	random_folded_chain,
	synth_decoys,
	write_manifest,
)


def pytest_addoption(parser):
	parser.addoption('--runslow', action='store_true', default=False, help='run slow training experiments')


def pytest_configure(config):
	config.addinivalue_line('markers', 'slow: long-running training experiments')


def pytest_collection_modifyitems(config, items):
	if config.getoption('--runslow'):
		return
	skip = pytest.mark.skip(reason='needs --runslow')
	for item in items:
		if 'slow' in item.keywords:
			item.add_marker(skip)


@pytest.fixture
def tiny_config():
	return ModelConfig(hidden_dim=2, seed=3)


@pytest.fixture
def chain():
	return random_folded_chain(12, seed=7)


@pytest.fixture
def five_atoms():
	positions = np.array([
		[0.0, 0.0, 0.0],
		[1.5, 0.0, 0.0],
		[2.0, 1.4, 0.0],
		[3.4, 1.6, 0.6],
		[4.5, 0.5, 1.0],
	])
	return Structure(id='five', elements=[6, 7, 6, 8, 6], positions=positions)


def make_dataset(folder, n_groups=2, atoms=12, sigmas=(0.5, 2.0, 6.0), count=2, seed=0, name='data.tsv'):
	'''
	Decoy sets of random folded chains written as xyz files plus a manifest.
	'''
	os.makedirs(folder, exist_ok=True)
	entries = []

	for g in range(n_groups):
		native = random_folded_chain(atoms, seed=seed + g, structure_id=f'g{g}_native')
		path = os.path.join(folder, f'{native.id}.xyz')
		write_structure(native, path)
		entries.append(ManifestEntry(path=path, label=0.0, group=f'g{g}'))

		for decoy, label in synth_decoys(native, sigmas, count, seed=seed + 100 + g):
			path = os.path.join(folder, f'{decoy.id}.xyz')
			write_structure(decoy, path)
			entries.append(ManifestEntry(path=path, label=label, group=f'g{g}'))

	manifest = DatasetManifest(entries, path=os.path.join(folder, name))
	write_manifest(manifest, manifest.path)

	return manifest


@pytest.fixture
def dataset(tmp_path):
	return make_dataset(str(tmp_path / 'data'))
