from typing import Sequence

import numpy as np

from ..model import PaxNet
from ..training.checkpoint import Checkpoint
from ..training.dataset import build_graphs
from ..training.manifest import DatasetManifest
from ..time import TimeIt
from ..utils import load_logger


class Scorer:
	'''
	Predicted-RMSD scoring with a trained checkpoint.

	Graphs are built in parallel; inference runs sequentially over fixed
	batches of input order, so scores do not depend on the thread count.

	Args:
		- checkpoint (Checkpoint)
		- threads (int, default=1)
		- batch_size (int, default=8)
		- debug_level (str, default='INFO')
	'''
	def __init__(
		self,
		checkpoint: Checkpoint,
		threads: int=1,
		batch_size: int=8,
		debug_level: str='INFO',
		):
		self.checkpoint = checkpoint
		self.threads = threads
		self.batch_size = batch_size
		self.logger = load_logger(self.__class__.__name__, debug_level=debug_level)
		self.model = PaxNet(checkpoint.config, params=checkpoint.params, debug_level=debug_level)

	def score_paths(self, paths: Sequence[str]) -> np.ndarray:
		paths = list(paths)
		if not paths:
			return np.zeros(0)

		with TimeIt(text=f'scoring {len(paths)} structures', logger=self.logger):
			graphs = build_graphs(paths, self.checkpoint.config, threads=self.threads)
			return self.model.predict(graphs, batch_size=self.batch_size)

	def score_manifest(self, manifest: DatasetManifest) -> np.ndarray:
		return self.score_paths([e.path for e in manifest])


def score_manifest(
	manifest: DatasetManifest,
	checkpoint: Checkpoint,
	threads: int=1,
	) -> np.ndarray:
	'''
	Predicted RMSD per manifest entry, in manifest order.

	Raises EntryError naming the first entry whose graph cannot be built.
	'''
	return Scorer(checkpoint, threads=threads).score_manifest(manifest)
