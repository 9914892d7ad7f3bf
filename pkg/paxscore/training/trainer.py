import sys
import math
from typing import List, Optional, Sequence

import numpy as np

from .config import TrainConfig
from .manifest import DatasetManifest, load_manifest
from .dataset import build_graphs
from .checkpoint import Checkpoint
from ..graph import MultiplexGraph
from ..model import PaxNet, collate, forward
from ..tensor import AdamState, adam_step, no_grad, smooth_l1, mean
from ..time import TimeIt
from ..utils import load_logger, batched


class Trainer:
	'''
	Mini-batch trainer: seeded shuffling, mean smooth-L1 per batch, Adam,
	once-per-epoch validation and early stopping on the validation loss.

	Args:
		- config (TrainConfig, default=None): TrainConfig() when None.
		- stream (file, default=None): receives the
			"epoch<TAB>train_loss<TAB>val_loss" line of every epoch;
			sys.stdout at call time when None.
		- verbose (bool, default=True): False silences the epoch lines.
		- debug_level (str, default='INFO')
	'''
	def __init__(
		self,
		config: TrainConfig=None,
		stream=None,
		verbose: bool=True,
		debug_level: str='INFO',
		):
		self.config = config or TrainConfig()
		self.stream = stream
		self.verbose = verbose
		self.logger = load_logger(self.__class__.__name__, debug_level=debug_level)
		self.history = []

	def prepare(self, manifest: DatasetManifest) -> List[MultiplexGraph]:
		'''
		Fail-fast preflight: every entry must parse and build a graph.
		'''
		with TimeIt(text=f'graph preflight ({len(manifest)} entries)', logger=self.logger):
			return build_graphs(
				[e.path for e in manifest],
				self.config.model,
				threads=self.config.threads,
			)

	def loss(self, graphs: Sequence[MultiplexGraph], labels: np.ndarray, params):
		y = forward(collate(graphs, self.config.model), params, self.config.model)
		return mean(smooth_l1(y, labels, beta=self.config.smooth_l1_beta))

	def evaluate(self, graphs: Sequence[MultiplexGraph], labels: np.ndarray, params) -> float:
		'''
		Mean smooth-L1 over every sample, without graph recording.
		'''
		total = 0.0
		with no_grad():
			for idx in batched(np.arange(len(graphs)), self.config.batch_size):
				loss = self.loss([graphs[i] for i in idx], labels[idx], params)
				total += loss.item() * len(idx)
		return total / len(graphs)

	def _emit(self, epoch, train_loss, val_loss):
		self.history.append((epoch, train_loss, val_loss))
		if self.verbose:
			print(f'{epoch}\t{train_loss!r}\t{val_loss!r}', file=self.stream or sys.stdout, flush=True)

	def fit(
		self,
		train: DatasetManifest,
		val: Optional[DatasetManifest]=None,
		) -> Checkpoint:
		'''
		Train from scratch.

		Args:
			- train (DatasetManifest): non-empty.
			- val (DatasetManifest, default=None): falls back to
				config.val_manifest, then to the training loss.

		Returns:
			- ckpt (Checkpoint): best-validation parameters with the
				optimizer state of that epoch.
		'''
		cfg = self.config

		if len(train) == 0:
			raise ValueError('Training manifest is empty.')

		if val is None and cfg.val_manifest is not None:
			val = load_manifest(cfg.val_manifest)
		if val is not None and len(val) == 0:
			raise ValueError('Validation manifest is empty.')

		train_graphs = self.prepare(train)
		train_labels = np.asarray(train.labels, dtype=np.float64)

		val_graphs = self.prepare(val) if val is not None else None
		val_labels = np.asarray(val.labels, dtype=np.float64) if val is not None else None

		model = PaxNet(cfg.model)
		model.report_param_count()
		params = model.params

		state = AdamState(lr=cfg.learning_rate, beta1=cfg.beta1, beta2=cfg.beta2, eps=cfg.eps)
		rng = np.random.default_rng(cfg.seed)

		best_loss = math.inf
		best_epoch = 0
		best_params = None
		best_state = None
		stale = 0
		epoch = 0

		self.history = []
		self.logger.info(
			f'Training on {len(train)} samples ({"no" if val is None else len(val)} validation), '
			f'batch {cfg.batch_size}, lr {cfg.learning_rate}.'
		)

		for epoch in range(1, cfg.max_epochs + 1):
			order = rng.permutation(len(train_graphs))
			total = 0.0

			for idx in batched(order, cfg.batch_size):
				params.zero_grad()
				loss = self.loss([train_graphs[i] for i in idx], train_labels[idx], params)
				loss.backward()
				adam_step(params, params.grads(), state)
				total += loss.item() * len(idx)

			train_loss = total / len(train_graphs)

			if val is None:
				val_loss = train_loss
			else:
				val_loss = self.evaluate(val_graphs, val_labels, params)

			self._emit(epoch, train_loss, val_loss)

			if val_loss < best_loss:
				best_loss = val_loss
				best_epoch = epoch
				best_params = params.state_dict()
				best_state = state.copy()
				stale = 0
			else:
				stale += 1
				if cfg.patience is not None and stale >= cfg.patience:
					self.logger.info(f'Early stop at epoch {epoch}; best epoch {best_epoch}.')
					break

		params.load_state_dict(best_params)

		return Checkpoint(
			config=cfg.model,
			params=params,
			optimizer=best_state,
			metadata={
				'epoch': best_epoch,
				'epochs_run': epoch,
				'best_val_loss': best_loss,
				'seed': cfg.seed,
				# checkpoint bytes must not depend on threads
				'train_config': cfg.model_dump(exclude={'threads'}),
			},
		)


def train(
	train: DatasetManifest,
	config: TrainConfig=None,
	val: DatasetManifest=None,
	stream=None,
	verbose: bool=True,
	debug_level: str='INFO',
	) -> Checkpoint:
	'''
	Train a PaxNet on a manifest and return the best checkpoint.
	'''
	return Trainer(config, stream=stream, verbose=verbose, debug_level=debug_level).fit(train, val=val)
