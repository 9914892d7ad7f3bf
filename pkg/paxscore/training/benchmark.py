'''
Scaled-down decoy-ranking experiment on synthetic folded chains.

Not imported by paxscore.training itself, since it depends on
paxscore.evaluation.
'''
import os
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

from .config import TrainConfig
from .manifest import DatasetManifest, ManifestEntry, write_manifest
from .synth import synth_decoys, random_folded_chain
from .trainer import train
from .checkpoint import Checkpoint
from ..geom import write_structure
from ..model import ABLATIONS
from ..evaluation import (
	RankingReport,
	NearNativeMetrics,
	score_manifest,
	rank_predictions,
	near_native_metrics,
	score_correlation,
)
from ..utils import int_to_chunks


logger = logging.getLogger(__name__)

# Per-axis noise; the resulting RMSD labels span roughly 0.5 to 15 Angstrom.
DEFAULT_SIGMAS = tuple(float(i) for i in np.geomspace(0.3, 8.5, 10))


def make_synthetic_dataset(
	workdir: str,
	n_groups: int=5,
	n_train: int=3,
	atoms: Tuple[int, int]=(40, 80),
	decoys_per_group: int=200,
	sigmas: Sequence[float]=DEFAULT_SIGMAS,
	seed: int=0,
	) -> Tuple[DatasetManifest, DatasetManifest]:
	'''
	Write n_groups synthetic RNAs with their decoys under workdir and split
	them by group into train and held-out manifests.

	Decoys per group are spread over sigmas with int_to_chunks; every
	native is kept as a zero-RMSD model of its own group.

	Returns:
		- (train, test) manifests, also written as train.tsv and test.tsv.
	'''
	if not 0 < n_train < n_groups:
		raise ValueError(f'Need 0 < n_train < n_groups, got {n_train} of {n_groups}.')

	rng = np.random.default_rng(seed)
	counts = int_to_chunks(decoys_per_group, len(sigmas))

	entries = {}
	for g in range(n_groups):
		group = f'rna{g}'
		folder = os.path.join(workdir, group)
		os.makedirs(folder, exist_ok=True)

		native = random_folded_chain(
			int(rng.integers(atoms[0], atoms[1] + 1)),
			seed=int(rng.integers(2 ** 31)),
			structure_id=f'{group}_native',
		)

		path = os.path.join(folder, f'{native.id}.xyz')
		write_structure(native, path)
		entries[group] = [ManifestEntry(path=path, label=0.0, group=group)]

		for sigma, count in zip(sigmas, counts):
			decoys = synth_decoys(native, [sigma], count, seed=int(rng.integers(2 ** 31)))
			for decoy, label in decoys:
				path = os.path.join(folder, f'{decoy.id}.xyz')
				write_structure(decoy, path)
				entries[group].append(ManifestEntry(path=path, label=label, group=group))

	groups = list(entries)
	train_set = DatasetManifest([e for g in groups[:n_train] for e in entries[g]])
	test_set = DatasetManifest([e for g in groups[n_train:] for e in entries[g]])

	train_set.path = os.path.join(workdir, 'train.tsv')
	test_set.path = os.path.join(workdir, 'test.tsv')
	write_manifest(train_set, train_set.path)
	write_manifest(test_set, test_set.path)

	logger.info(f'Synthetic dataset: {len(train_set)} train / {len(test_set)} held-out models.')

	return train_set, test_set


@dataclass
class BenchmarkResult:
	checkpoint: Checkpoint
	report: RankingReport
	metrics: NearNativeMetrics
	spearman: pd.Series

	def summary(self) -> dict:
		return {
			**self.metrics.summary,
			'mean_spearman': float(self.spearman.mean()),
			'min_spearman': float(self.spearman.min()),
		}


def evaluate_checkpoint(
	checkpoint: Checkpoint,
	test_set: DatasetManifest,
	threshold: float=2.0,
	threads: int=1,
	) -> Tuple[RankingReport, NearNativeMetrics, pd.Series]:
	scores = score_manifest(test_set, checkpoint, threads=threads)
	report = rank_predictions(test_set, scores)
	return report, near_native_metrics(report, threshold=threshold), score_correlation(report)


def run_synthetic_benchmark(
	workdir: str,
	config: TrainConfig=None,
	threshold: float=2.0,
	**dataset_kwargs,
	) -> BenchmarkResult:
	'''
	Generate the synthetic dataset, train on the training groups and rank
	the held-out ones.

	Args:
		- workdir (str): receives structures, manifests and checkpoints.
		- config (TrainConfig, default=None)
		- threshold (float, default=2.0): near-native cutoff.
		- **dataset_kwargs: forwarded to make_synthetic_dataset.
	'''
	config = config or TrainConfig()
	train_set, test_set = make_synthetic_dataset(workdir, **dataset_kwargs)
	return _run(train_set, test_set, config, threshold)


def _run(train_set, test_set, config, threshold) -> BenchmarkResult:
	ckpt = train(train_set, config, verbose=False)
	report, metrics, spearman = evaluate_checkpoint(ckpt, test_set, threshold, threads=config.threads)

	logger.info(
		f'{config.model.ablation}: top-1 {metrics.summary["top1_success_rate"]:.2f}, '
		f'mean Spearman {spearman.mean():.3f}.'
	)

	return BenchmarkResult(checkpoint=ckpt, report=report, metrics=metrics, spearman=spearman)


def run_ablation_study(
	workdir: str,
	config: TrainConfig=None,
	ablations: Sequence[str]=ABLATIONS,
	threshold: float=2.0,
	**dataset_kwargs,
	) -> pd.DataFrame:
	'''
	The synthetic benchmark once per ablation mode on one shared dataset.

	Returns:
		- table (pd.DataFrame): one row per ablation with the summary
			metrics of BenchmarkResult.summary.
	'''
	config = config or TrainConfig()
	train_set, test_set = make_synthetic_dataset(workdir, **dataset_kwargs)

	rows = []
	for ablation in ablations:
		variant = config.replace(model=config.model.replace(ablation=ablation))
		result = _run(train_set, test_set, variant, threshold)
		rows.append({'ablation': ablation, **result.summary()})

	return pd.DataFrame(rows).set_index('ablation')
