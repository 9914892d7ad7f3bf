import numpy as np
import pytest

from paxscore.model import ModelConfig, ABLATIONS
from paxscore.training import TrainConfig, load_manifest
from paxscore.training.benchmark import (
	make_synthetic_dataset,
	run_synthetic_benchmark,
	run_ablation_study,
)


class TestSyntheticDataset:
	def test_split_by_group(self, tmp_path):
		train_set, test_set = make_synthetic_dataset(
			str(tmp_path), n_groups=3, n_train=2, atoms=(12, 16),
			decoys_per_group=7, sigmas=(0.5, 2.0, 6.0),
		)
		assert train_set.groups == ['rna0', 'rna1']
		assert test_set.groups == ['rna2']
		assert len(train_set) == 2 * (1 + 7)
		assert not set(train_set.groups) & set(test_set.groups)

		back = load_manifest(train_set.path)
		assert [e.path for e in back] == [e.path for e in train_set]
		np.testing.assert_array_equal(back.labels, train_set.labels)

	def test_natives_have_zero_label(self, tmp_path):
		_, test_set = make_synthetic_dataset(
			str(tmp_path), n_groups=2, n_train=1, atoms=(12, 12),
			decoys_per_group=3, sigmas=(1.0,),
		)
		assert test_set[0].label == 0.0
		assert all(e.label > 0 for e in list(test_set)[1:])

	def test_bad_split(self, tmp_path):
		with pytest.raises(ValueError):
			make_synthetic_dataset(str(tmp_path), n_groups=2, n_train=2)


class TestBenchmark:
	def test_smoke(self, tmp_path):
		config = TrainConfig(max_epochs=2, learning_rate=1e-3, model=ModelConfig(hidden_dim=2))
		result = run_synthetic_benchmark(
			str(tmp_path), config, n_groups=3, n_train=2, atoms=(10, 12),
			decoys_per_group=4, sigmas=(0.5, 4.0),
		)
		summary = result.summary()
		assert summary['n_groups'] == 1
		assert len(result.report) == 5
		assert set(summary) >= {'top1_success_rate', 'geometric_mean_rank', 'mean_spearman'}

	@pytest.mark.slow
	def test_held_out_ranking(self, tmp_path):
		config = TrainConfig(max_epochs=60, patience=None, learning_rate=1e-3, threads=4)
		result = run_synthetic_benchmark(str(tmp_path), config)

		assert (result.spearman > 0.8).all()
		assert result.metrics.per_group['top1'].sum() >= 1

	@pytest.mark.slow
	def test_ablations(self, tmp_path):
		config = TrainConfig(max_epochs=20, patience=None, learning_rate=1e-3, threads=4)
		table = run_ablation_study(str(tmp_path), config, decoys_per_group=60)

		assert table.index.tolist() == list(ABLATIONS)
		assert np.isfinite(table['mean_spearman']).all()
