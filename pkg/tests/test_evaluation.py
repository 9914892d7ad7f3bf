import itertools

import numpy as np
import pandas as pd
import pytest

from paxscore.model import ModelConfig, init_params
from paxscore.training import Checkpoint, DatasetManifest, ManifestEntry
from paxscore.evaluation import (
	Scorer,
	RankingReport,
	rank_predictions,
	rank_frame,
	near_native_metrics,
	rmsd_band,
	rmsd_band_table,
	band_labels,
	band_summary,
	median_min_rmsd,
	score_correlation,
	score_manifest,
	write_report,
	read_report,
	format_metrics,
	parse_metrics,
)
from paxscore.exceptions import EmptyGroupError, EntryError, ReportError


def frame(rows):
	return pd.DataFrame(rows, columns=['group', 'structure_id', 'score', 'true_rmsd'])


def two_groups():
	'''
	Group a: near-native model ranked first. Group b: near-native models
	ranked 4th and 5th.
	'''
	return rank_frame(frame([
		('a', 'a0', 0.5, 1.2),
		('a', 'a1', 0.9, 3.0),
		('a', 'a2', 1.4, 7.0),
		('b', 'b0', 0.1, 8.0),
		('b', 'b1', 0.2, 6.0),
		('b', 'b2', 0.3, 5.0),
		('b', 'b3', 0.4, 1.5),
		('b', 'b4', 0.5, 0.8),
	]))


def fresh_checkpoint(hidden_dim=2, seed=5):
	config = ModelConfig(hidden_dim=hidden_dim, seed=seed)
	return Checkpoint(config=config, params=init_params(config))


class TestRanking:
	def test_ranks_ascending_score(self):
		report = two_groups()
		a = report.group('a')
		assert a['structure_id'].tolist() == ['a0', 'a1', 'a2']
		assert a['rank'].tolist() == [1, 2, 3]

	def test_group_order_is_first_appearance(self):
		report = rank_frame(frame([
			('z', 'z0', 1.0, 1.0),
			('a', 'a0', 0.0, 1.0),
			('z', 'z1', 0.5, 1.0),
		]))
		assert report.groups == ['z', 'a']
		assert report.frame['structure_id'].tolist() == ['z1', 'z0', 'a0']

	def test_ties_keep_input_order(self):
		report = rank_frame(frame([
			('g', 'first', 1.0, 1.0),
			('g', 'second', 1.0, 1.0),
			('g', 'third', 0.0, 1.0),
		]))
		assert report.group('g')['structure_id'].tolist() == ['third', 'first', 'second']

	def test_missing_group(self):
		with pytest.raises(EmptyGroupError):
			two_groups().group('nope')

	def test_empty_report(self):
		report = rank_frame(frame([]))
		with pytest.raises(EmptyGroupError):
			list(report.iter_groups())

	def test_missing_columns(self):
		with pytest.raises(ValueError):
			RankingReport(pd.DataFrame({'group': ['a']}))

	def test_rank_predictions(self, tmp_path):
		entries = [
			ManifestEntry(path=str(tmp_path / f'{i}.xyz'), label=float(i), group='g')
			for i in range(3)
		]
		report = rank_predictions(DatasetManifest(entries), [3.0, 1.0, 2.0])
		assert report.frame['structure_id'].tolist() == ['1.xyz', '2.xyz', '0.xyz']
		assert report.frame['true_rmsd'].tolist() == [1.0, 2.0, 0.0]

	def test_rank_predictions_bad_scores(self, tmp_path):
		manifest = DatasetManifest([ManifestEntry(path=str(tmp_path / 'a.xyz'), label=1.0, group='g')])
		with pytest.raises(ValueError):
			rank_predictions(manifest, [1.0, 2.0])
		with pytest.raises(ValueError):
			rank_predictions(manifest, [np.nan])


class TestNearNative:
	def test_two_groups(self):
		metrics = near_native_metrics(two_groups(), threshold=2.0, top_ns=(1, 10))
		summary = metrics.summary

		assert summary['n_groups'] == 2
		assert summary['top1_success_rate'] == 0.5
		assert summary['top10_success_rate'] == 1.0
		assert summary['geometric_mean_rank'] == pytest.approx(2.0)
		assert summary['n_no_near_native'] == 0

		per_group = metrics.per_group.set_index('group')
		assert per_group.loc['a', 'best_near_native_rank'] == 1.0
		assert per_group.loc['b', 'best_near_native_rank'] == 4.0

	def test_threshold_is_strict(self):
		report = rank_frame(frame([('g', 'x', 0.0, 2.0), ('g', 'y', 1.0, 1.9)]))
		per_group = near_native_metrics(report, threshold=2.0).per_group
		assert per_group.loc[0, 'best_near_native_rank'] == 2.0
		assert not per_group.loc[0, 'top1']

	def test_group_without_near_native(self):
		report = rank_frame(frame([
			('a', 'a0', 0.0, 1.0),
			('b', 'b0', 0.0, 5.0),
			('b', 'b1', 1.0, 6.0),
		]))
		metrics = near_native_metrics(report)
		assert metrics.summary['n_no_near_native'] == 1
		assert metrics.summary['geometric_mean_rank'] == 1.0
		assert metrics.summary['top1_success_rate'] == 0.5
		assert np.isnan(metrics.per_group.set_index('group').loc['b', 'best_near_native_rank'])

	def test_matches_brute_force(self):
		rng = np.random.default_rng(11)
		rmsd = np.array([0.5, 1.5, 3.0, 4.0, 6.0, 9.0, 12.0])

		for _ in range(10):
			scores = rng.permutation(len(rmsd)).astype(float)
			report = rank_frame(frame([('g', f'm{i}', s, r) for i, (s, r) in enumerate(zip(scores, rmsd))]))

			by_score = rmsd[np.argsort(scores, kind='stable')]
			expected = 1 + int(np.flatnonzero(by_score < 2.0)[0])

			summary = near_native_metrics(report).summary
			assert summary['geometric_mean_rank'] == pytest.approx(expected)
			assert summary['top1_success_rate'] == float(by_score[0] < 2.0)

	def test_monotone_transform_invariant(self):
		report = two_groups()
		moved = report.frame[['group', 'structure_id', 'score', 'true_rmsd']].copy()
		moved['score'] = np.exp(3 * moved['score']) - 7

		a = near_native_metrics(report).summary
		b = near_native_metrics(rank_frame(moved)).summary
		assert a == b

	def test_missing_rmsd(self):
		report = rank_frame(frame([('g', 'x', 0.0, np.nan)]))
		with pytest.raises(ValueError):
			near_native_metrics(report)


class TestBands:
	def test_labels(self):
		assert band_labels() == ['<2', '2-5', '5-10', '>10']

	@pytest.mark.parametrize('rmsd, band', [(0.3, '<2'), (2.0, '2-5'), (4.99, '2-5'), (5.0, '5-10'), (10.0, '>10'), (42.0, '>10')])
	def test_band(self, rmsd, band):
		assert rmsd_band(rmsd) == band

	def test_best_first(self):
		report = rank_frame(frame([
			('g', 'x', 0.0, 1.0),
			('g', 'y', 1.0, 6.0),
			('g', 'z', 2.0, 12.0),
		]))
		table = rmsd_band_table(report).set_index('top_n')
		assert table.loc[1, 'band'] == '<2'
		assert table.loc[1, 'min_rmsd'] == 1.0

	def test_worst_first(self):
		report = rank_frame(frame([
			('g', 'x', 2.0, 1.0),
			('g', 'y', 1.0, 6.0),
			('g', 'z', 0.0, 12.0),
		]))
		table = rmsd_band_table(report).set_index('top_n')
		assert table.loc[1, 'band'] == '>10'
		assert table.loc[10, 'band'] == '<2'
		assert table.loc[100, 'band'] == '<2'

	def test_summary(self):
		summary = band_summary(rmsd_band_table(two_groups()))
		assert summary.columns.tolist() == ['<2', '<5', '<10']
		assert summary.loc[1].tolist() == [1, 1, 2]
		assert summary.loc[10].tolist() == [2, 2, 2]

	def test_median_min_rmsd(self):
		assert median_min_rmsd(two_groups(), top_n=1) == pytest.approx((1.2 + 8.0) / 2)
		assert median_min_rmsd(two_groups(), top_n=10) == pytest.approx((1.2 + 0.8) / 2)


class TestCorrelation:
	def test_perfect_and_reversed(self):
		report = rank_frame(frame([
			('up', 'u0', 0.0, 1.0),
			('up', 'u1', 1.0, 2.0),
			('up', 'u2', 2.0, 3.0),
			('down', 'd0', 0.0, 3.0),
			('down', 'd1', 1.0, 2.0),
			('down', 'd2', 2.0, 1.0),
		]))
		rho = score_correlation(report)
		assert rho['up'] == pytest.approx(1.0)
		assert rho['down'] == pytest.approx(-1.0)

	def test_constant_scores(self):
		report = rank_frame(frame([('g', 'a', 1.0, 1.0), ('g', 'b', 1.0, 2.0)]))
		assert np.isnan(score_correlation(report)['g'])


class TestReport:
	def test_round_trip(self, tmp_path):
		report = two_groups()
		metrics = {'n_groups': 2, 'geometric_mean_rank': 2.0, 'missing': float('nan')}
		path = str(tmp_path / 'report.tsv')

		write_report(report, path, metrics=metrics)
		back, parsed = read_report(path)

		pd.testing.assert_frame_equal(back.frame, report.frame, check_dtype=False)
		assert parsed['n_groups'] == 2
		assert parsed['geometric_mean_rank'] == 2.0
		assert np.isnan(parsed['missing'])

	def test_hash_and_na_in_ids(self, tmp_path):
		report = rank_frame(frame([
			('g#1', 'decoy#1.pdb', 0.5, 1.0),
			('g#1', 'decoy2.pdb', 0.7, 3.0),
			('NA', 'nan', 0.1, 2.5),
		]))
		path = str(tmp_path / 'report.tsv')
		write_report(report, path, metrics={'n_groups': 2})

		back, parsed = read_report(path)
		assert back.frame['structure_id'].tolist() == ['decoy#1.pdb', 'decoy2.pdb', 'nan']
		assert back.groups == ['g#1', 'NA']
		np.testing.assert_array_equal(back.frame['score'], report.frame['score'])
		assert parsed == {'n_groups': 2}

	def test_unreadable_report(self, tmp_path):
		path = tmp_path / 'report.tsv'
		path.write_text('a\tb\n1\t2\n')
		with pytest.raises(ReportError):
			read_report(str(path))

	def test_format_metrics(self):
		text = format_metrics({'a': 1, 'b': 0.1, 'c': float('nan')})
		assert text == 'a=1\nb=0.1\nc=nan\n'
		assert format_metrics({}) == ''

	def test_parse_metrics(self):
		assert parse_metrics('# x=3\ny=0.25\nnoise\n') == {'x': 3, 'y': 0.25}


class TestScoring:
	def test_empty(self):
		assert Scorer(fresh_checkpoint()).score_paths([]).shape == (0,)

	def test_scores_are_finite_and_ordered(self, dataset):
		ckpt = fresh_checkpoint()
		paths = [e.path for e in dataset][:5]

		scores = Scorer(ckpt).score_paths(paths)
		assert scores.shape == (5,)
		assert np.all(np.isfinite(scores))

		reversed_scores = Scorer(ckpt).score_paths(paths[::-1])
		np.testing.assert_allclose(reversed_scores, scores[::-1], rtol=1e-12)

	def test_threads_do_not_change_scores(self, dataset):
		ckpt = fresh_checkpoint()
		a = score_manifest(dataset, ckpt, threads=1)
		b = score_manifest(dataset, ckpt, threads=4)
		np.testing.assert_array_equal(a, b)

	def test_bad_entry(self, tmp_path, dataset):
		bad = tmp_path / 'bad.xyz'
		bad.write_text('2\nC 0 0 0\nO 1.5 x 0\n')
		with pytest.raises(EntryError) as e:
			Scorer(fresh_checkpoint()).score_paths([dataset[0].path, str(bad)])
		assert 'bad.xyz' in str(e.value)
