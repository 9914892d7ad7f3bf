import logging
from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np
import pandas as pd

from ..training.manifest import DatasetManifest
from ..exceptions import EmptyGroupError


logger = logging.getLogger(__name__)

COLUMNS = ['group', 'structure_id', 'score', 'true_rmsd', 'rank']

NEAR_NATIVE = 2.0
BAND_THRESHOLDS = (2.0, 5.0, 10.0)
BAND_TOP_NS = (1, 10, 100)


@dataclass
class RankingReport:
	'''
	Scored models ranked within each group.

	frame holds one row per model with COLUMNS; rows come grouped in
	first-appearance order of the group and by rank inside it. Ranks are
	1-based and ordered by ascending score, ties kept in input order.
	'''
	frame: pd.DataFrame

	def __post_init__(self):
		missing = set(COLUMNS) - set(self.frame.columns)
		if missing:
			raise ValueError(f'Ranking frame is missing columns {sorted(missing)}.')

	def __len__(self):
		return len(self.frame)

	@property
	def groups(self):
		return list(pd.unique(self.frame['group']))

	def group(self, name: str) -> pd.DataFrame:
		g = self.frame[self.frame['group'] == name]
		if g.empty:
			raise EmptyGroupError(f'Group {name!r} has no models.')
		return g.sort_values('rank', kind='mergesort')

	def iter_groups(self):
		if self.frame.empty:
			raise EmptyGroupError('Report has no models.')
		for name in self.groups:
			yield name, self.group(name)


def rank_predictions(
	manifest: DatasetManifest,
	scores: Sequence[float],
	) -> RankingReport:
	'''
	Attach scores to manifest entries and rank them per group.

	Args:
		- manifest (DatasetManifest): labels are the true RMSDs.
		- scores (list of float): one per entry, manifest order.

	Returns:
		- report (RankingReport)
	'''
	scores = np.asarray(scores, dtype=np.float64)
	if scores.shape != (len(manifest),):
		raise ValueError(f'Expected {len(manifest)} scores, got {scores.shape}.')
	if not np.all(np.isfinite(scores)):
		raise ValueError('Scores must be finite.')

	frame = pd.DataFrame({
		'group': [e.group for e in manifest],
		'structure_id': [e.structure_id for e in manifest],
		'score': scores,
		'true_rmsd': np.asarray(manifest.labels, dtype=np.float64),
	})

	return rank_frame(frame)


def rank_frame(frame: pd.DataFrame) -> RankingReport:
	'''
	(Re)compute 1-based per-group ranks of a (group, structure_id, score,
	true_rmsd) frame given in input order.
	'''
	frame = frame.reset_index(drop=True).copy()
	frame['group'] = frame['group'].astype(str)

	group_order = {g: i for i, g in enumerate(pd.unique(frame['group']))}

	# mergesort keeps input order among equal scores
	ranked = frame.sort_values('score', kind='mergesort')
	ranked['rank'] = ranked.groupby('group', sort=False).cumcount() + 1

	ranked['_group'] = ranked['group'].map(group_order)
	ranked = ranked.sort_values(['_group', 'rank'], kind='mergesort')

	return RankingReport(ranked[COLUMNS].reset_index(drop=True))


@dataclass
class NearNativeMetrics:
	'''
	per_group: group, has_near_native, top{n} hits, best_near_native_rank
	(NaN without a near-native model). summary: aggregate scalars.
	'''
	per_group: pd.DataFrame
	summary: Dict[str, float] = field(default_factory=dict)


def _require_rmsd(report: RankingReport):
	if report.frame['true_rmsd'].isna().any():
		raise ValueError('Near-native metrics need a true RMSD for every model.')


def near_native_metrics(
	report: RankingReport,
	threshold: float=NEAR_NATIVE,
	top_ns: Sequence[int]=(1, 10),
	) -> NearNativeMetrics:
	'''
	Near-native retrieval statistics.

	Per group: whether the N best-scoring models hold a model with true
	RMSD below threshold, and the rank of the best-scoring such model.
	Aggregates: success fraction per N and the geometric mean of the
	best near-native ranks, over groups that have a near-native model.
	Groups without one are counted in n_no_near_native.
	'''
	_require_rmsd(report)

	rows = []
	for name, g in report.iter_groups():
		near = (g['true_rmsd'] < threshold).to_numpy()
		ranks = g['rank'].to_numpy()

		row = {'group': name, 'n_models': len(g), 'has_near_native': bool(near.any())}
		for n in top_ns:
			row[f'top{n}'] = bool(near[:n].any())
		row['best_near_native_rank'] = float(ranks[near].min()) if near.any() else np.nan
		rows.append(row)

	per_group = pd.DataFrame(rows)

	ranked = per_group['best_near_native_rank'].dropna()

	summary = {'threshold': float(threshold), 'n_groups': len(per_group)}
	for n in top_ns:
		summary[f'top{n}_success_rate'] = float(per_group[f'top{n}'].mean())
	summary['geometric_mean_rank'] = float(np.exp(np.log(ranked).mean())) if len(ranked) else float('nan')
	summary['n_no_near_native'] = int((~per_group['has_near_native']).sum())

	return NearNativeMetrics(per_group=per_group, summary=summary)


def band_labels(thresholds: Sequence[float]=BAND_THRESHOLDS):
	t = [f'{i:g}' for i in thresholds]
	return [f'<{t[0]}'] + [f'{a}-{b}' for a, b in zip(t, t[1:])] + [f'>{t[-1]}']


def rmsd_band(rmsd: float, thresholds: Sequence[float]=BAND_THRESHOLDS) -> str:
	'''
	Band label of an RMSD; lower bounds are inclusive, so 2.0 falls in 2-5.
	'''
	return band_labels(thresholds)[int(np.searchsorted(thresholds, rmsd, side='right'))]


def rmsd_band_table(
	report: RankingReport,
	thresholds: Sequence[float]=BAND_THRESHOLDS,
	top_ns: Sequence[int]=BAND_TOP_NS,
	) -> pd.DataFrame:
	'''
	Lowest true RMSD among the N best-scoring models of every group, with
	its band. N beyond the group size covers the whole group.

	Returns:
		- table (pd.DataFrame): group, top_n, min_rmsd, band.
	'''
	_require_rmsd(report)
	thresholds = sorted(thresholds)

	rows = []
	for name, g in report.iter_groups():
		rmsd = g['true_rmsd'].to_numpy()
		for n in top_ns:
			m = float(rmsd[:n].min())
			rows.append({'group': name, 'top_n': n, 'min_rmsd': m, 'band': rmsd_band(m, thresholds)})

	return pd.DataFrame(rows, columns=['group', 'top_n', 'min_rmsd', 'band'])


def band_summary(table: pd.DataFrame, thresholds: Sequence[float]=BAND_THRESHOLDS) -> pd.DataFrame:
	'''
	Groups whose N best-scoring models reach below each threshold, one row
	per N.
	'''
	out = pd.DataFrame(index=pd.Index(sorted(table['top_n'].unique()), name='top_n'))
	for t in sorted(thresholds):
		hits = table[table['min_rmsd'] < t].groupby('top_n')['group'].nunique()
		out[f'<{t:g}'] = hits.reindex(out.index, fill_value=0).astype(int)
	return out


def median_min_rmsd(report: RankingReport, top_n: int=10) -> float:
	'''
	Median over groups of the lowest true RMSD among the top_n models.
	'''
	_require_rmsd(report)
	mins = [float(g['true_rmsd'].iloc[:top_n].min()) for _, g in report.iter_groups()]
	return float(np.median(mins))


def score_correlation(report: RankingReport) -> pd.Series:
	'''
	Per-group Spearman correlation between score and true RMSD (average
	ranks for ties). NaN for groups with constant scores or labels.
	'''
	_require_rmsd(report)
	out = {}
	for name, g in report.iter_groups():
		out[name] = g['score'].rank().corr(g['true_rmsd'].rank())
	return pd.Series(out, name='spearman', dtype=np.float64)
