import io
import math
from typing import Dict, Tuple

import pandas as pd

from .ranking import RankingReport, COLUMNS
from ..exceptions import ReportError


def format_metrics(metrics: Dict[str, float]) -> str:
	'''
	"key=value" lines in insertion order. Floats use repr so output is
	byte-stable across runs.
	'''
	lines = []
	for k, v in metrics.items():
		if isinstance(v, float) and math.isnan(v):
			v = 'nan'
		lines.append(f'{k}={v!r}' if isinstance(v, float) else f'{k}={v}')
	return '\n'.join(lines) + ('\n' if lines else '')


def parse_metrics(text: str) -> Dict[str, float]:
	out = {}
	for line in text.splitlines():
		line = line.strip().lstrip('#').strip()
		if '=' not in line:
			continue
		k, v = line.split('=', 1)
		try:
			out[k] = int(v)
		except ValueError:
			try:
				out[k] = float(v)
			except ValueError:
				out[k] = v
	return out


def write_report(report: RankingReport, path: str, metrics: Dict[str, float]=None):
	'''
	TSV of group, structure_id, score, true_rmsd, rank followed by the
	metrics block as "# key=value" lines.
	'''
	with open(path, 'w', encoding='utf-8', newline='') as f:
		report.frame[COLUMNS].to_csv(f, sep='\t', index=False, lineterminator='\n')
		if metrics:
			for line in format_metrics(metrics).splitlines():
				f.write(f'# {line}\n')


def read_report(path: str) -> Tuple[RankingReport, Dict[str, float]]:
	'''
	Inverse of write_report. Only lines starting with '#' belong to the
	metrics block; '#' inside ids is data.
	'''
	with open(path, 'r', encoding='utf-8') as f:
		lines = f.readlines()

	table = ''.join(i for i in lines if not i.startswith('#'))
	metrics = parse_metrics(''.join(i for i in lines if i.startswith('#')))

	try:
		frame = pd.read_csv(
			io.StringIO(table),
			sep='\t',
			dtype={'group': str, 'structure_id': str},
			keep_default_na=False,
			na_values={'score': [''], 'true_rmsd': ['', 'nan', 'NaN']},
		)
		report = RankingReport(frame)
	except (ValueError, pd.errors.EmptyDataError) as e:
		raise ReportError(f'{path}: {e}') from None

	return report, metrics
