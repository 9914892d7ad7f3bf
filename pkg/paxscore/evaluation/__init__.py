from .scoring import Scorer, score_manifest
from .ranking import (
	RankingReport,
	NearNativeMetrics,
	rank_predictions,
	rank_frame,
	near_native_metrics,
	rmsd_band,
	rmsd_band_table,
	band_labels,
	band_summary,
	median_min_rmsd,
	score_correlation,
)
from .report import write_report, read_report, format_metrics, parse_metrics
