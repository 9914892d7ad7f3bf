from .commands import cli, main, evaluation_metrics
