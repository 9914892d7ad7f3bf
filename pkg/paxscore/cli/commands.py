import os
import json
from functools import wraps

import click

from ..geom import read_structure, write_structure, filter_heavy_cno, FORMATS
from ..graph import build_multiplex, save_graph, LOCAL_CUTOFF, GLOBAL_CUTOFF
from ..graph.multiplex import SEARCHES
from ..model import ModelConfig, ABLATIONS
from ..training import (
	TrainConfig,
	DatasetManifest,
	ManifestEntry,
	load_manifest,
	write_manifest,
	synth_decoys,
	random_folded_chain,
	train as train_model,
	save_checkpoint,
	load_checkpoint,
)
from ..evaluation import (
	Scorer,
	rank_predictions,
	near_native_metrics,
	rmsd_band_table,
	band_summary,
	median_min_rmsd,
	score_correlation,
	write_report,
	read_report,
	format_metrics,
)
from .. import __version__
from ..utils import DEBUG_LEVELS
from ..exceptions import PaxscoreError


def _resolved(name, **values):
	'''
	Every run reports its resolved configuration on stderr.
	'''
	click.echo(f'# {name} ' + json.dumps(values, sort_keys=True, default=str), err=True)


def domain_errors(f):
	'''
	PaxscoreError and I/O failures exit 1 with a one-line diagnostic.
	'''
	@wraps(f)
	def wrapper(*args, **kwargs):
		try:
			return f(*args, **kwargs)
		except (PaxscoreError, OSError) as e:
			raise click.ClickException(f'{type(e).__name__}: {e}') from e
	return wrapper


def _floats(ctx, param, value):
	try:
		return [float(i) for i in value.split(',') if i.strip()]
	except ValueError:
		raise click.BadParameter(f'expected comma-separated numbers, got {value!r}') from None


def evaluation_metrics(report, threshold: float) -> dict:
	'''
	Flat metrics block of a ranking report.
	'''
	metrics = dict(near_native_metrics(report, threshold=threshold).summary)
	metrics['median_min_rmsd_top10'] = median_min_rmsd(report, top_n=10)

	summary = band_summary(rmsd_band_table(report))
	for n, row in summary.iterrows():
		for band, count in row.items():
			metrics[f'top{n}_groups{band}'] = int(count)

	metrics['mean_spearman'] = float(score_correlation(report).mean())

	return metrics


@click.group()
@click.option('--log-level', type=click.Choice(DEBUG_LEVELS), default='WARNING', show_default=True, help='Logging level on stderr.')
@click.version_option(__version__, prog_name='paxscore')
@click.pass_context
def cli(ctx, log_level):
	'''
	Score RNA structural models by predicted RMSD with PaxNet.
	'''
	ctx.obj = {'log_level': log_level}


@cli.command('build-graph')
@click.option('--input', 'input_path', required=True, type=click.Path(dir_okay=False), help='PDB or xyz structure.')
@click.option('--local-cutoff', type=float, default=LOCAL_CUTOFF, show_default=True, help='Local plex cutoff, Angstrom.')
@click.option('--global-cutoff', type=float, default=GLOBAL_CUTOFF, show_default=True, help='Global plex cutoff, Angstrom.')
@click.option('--search', type=click.Choice(list(SEARCHES)), default='grid', show_default=True, help='Neighbor search.')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Graph cache file to write.')
@domain_errors
def build_graph(input_path, local_cutoff, global_cutoff, search, out):
	'''
	Build the two-plex graph of a structure and print its sizes.
	'''
	_resolved('build-graph', input=input_path, local_cutoff=local_cutoff,
		global_cutoff=global_cutoff, search=search, out=out)

	if not 0 < local_cutoff < global_cutoff:
		raise click.BadParameter('need 0 < --local-cutoff < --global-cutoff')

	s = filter_heavy_cno(read_structure(input_path))
	graph = build_multiplex(s, d_l=local_cutoff, d_g=global_cutoff, search=search)

	if out:
		save_graph(graph, out)

	for k, v in graph.summary().items():
		click.echo(f'{k}\t{v}')


@cli.command()
@click.option('--native', type=click.Path(dir_okay=False), default=None, help='Native structure file.')
@click.option('--random-native', type=int, default=None, help='Use a random folded chain of this many atoms.')
@click.option('--sigmas', default='0.5,1,2,4,8', show_default=True, callback=_floats, help='Comma-separated noise levels, Angstrom.')
@click.option('--count', type=int, default=10, show_default=True, help='Decoys per sigma.')
@click.option('--seed', type=int, default=0, show_default=True, help='Seed of the noise and of --random-native.')
@click.option('--out-dir', required=True, type=click.Path(file_okay=False), help='Folder for the decoy files.')
@click.option('--manifest', required=True, type=click.Path(dir_okay=False), help='Manifest to write.')
@click.option('--group', default=None, help='Group id; the native id by default.')
@click.option('--format', 'fmt', type=click.Choice(FORMATS), default='xyz', show_default=True, help='Decoy file format.')
@click.option('--include-native/--no-include-native', default=False, show_default=True, help='Also list the native with label 0.')
@domain_errors
def synth(native, random_native, sigmas, count, seed, out_dir, manifest, group, fmt, include_native):
	'''
	Write Gaussian-perturbed decoys of a native and their manifest.
	'''
	if (native is None) == (random_native is None):
		raise click.UsageError('give exactly one of --native or --random-native')

	_resolved('synth', native=native, random_native=random_native, sigmas=sigmas,
		count=count, seed=seed, out_dir=out_dir, manifest=manifest, group=group,
		format=fmt, include_native=include_native)

	if native is not None:
		s = filter_heavy_cno(read_structure(native))
	else:
		s = random_folded_chain(random_native, seed=seed)

	group = group or s.id
	os.makedirs(out_dir, exist_ok=True)

	entries = []
	if include_native:
		path = os.path.join(out_dir, f'{s.id}.{fmt}')
		write_structure(s, path, format=fmt)
		entries.append(ManifestEntry(path=path, label=0.0, group=group))

	for decoy, label in synth_decoys(s, sigmas, count, seed=seed):
		path = os.path.join(out_dir, f'{decoy.id}.{fmt}')
		write_structure(decoy, path, format=fmt)
		entries.append(ManifestEntry(path=path, label=label, group=group))

	write_manifest(DatasetManifest(entries), manifest)
	click.echo(f'{len(entries)}\t{manifest}')


@cli.command('train')
@click.option('--train-manifest', required=True, type=click.Path(dir_okay=False), help='Training manifest.')
@click.option('--val-manifest', type=click.Path(dir_okay=False), default=None, help='Validation manifest; the training loss is used without one.')
@click.option('--epochs', type=int, default=500, show_default=True, help='Maximum number of epochs.')
@click.option('--patience', type=int, default=25, show_default=True, help='0 disables early stopping.')
@click.option('--batch-size', type=int, default=8, show_default=True, help='Structures per Adam step.')
@click.option('--lr', type=float, default=1e-4, show_default=True, help='Adam learning rate.')
@click.option('--hidden-dim', type=int, default=16, show_default=True, help='Node embedding width.')
@click.option('--layers', type=int, default=1, show_default=True, help='Message passing layers.')
@click.option('--local-cutoff', type=float, default=LOCAL_CUTOFF, show_default=True, help='Local plex cutoff, Angstrom.')
@click.option('--global-cutoff', type=float, default=GLOBAL_CUTOFF, show_default=True, help='Global plex cutoff, Angstrom.')
@click.option('--seed', type=int, default=0, show_default=True, help='Seed of initialization and shuffling.')
@click.option('--ablation', type=click.Choice(ABLATIONS), default='full', show_default=True, help='Model variant.')
@click.option('--threads', type=int, default=1, show_default=True, help='Graph-building threads.')
@click.option('--checkpoint', required=True, type=click.Path(dir_okay=False), help='Checkpoint to write.')
@click.pass_context
@domain_errors
def train_cmd(
	ctx, train_manifest, val_manifest, epochs, patience, batch_size, lr, hidden_dim,
	layers, local_cutoff, global_cutoff, seed, ablation, threads, checkpoint,
	):
	'''
	Train PaxNet; prints "epoch<TAB>train_loss<TAB>val_loss" per epoch.
	'''
	config = TrainConfig(
		batch_size=batch_size,
		learning_rate=lr,
		max_epochs=epochs,
		patience=patience or None,
		seed=seed,
		threads=threads,
		val_manifest=val_manifest,
		model=ModelConfig(
			hidden_dim=hidden_dim,
			num_layers=layers,
			d_l=local_cutoff,
			d_g=global_cutoff,
			ablation=ablation,
			seed=seed,
		),
	)
	_resolved('train', train_manifest=train_manifest, checkpoint=checkpoint, **config.to_dict())

	ckpt = train_model(load_manifest(train_manifest), config, debug_level=ctx.obj['log_level'])
	save_checkpoint(ckpt, checkpoint)


@cli.command()
@click.option('--checkpoint', required=True, type=click.Path(dir_okay=False), help='Trained checkpoint.')
@click.option('--input', 'inputs', required=True, multiple=True, type=click.Path(dir_okay=False), help='Structure file; repeatable.')
@click.option('--threads', type=int, default=1, show_default=True, help='Graph-building threads.')
@click.pass_context
@domain_errors
def score(ctx, checkpoint, inputs, threads):
	'''
	Print "path<TAB>predicted RMSD" per input.
	'''
	_resolved('score', checkpoint=checkpoint, inputs=list(inputs), threads=threads)

	ckpt = load_checkpoint(checkpoint)
	scores = Scorer(ckpt, threads=threads, debug_level=ctx.obj['log_level']).score_paths(inputs)

	for path, value in zip(inputs, scores):
		click.echo(f'{path}\t{float(value)!r}')


@cli.command()
@click.option('--checkpoint', required=True, type=click.Path(dir_okay=False), help='Trained checkpoint.')
@click.option('--manifest', required=True, type=click.Path(dir_okay=False), help='Manifest of models to rank.')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Report TSV to write.')
@click.option('--threshold', type=float, default=2.0, show_default=True, help='Near-native RMSD, Angstrom.')
@click.option('--threads', type=int, default=1, show_default=True, help='Graph-building threads.')
@click.pass_context
@domain_errors
def rank(ctx, checkpoint, manifest, out, threshold, threads):
	'''
	Score and rank a manifest per group, write the report and print its
	metrics.
	'''
	_resolved('rank', checkpoint=checkpoint, manifest=manifest, out=out,
		threshold=threshold, threads=threads)

	ckpt = load_checkpoint(checkpoint)
	entries = load_manifest(manifest)
	scores = Scorer(ckpt, threads=threads, debug_level=ctx.obj['log_level']).score_manifest(entries)

	report = rank_predictions(entries, scores)
	metrics = evaluation_metrics(report, threshold)

	write_report(report, out, metrics=metrics)
	click.echo(format_metrics(metrics), nl=False)


@cli.command('eval')
@click.option('--report', 'report_path', required=True, type=click.Path(dir_okay=False), help='Report written by rank.')
@click.option('--threshold', type=float, default=2.0, show_default=True, help='Near-native RMSD, Angstrom.')
@domain_errors
def eval_cmd(report_path, threshold):
	'''
	Recompute the metrics block of a ranking report.
	'''
	_resolved('eval', report=report_path, threshold=threshold)

	report, _ = read_report(report_path)
	click.echo(format_metrics(evaluation_metrics(report, threshold)), nl=False)


def main():
	cli(prog_name='paxscore')
