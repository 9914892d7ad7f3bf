import os

import pytest
from click.testing import CliRunner

from paxscore import __version__
from paxscore.cli import cli
from paxscore.evaluation import read_report, parse_metrics
from paxscore.training import load_manifest, load_checkpoint


COMMANDS = ['build-graph', 'synth', 'train', 'score', 'rank', 'eval']


def invoke(*args):
	return CliRunner().invoke(cli, [str(i) for i in args])


@pytest.fixture
def workdir(tmp_path):
	'''
	synth -> train on a small random chain; returns the folder.
	'''
	data = tmp_path / 'decoys'
	manifest = tmp_path / 'train.tsv'
	ckpt = tmp_path / 'model.pxn'

	result = invoke(
		'synth', '--random-native', 12, '--sigmas', '0.5,3', '--count', 2,
		'--seed', 1, '--out-dir', data, '--manifest', manifest, '--include-native',
	)
	assert result.exit_code == 0, result.output

	result = invoke(
		'train', '--train-manifest', manifest, '--epochs', 2, '--hidden-dim', 2,
		'--lr', 1e-3, '--checkpoint', ckpt,
	)
	assert result.exit_code == 0, result.output

	return tmp_path


class TestSurface:
	def test_version(self):
		result = invoke('--version')
		assert result.exit_code == 0
		assert __version__ in result.output

	@pytest.mark.parametrize('command', COMMANDS)
	def test_help(self, command):
		result = invoke(command, '--help')
		assert result.exit_code == 0
		assert 'Usage' in result.output

	def test_train_options_are_described(self):
		help_text = invoke('train', '--help').output
		for text in ('Maximum number of epochs', 'Structures per Adam step', 'Adam learning rate',
			'Node embedding width', 'Message passing layers', 'Seed of initialization'):
			assert text in help_text

	def test_unknown_command(self):
		assert invoke('frobnicate').exit_code == 2

	def test_missing_required_option(self):
		assert invoke('score', '--input', 'a.xyz').exit_code == 2

	def test_bad_sigmas(self, tmp_path):
		result = invoke('synth', '--random-native', 10, '--sigmas', '1,x',
			'--out-dir', tmp_path, '--manifest', tmp_path / 'm.tsv')
		assert result.exit_code == 2

	def test_native_xor_random(self, tmp_path):
		result = invoke('synth', '--out-dir', tmp_path, '--manifest', tmp_path / 'm.tsv')
		assert result.exit_code == 2


class TestBuildGraph:
	def test_summary(self, tmp_path, chain):
		from paxscore.geom import write_structure

		path = str(tmp_path / 'c.xyz')
		out = str(tmp_path / 'c.pxg')
		write_structure(chain, path)

		result = invoke('build-graph', '--input', path, '--out', out)
		assert result.exit_code == 0, result.output
		lines = dict(i.split('\t') for i in result.stdout.splitlines())
		assert int(lines['nodes']) == len(chain)
		assert os.path.exists(out)

	def test_resolved_config_on_stderr(self, tmp_path, chain):
		from paxscore.geom import write_structure

		path = str(tmp_path / 'c.xyz')
		write_structure(chain, path)
		result = invoke('build-graph', '--input', path)
		assert '# build-graph {' in result.stderr
		assert '#' not in result.stdout

	def test_bad_cutoffs(self, tmp_path, chain):
		from paxscore.geom import write_structure

		path = str(tmp_path / 'c.xyz')
		write_structure(chain, path)
		result = invoke('build-graph', '--input', path, '--local-cutoff', 30)
		assert result.exit_code == 2

	def test_unparsable_input(self, tmp_path):
		path = tmp_path / 'bad.xyz'
		path.write_text('2\nC 0 0 0\nO 1.5 x 0\n')
		result = invoke('build-graph', '--input', path)
		assert result.exit_code == 1
		assert 'ParseError' in result.stderr


class TestPipeline:
	def test_synth_manifest(self, workdir):
		manifest = load_manifest(str(workdir / 'train.tsv'))
		assert len(manifest) == 1 + 2 * 2
		assert manifest.labels[0] == 0.0
		assert len(manifest.groups) == 1

	def test_train_log_and_checkpoint(self, tmp_path):
		manifest = tmp_path / 'm.tsv'
		invoke('synth', '--random-native', 10, '--sigmas', '1', '--count', 3,
			'--out-dir', tmp_path / 'd', '--manifest', manifest)

		ckpt = tmp_path / 'c.pxn'
		result = invoke('train', '--train-manifest', manifest, '--epochs', 3,
			'--hidden-dim', 2, '--patience', 0, '--checkpoint', ckpt)
		assert result.exit_code == 0, result.output

		lines = [i.split('\t') for i in result.stdout.splitlines()]
		assert [int(i[0]) for i in lines] == [1, 2, 3]
		assert all(len(i) == 3 for i in lines)

		loaded = load_checkpoint(str(ckpt))
		assert loaded.config.hidden_dim == 2
		assert loaded.metadata['epochs_run'] == 3

	def test_score_single_input(self, workdir):
		path = load_manifest(str(workdir / 'train.tsv'))[1].path
		result = invoke('score', '--checkpoint', workdir / 'model.pxn', '--input', path)
		assert result.exit_code == 0, result.output

		lines = result.stdout.splitlines()
		assert len(lines) == 1
		name, value = lines[0].split('\t')
		assert name == path
		float(value)

	def test_score_is_reproducible(self, workdir):
		paths = [e.path for e in load_manifest(str(workdir / 'train.tsv'))]
		args = ['score', '--checkpoint', workdir / 'model.pxn']
		for p in paths:
			args += ['--input', p]

		a = invoke(*args).stdout
		b = invoke(*args, '--threads', 3).stdout
		assert a == b
		assert len(a.splitlines()) == len(paths)

	def test_rank_then_eval(self, workdir):
		out = workdir / 'report.tsv'
		result = invoke('rank', '--checkpoint', workdir / 'model.pxn',
			'--manifest', workdir / 'train.tsv', '--out', out)
		assert result.exit_code == 0, result.output

		ranked = parse_metrics(result.stdout)
		assert ranked['n_groups'] == 1
		assert 'geometric_mean_rank' in ranked

		report, stored = read_report(str(out))
		assert len(report) == 5
		assert sorted(report.frame['rank']) == [1, 2, 3, 4, 5]

		result = invoke('eval', '--report', out)
		assert result.exit_code == 0, result.output
		assert any(i.startswith('geometric_mean_rank=') for i in result.stdout.splitlines())
		assert result.stdout == invoke('rank', '--checkpoint', workdir / 'model.pxn',
			'--manifest', workdir / 'train.tsv', '--out', out).stdout

	def test_corrupt_checkpoint(self, workdir):
		bad = workdir / 'bad.pxn'
		bad.write_bytes(b'NOPE' + bytes(16))
		path = load_manifest(str(workdir / 'train.tsv'))[0].path
		result = invoke('score', '--checkpoint', bad, '--input', path)
		assert result.exit_code == 1
		assert 'CorruptCheckpointError' in result.stderr

	def test_missing_checkpoint(self, workdir):
		path = load_manifest(str(workdir / 'train.tsv'))[0].path
		result = invoke('score', '--checkpoint', workdir / 'nope.pxn', '--input', path)
		assert result.exit_code == 1


class TestDiagnostics:
	@pytest.mark.parametrize('content', [b'2\nC 0 0 0\n0 1.5 0 0\n', b'2\n\xff\n\xfe 0 0 0\nO 1 0 0\n'])
	def test_malformed_structure(self, tmp_path, content):
		path = tmp_path / 'bad.xyz'
		path.write_bytes(content)
		result = invoke('build-graph', '--input', path)
		assert result.exit_code == 1
		assert 'ParseError' in result.stderr
		assert 'Traceback' not in result.output

	def test_malformed_report(self, tmp_path):
		path = tmp_path / 'report.tsv'
		path.write_text('a\tb\n1\t2\n')
		result = invoke('eval', '--report', path)
		assert result.exit_code == 1
		assert 'ReportError' in result.stderr
