import os
import math
from dataclasses import dataclass, field
from typing import List

import pandas as pd

from ..exceptions import ManifestError


@dataclass(frozen=True)
class ManifestEntry:
	path: str
	label: float
	group: str

	@property
	def structure_id(self):
		return os.path.basename(self.path)


@dataclass
class DatasetManifest:
	'''
	(structure path, label RMSD, group id) supervision triples. One group
	per source RNA.
	'''
	entries: List[ManifestEntry] = field(default_factory=list)
	path: str = None

	def __len__(self):
		return len(self.entries)

	def __iter__(self):
		return iter(self.entries)

	def __getitem__(self, i):
		return self.entries[i]

	@property
	def labels(self):
		return [e.label for e in self.entries]

	@property
	def groups(self):
		return list(dict.fromkeys(e.group for e in self.entries))

	def to_frame(self) -> pd.DataFrame:
		return pd.DataFrame(
			[(e.path, e.structure_id, e.label, e.group) for e in self.entries],
			columns=['path', 'structure_id', 'label', 'group'],
		)

	def subset(self, groups) -> 'DatasetManifest':
		groups = set(groups)
		return DatasetManifest([e for e in self.entries if e.group in groups], path=self.path)


def load_manifest(path: str, check_files: bool=True) -> DatasetManifest:
	'''
	Read a UTF-8 TSV manifest of "path<TAB>rmsd<TAB>group" lines.

	Blank lines and lines starting with '#' are skipped. Relative structure
	paths resolve against the manifest's directory.

	Args:
		- path (str)
		- check_files (bool, default=True): every structure path must exist.

	Returns:
		- manifest (DatasetManifest)
	'''
	if not os.path.isfile(path):
		raise ManifestError('manifest file not found.', path=path)

	base = os.path.dirname(os.path.abspath(path))
	entries = []

	with open(path, 'r', encoding='utf-8') as f:
		for lineno, line in enumerate(f, start=1):
			line = line.rstrip('\r\n')

			if not line.strip() or line.lstrip().startswith('#'):
				continue

			fields = line.split('\t')
			if len(fields) != 3:
				raise ManifestError(
					f'expected 3 tab-separated fields, got {len(fields)}.', line=lineno, path=path
				)

			structure_path, label, group = (i.strip() for i in fields)

			try:
				label = float(label)
			except ValueError:
				raise ManifestError(f'unparseable RMSD label {label!r}.', line=lineno, path=path) from None

			if not math.isfinite(label) or label < 0:
				raise ManifestError(f'RMSD label must be a finite value >= 0, got {label}.', line=lineno, path=path)

			if not group:
				raise ManifestError('empty group id.', line=lineno, path=path)

			if not structure_path:
				raise ManifestError('empty structure path.', line=lineno, path=path)

			if not os.path.isabs(structure_path):
				structure_path = os.path.join(base, structure_path)

			if check_files and not os.path.isfile(structure_path):
				raise ManifestError(f'structure file not found: {structure_path}', line=lineno, path=path)

			entries.append(ManifestEntry(path=structure_path, label=label, group=group))

	return DatasetManifest(entries=entries, path=path)


def write_manifest(manifest: DatasetManifest, path: str, relative: bool=True):
	'''
	Write a manifest. Paths are stored relative to the manifest's directory
	when relative is True.
	'''
	base = os.path.dirname(os.path.abspath(path))

	with open(path, 'w', encoding='utf-8') as f:
		f.write('# path\trmsd\tgroup\n')
		for e in manifest.entries:
			p = os.path.relpath(os.path.abspath(e.path), base) if relative else e.path
			f.write(f'{p}\t{e.label!r}\t{e.group}\n')
