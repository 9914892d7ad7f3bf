import os
import logging
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from ..exceptions import (
	ParseError,
	EmptyStructureError,
	DegenerateStructureError,
	InvalidStructureError,
)


logger = logging.getLogger(__name__)


ELEMENTS = {
	'H': 1, 'HE': 2, 'LI': 3, 'BE': 4, 'B': 5, 'C': 6, 'N': 7, 'O': 8,
	'F': 9, 'NE': 10, 'NA': 11, 'MG': 12, 'AL': 13, 'SI': 14, 'P': 15,
	'S': 16, 'CL': 17, 'AR': 18, 'K': 19, 'CA': 20, 'MN': 25, 'FE': 26,
	'CO': 27, 'NI': 28, 'CU': 29, 'ZN': 30, 'SE': 34, 'BR': 35, 'SR': 38,
	'CD': 48, 'I': 53, 'BA': 56, 'PT': 78, 'HG': 80, 'PB': 82,
}
SYMBOLS = {z: s.capitalize() for s, z in ELEMENTS.items()}

HEAVY_CNO = (6, 7, 8)

FORMATS = ('pdb', 'xyz')


@dataclass(frozen=True)
class Atom:
	element: int
	position: tuple

	@property
	def symbol(self):
		return SYMBOLS.get(self.element, str(self.element))


@dataclass(frozen=True, eq=False)
class Structure:
	'''
	Ordered heavy-atom model of one RNA.

	Args:
		- id (str)
		- elements (np.ndarray): (n,) atomic numbers.
		- positions (np.ndarray): (n, 3) coordinates in Angstrom.
	'''
	id: str
	elements: np.ndarray
	positions: np.ndarray

	def __post_init__(self):
		elements = np.ascontiguousarray(self.elements, dtype=np.int64).reshape(-1)
		positions = np.ascontiguousarray(self.positions, dtype=np.float64).reshape(-1, 3)

		if elements.shape[0] != positions.shape[0]:
			raise InvalidStructureError(
				f'{self.id}: {elements.shape[0]} elements for {positions.shape[0]} positions.'
			)
		if elements.shape[0] == 0:
			raise EmptyStructureError(f'{self.id}: structure has no atoms.')
		if elements.shape[0] < 2:
			raise DegenerateStructureError(f'{self.id}: structure needs at least 2 atoms.')
		if not np.all(np.isfinite(positions)):
			raise InvalidStructureError(f'{self.id}: non-finite coordinate.')
		if np.any(elements < 1):
			raise InvalidStructureError(f'{self.id}: atomic numbers must be positive.')

		elements.setflags(write=False)
		positions.setflags(write=False)
		object.__setattr__(self, 'elements', elements)
		object.__setattr__(self, 'positions', positions)

	def __len__(self):
		return self.elements.shape[0]

	@property
	def atoms(self) -> Iterator[Atom]:
		for z, p in zip(self.elements, self.positions):
			yield Atom(element=int(z), position=tuple(float(i) for i in p))

	def with_positions(self, positions, id=None):
		return Structure(id=id or self.id, elements=self.elements, positions=positions)

	def __repr__(self):
		return f"Structure(id={self.id!r}, atoms={len(self)})"


def element_number(symbol: str) -> int:
	'''
	Atomic number for an element symbol or a bare atomic number.
	'''
	symbol = symbol.strip()
	if symbol.isdigit():
		if int(symbol) < 1:
			raise KeyError(symbol)
		return int(symbol)
	z = ELEMENTS.get(symbol.upper())
	if z is None:
		raise KeyError(symbol)
	return z


def _element_from_atom_name(name: str) -> str:
	'''
	Fallback when PDB columns 77-78 are blank.

	Columns 13-16 hold the atom name. A blank column 13 means a one-letter
	element in column 14. A leading digit (1H5') or a leading H (HO2') is
	hydrogen-style naming, so the letter after the digit, or H, is used.
	Otherwise the first two letters are tried as a two-letter element and
	the first letter is the last resort.
	'''
	if not name.strip():
		return ''
	if name[0] == ' ':
		return name[1]
	if name[0].isdigit():
		return name[1]
	if name[0] == 'H':
		return 'H'
	two = name[:2].strip().upper()
	if len(two) == 2 and two.isalpha() and two in ELEMENTS and name[2:].strip() == '':
		return two
	return name[0]


def _parse_pdb(text: str, structure_id: str) -> Structure:
	elements = []
	positions = []
	models_seen = 0

	for lineno, line in enumerate(text.splitlines(), start=1):
		record = line[:6]

		if record.startswith('MODEL'):
			models_seen += 1
			if models_seen > 1:
				logger.warning(
					f'{structure_id}: multiple MODEL records, keeping the first model only.'
				)
				break
			continue

		if record.startswith('ENDMDL') and models_seen >= 1:
			continue

		if record not in ('ATOM  ', 'HETATM'):
			continue

		if len(line) < 54:
			raise ParseError('ATOM/HETATM record shorter than the coordinate columns.', line=lineno)

		alt_loc = line[16]
		if alt_loc not in (' ', 'A'):
			continue

		try:
			xyz = [float(line[30:38]), float(line[38:46]), float(line[46:54])]
		except ValueError:
			raise ParseError(f'bad coordinate field {line[30:54]!r}.', line=lineno) from None

		if not all(np.isfinite(xyz)):
			raise ParseError('non-finite coordinate.', line=lineno)

		symbol = line[76:78].strip() if len(line) >= 77 else ''
		if not symbol or not symbol.isalpha():
			symbol = _element_from_atom_name(line[12:16].ljust(4))

		try:
			z = element_number(symbol)
		except KeyError:
			raise ParseError(f'unknown element {symbol!r}.', line=lineno) from None

		elements.append(z)
		positions.append(xyz)

	if not elements:
		raise EmptyStructureError(f'{structure_id}: no ATOM/HETATM records.')

	return Structure(id=structure_id, elements=elements, positions=positions)


def _is_atom_record(line: str) -> bool:
	fields = line.split()
	if len(fields) < 4:
		return False
	try:
		element_number(fields[0])
		[float(i) for i in fields[1:4]]
	except (KeyError, ValueError):
		return False
	return True


def _parse_xyz(text: str, structure_id: str) -> Structure:
	raw_lines = list(enumerate(text.splitlines(), start=1))
	lines = [(n, l) for n, l in raw_lines if l.strip()]

	if not lines:
		raise EmptyStructureError(f'{structure_id}: empty xyz file.')

	header_line, header = lines[0]
	try:
		count = int(header.split()[0])
	except (ValueError, IndexError):
		raise ParseError(f'bad atom count {header.strip()!r}.', line=header_line) from None

	if count == 0:
		raise EmptyStructureError(f'{structure_id}: xyz atom count is 0.')

	# The line right after the count is a comment, possibly blank, unless it
	# already is an atom record.
	after = header_line + 1
	has_comment = after <= len(raw_lines) and not _is_atom_record(raw_lines[after - 1][1])
	body = [(n, l) for n, l in lines[1:] if not (has_comment and n == after)]

	if len(body) != count:
		raise ParseError(
			f'header announces {count} atoms, found {len(body)} atom lines.',
			line=header_line
		)

	elements = []
	positions = []

	for lineno, line in body:
		fields = line.split()
		if len(fields) < 4:
			raise ParseError('expected "SYMBOL x y z".', line=lineno)
		try:
			z = element_number(fields[0])
		except KeyError:
			raise ParseError(f'unknown element {fields[0]!r}.', line=lineno) from None
		try:
			xyz = [float(i) for i in fields[1:4]]
		except ValueError:
			raise ParseError(f'bad coordinate field in {line.strip()!r}.', line=lineno) from None
		if not all(np.isfinite(xyz)):
			raise ParseError('non-finite coordinate.', line=lineno)

		elements.append(z)
		positions.append(xyz)

	return Structure(id=structure_id, elements=elements, positions=positions)


def parse_structure(
	raw: Union[bytes, str],
	format: str='xyz',
	structure_id: str='structure',
	) -> Structure:
	'''
	Parse raw text into a Structure.

	Every atom is kept in file order; element filtering is a separate step
	(filter_heavy_cno).

	Args:
		- raw (bytes or str)
		- format (str, default='xyz'): One of FORMATS.
		- structure_id (str, default='structure')

	Returns:
		- structure (Structure)
	'''
	if format not in FORMATS:
		raise ValueError(f'Unknown structure format {format!r}. Choose one of {FORMATS}')

	if isinstance(raw, (bytes, bytearray)):
		try:
			text = raw.decode('utf-8')
		except UnicodeDecodeError as e:
			raise ParseError(f'{structure_id}: not UTF-8 text ({e.reason} at byte {e.start}).') from None
	else:
		text = raw

	if format == 'pdb':
		return _parse_pdb(text, structure_id)

	return _parse_xyz(text, structure_id)


def guess_format(path: str) -> str:
	ext = os.path.splitext(path)[1].lower()
	return 'pdb' if ext in ('.pdb', '.ent') else 'xyz'


def read_structure(path: str, format: str=None, structure_id: str=None) -> Structure:
	with open(path, 'rb') as f:
		raw = f.read()

	return parse_structure(
		raw,
		format=format or guess_format(path),
		structure_id=structure_id or os.path.basename(path),
	)


def filter_heavy_cno(s: Structure) -> Structure:
	'''
	Keep carbon, nitrogen and oxygen atoms, in order.
	'''
	mask = np.isin(s.elements, HEAVY_CNO)

	if mask.sum() < 2:
		raise DegenerateStructureError(
			f'{s.id}: {int(mask.sum())} C/N/O atoms left after filtering, need at least 2.'
		)

	if mask.all():
		return s

	return Structure(id=s.id, elements=s.elements[mask], positions=s.positions[mask])


def format_structure(s: Structure, format: str='xyz') -> str:
	'''
	Serialize a Structure.

	xyz uses the shortest round-trip float repr so parse(format(s)) is
	lossless; pdb is limited to the fixed 8.3f coordinate columns.
	'''
	if format not in FORMATS:
		raise ValueError(f'Unknown structure format {format!r}. Choose one of {FORMATS}')

	if format == 'xyz':
		lines = [str(len(s)), s.id]
		for z, (x, y, w) in zip(s.elements, s.positions):
			lines.append(f"{SYMBOLS.get(int(z), str(int(z)))} {float(x)!r} {float(y)!r} {float(w)!r}")
		return '\n'.join(lines) + '\n'

	lines = []
	for serial, (z, (x, y, w)) in enumerate(zip(s.elements, s.positions), start=1):
		symbol = SYMBOLS.get(int(z), 'X').upper()
		name = f' {symbol:<3s}' if len(symbol) == 1 else f'{symbol:<4s}'
		lines.append(
			f"{'HETATM':<6s}{serial % 100000:5d} {name} {'UNK':>3s} A{1:4d}    "
			f"{x:8.3f}{y:8.3f}{w:8.3f}{1.0:6.2f}{0.0:6.2f}          {symbol:>2s}"
		)
	lines.append('END')
	return '\n'.join(lines) + '\n'


def write_structure(s: Structure, path: str, format: str=None):
	with open(path, 'w') as f:
		f.write(format_structure(s, format=format or guess_format(path)))
