from .structure import (
	Atom,
	Structure,
	ELEMENTS,
	SYMBOLS,
	HEAVY_CNO,
	FORMATS,
	parse_structure,
	read_structure,
	write_structure,
	format_structure,
	filter_heavy_cno,
	guess_format,
)
from .kabsch import kabsch_rmsd, superpose
