import logging
from typing import List, Sequence, Tuple

import numpy as np

from ..geom import Structure, kabsch_rmsd
from ..exceptions import DegenerateStructureError


logger = logging.getLogger(__name__)

BOND_LENGTH = 1.5
BOND_ANGLE = np.deg2rad(110.0)
MIN_SEPARATION = 3.0
MIN_ONE_FOUR = 2.7

# Rough C/N/O mix of an RNA heavy-atom backbone.
CHAIN_ELEMENTS = (6, 7, 8)
CHAIN_WEIGHTS = (0.55, 0.2, 0.25)


def synth_decoys(
	native: Structure,
	sigmas: Sequence[float],
	count_per_sigma: int,
	seed: int=0,
	) -> List[Tuple[Structure, float]]:
	'''
	Perturbed copies of a native structure labelled with their RMSD to it.

	Every atom gets i.i.d. Gaussian noise of standard deviation sigma per
	axis; labels are the optimal-superposition RMSD to the native.

	Args:
		- native (Structure)
		- sigmas (list of float): noise levels, Angstrom, each > 0.
		- count_per_sigma (int)
		- seed (int, default=0)

	Returns:
		- decoys (list): (Structure, rmsd) pairs, sigma-major order.
	'''
	spread = native.positions - native.positions.mean(axis=0)
	if not np.any(np.abs(spread) > 0):
		raise DegenerateStructureError(f'{native.id}: all atoms coincide, cannot superpose decoys.')

	if count_per_sigma < 0:
		raise ValueError('count_per_sigma must be >= 0.')

	for sigma in sigmas:
		if not sigma > 0:
			raise ValueError(f'Noise levels must be positive, got {sigma}.')

	rng = np.random.default_rng(seed)
	decoys = []

	for sigma in sigmas:
		for c in range(count_per_sigma):
			noise = rng.normal(0.0, sigma, size=native.positions.shape)
			decoy = native.with_positions(native.positions + noise, id=f'{native.id}_s{sigma:g}_{c}')
			decoys.append((decoy, kabsch_rmsd(native, decoy)))

	logger.debug(f'{native.id}: {len(decoys)} decoys over sigmas {list(sigmas)}.')

	return decoys


def _place(a, b, c, bond, angle, torsion):
	'''
	Next chain atom from the three previous ones and internal coordinates.
	'''
	bc = c - b
	bc /= np.linalg.norm(bc)
	n = np.cross(b - a, bc)
	n /= np.linalg.norm(n)
	m = np.cross(n, bc)

	d = np.array([
		-bond * np.cos(angle),
		bond * np.sin(angle) * np.cos(torsion),
		bond * np.sin(angle) * np.sin(torsion),
	])
	return c + d[0] * bc + d[1] * m + d[2] * n


def random_folded_chain(
	n_atoms: int,
	seed: int=0,
	bond: float=BOND_LENGTH,
	angle: float=BOND_ANGLE,
	min_separation: float=MIN_SEPARATION,
	max_tries: int=200,
	structure_id: str=None,
	) -> Structure:
	'''
	Self-avoiding C/N/O chain standing in for a native RNA.

	Bonded neighbours sit bond apart at the given bond angle. Torsions are
	drawn around the gauche and trans minima so the chain folds back on
	itself. Atoms four or more positions apart stay at least
	min_separation apart and 1-4 pairs at least MIN_ONE_FOUR, so only
	bonded and 1-3 pairs fall inside the 2.6 Angstrom local cutoff.

	Args:
		- n_atoms (int): >= 3.
		- seed (int, default=0)
		- bond (float, default=1.5)
		- angle (float, default=110 degrees, radians)
		- min_separation (float, default=3.0)
		- max_tries (int, default=200): torsion draws per atom. The draw
			with the largest clearance wins when none clears min_separation.
		- structure_id (str, default=None)

	Returns:
		- native (Structure)
	'''
	if n_atoms < 3:
		raise DegenerateStructureError(f'A folded chain needs at least 3 atoms, got {n_atoms}.')

	rng = np.random.default_rng(seed)

	positions = np.zeros((n_atoms, 3))
	positions[1] = [bond, 0.0, 0.0]
	positions[2] = positions[1] + bond * np.array([-np.cos(angle), np.sin(angle), 0.0])

	minima = np.deg2rad([60.0, -60.0, 180.0])

	for i in range(3, n_atoms):
		a, b, c = positions[i - 3], positions[i - 2], positions[i - 1]
		best, clearance = None, -np.inf

		for _ in range(max_tries):
			torsion = rng.choice(minima) + rng.normal(0.0, np.deg2rad(15.0))
			p = _place(a, b, c, bond, angle, torsion)

			# 1-4 pairs only need to clear the local cutoff.
			gap = np.linalg.norm(a - p) - MIN_ONE_FOUR + min_separation
			if i > 3:
				gap = min(gap, np.min(np.linalg.norm(positions[: i - 3] - p, axis=1)))

			if gap > clearance:
				best, clearance = p, gap
			if gap >= min_separation:
				break

		if clearance < min_separation:
			logger.debug(f'Atom {i}: best clearance {clearance:.3f} below {min_separation}.')

		positions[i] = best

	elements = rng.choice(CHAIN_ELEMENTS, size=n_atoms, p=CHAIN_WEIGHTS)

	return Structure(
		id=structure_id or f'chain{n_atoms}_seed{seed}',
		elements=elements,
		positions=positions,
	)
