from typing import Tuple, Union

import numpy as np

from .structure import Structure
from ..exceptions import CorrespondenceError


def _coords(x: Union[Structure, np.ndarray]) -> np.ndarray:
	if isinstance(x, Structure):
		return x.positions
	return np.asarray(x, dtype=np.float64).reshape(-1, 3)


def kabsch_rotation(mobile: np.ndarray, target: np.ndarray) -> np.ndarray:
	'''
	Proper rotation R (det +1) minimizing |mobile_c @ R - target_c| for
	centered (n, 3) coordinates.
	'''
	h = mobile.T @ target
	v, _, w = np.linalg.svd(h)

	# Reflection guard: flip the weakest axis so det(R) == +1.
	if np.linalg.det(v) * np.linalg.det(w) < 0.0:
		v[:, -1] = -v[:, -1]

	return v @ w


def superpose(
	a: Union[Structure, np.ndarray],
	b: Union[Structure, np.ndarray],
	) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
	'''
	Rigidly move b onto a.

	Returns:
		- moved (np.ndarray): b after rotation and translation.
		- rotation (np.ndarray): (3, 3), applied as b_c @ rotation.
		- translation (np.ndarray): (3,), added after rotation.
	'''
	pa = _coords(a)
	pb = _coords(b)

	if pa.shape != pb.shape:
		raise CorrespondenceError(
			f'Atom count mismatch: {pa.shape[0]} vs {pb.shape[0]}.'
		)

	ca = pa.mean(axis=0)
	cb = pb.mean(axis=0)

	rotation = kabsch_rotation(pb - cb, pa - ca)
	moved = (pb - cb) @ rotation + ca

	return moved, rotation, ca - cb @ rotation


def kabsch_rmsd(
	a: Union[Structure, np.ndarray],
	b: Union[Structure, np.ndarray],
	) -> float:
	'''
	Minimum RMSD (Angstrom) over proper rigid motions of b.

	Args:
		- a (Structure or (n, 3) array): reference.
		- b (Structure or (n, 3) array): positionally corresponding model.

	Returns:
		- rmsd (float)
	'''
	pa = _coords(a)
	moved, _, _ = superpose(a, b)

	msd = np.sum((pa - moved) ** 2) / pa.shape[0]

	return float(np.sqrt(max(msd, 0.0)))
