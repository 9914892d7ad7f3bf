from dataclasses import dataclass
from typing import Iterator, NamedTuple, Set, Tuple

import numpy as np

from ..exceptions import CoincidentAtomError


class Edge(NamedTuple):
	src: int
	dst: int
	distance: float


@dataclass(frozen=True, eq=False)
class EdgeList:
	'''
	Directed edges (src -> dst) stored as parallel arrays.

	Canonical order is (dst, src) ascending.
	'''
	src: np.ndarray
	dst: np.ndarray
	distance: np.ndarray

	@classmethod
	def empty(cls):
		return cls(
			src=np.zeros(0, dtype=np.int64),
			dst=np.zeros(0, dtype=np.int64),
			distance=np.zeros(0, dtype=np.float64),
		)

	def __len__(self):
		return self.src.shape[0]

	def __getitem__(self, i) -> Edge:
		return Edge(int(self.src[i]), int(self.dst[i]), float(self.distance[i]))

	def __iter__(self) -> Iterator[Edge]:
		for i in range(len(self)):
			yield self[i]

	def pairs(self) -> Set[Tuple[int, int]]:
		return set(zip(self.src.tolist(), self.dst.tolist()))


def pair_distances(positions: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
	'''
	Euclidean distances for index pairs. Both neighbor searches go through
	this one expression so their distances agree bit for bit.
	'''
	diff = positions[src] - positions[dst]
	return np.sqrt(np.einsum('ij,ij->i', diff, diff))


def canonical_edges(src, dst, distance) -> EdgeList:
	src = np.asarray(src, dtype=np.int64)
	dst = np.asarray(dst, dtype=np.int64)
	distance = np.asarray(distance, dtype=np.float64)

	order = np.lexsort((src, dst))

	return EdgeList(src=src[order], dst=dst[order], distance=distance[order])


def _select(positions, src, dst, cutoff) -> EdgeList:
	d = pair_distances(positions, src, dst)

	coincident = d == 0.0
	if coincident.any():
		k = int(np.argmax(coincident))
		raise CoincidentAtomError(
			f'Atoms {int(src[k])} and {int(dst[k])} share the same position.'
		)

	keep = d <= cutoff

	return canonical_edges(src[keep], dst[keep], d[keep])


def _check(positions, cutoff):
	positions = np.asarray(positions, dtype=np.float64).reshape(-1, 3)
	if not cutoff > 0:
		raise ValueError(f'Cutoff must be positive, got {cutoff}.')
	return positions


def radius_neighbors_brute(positions, cutoff: float) -> EdgeList:
	'''
	All ordered pairs (j, i), j != i, with 0 < d(j, i) <= cutoff. O(n^2).
	'''
	positions = _check(positions, cutoff)
	n = positions.shape[0]

	if n < 2:
		return EdgeList.empty()

	src, dst = np.nonzero(~np.eye(n, dtype=bool))

	return _select(positions, src, dst, cutoff)


def radius_neighbors_grid(positions, cutoff: float) -> EdgeList:
	'''
	Cell-list search with a uniform grid of cell size = cutoff.

	Any pair within the cutoff sits in the same or an adjacent cell, so
	only the 27-cell neighborhood of each cell is inspected. The result is
	identical to radius_neighbors_brute after the canonical sort.
	'''
	positions = _check(positions, cutoff)
	n = positions.shape[0]

	if n < 2:
		return EdgeList.empty()

	# Float slack keeps pairs at exactly the cutoff within adjacent cells.
	cell_size = cutoff * (1.0 + 1e-9)
	cells = np.floor((positions - positions.min(axis=0)) / cell_size).astype(np.int64)

	table = {}
	for index, key in enumerate(map(tuple, cells)):
		table.setdefault(key, []).append(index)
	table = {k: np.asarray(v, dtype=np.int64) for k, v in table.items()}

	offsets = [
		(dx, dy, dz)
		for dx in (-1, 0, 1)
		for dy in (-1, 0, 1)
		for dz in (-1, 0, 1)
	]

	src_chunks = []
	dst_chunks = []

	for (cx, cy, cz), members in table.items():
		for dx, dy, dz in offsets:
			other = table.get((cx + dx, cy + dy, cz + dz))
			if other is None:
				continue
			s = np.repeat(other, members.shape[0])
			d = np.tile(members, other.shape[0])
			keep = s != d
			src_chunks.append(s[keep])
			dst_chunks.append(d[keep])

	src = np.concatenate(src_chunks) if src_chunks else np.zeros(0, dtype=np.int64)
	dst = np.concatenate(dst_chunks) if dst_chunks else np.zeros(0, dtype=np.int64)

	return _select(positions, src, dst, cutoff)
