from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .neighbors import EdgeList
from ..exceptions import GraphIndexError


ONE_HOP = 0
TWO_HOP = 1
KINDS = {ONE_HOP: 'one_hop', TWO_HOP: 'two_hop'}


class AngleTriplet(NamedTuple):
	kind: str
	edge_a: int
	edge_b: int
	theta: float


@dataclass(frozen=True, eq=False)
class AngleList:
	'''
	Angle triplets over a local edge list.

	edge_a is the message edge (j -> i), edge_b the companion edge:
	(j' -> i) for one-hop angles with vertex i, (k -> j) for two-hop
	angles with vertex j. Canonical order is (edge_a, edge_b).
	'''
	kind: np.ndarray
	edge_a: np.ndarray
	edge_b: np.ndarray
	theta: np.ndarray

	@classmethod
	def empty(cls):
		return cls(
			kind=np.zeros(0, dtype=np.int64),
			edge_a=np.zeros(0, dtype=np.int64),
			edge_b=np.zeros(0, dtype=np.int64),
			theta=np.zeros(0, dtype=np.float64),
		)

	def __len__(self):
		return self.kind.shape[0]

	def __getitem__(self, i) -> AngleTriplet:
		return AngleTriplet(
			KINDS[int(self.kind[i])],
			int(self.edge_a[i]),
			int(self.edge_b[i]),
			float(self.theta[i]),
		)

	def __iter__(self) -> Iterator[AngleTriplet]:
		for i in range(len(self)):
			yield self[i]

	def count(self, kind: str) -> int:
		code = {v: k for k, v in KINDS.items()}[kind]
		return int((self.kind == code).sum())


def vertex_angles(positions, vertex, a, b) -> np.ndarray:
	'''
	Angle at vertex between the rays vertex -> a and vertex -> b, radians.
	'''
	u = positions[a] - positions[vertex]
	v = positions[b] - positions[vertex]
	u = u / np.linalg.norm(u, axis=1, keepdims=True)
	v = v / np.linalg.norm(v, axis=1, keepdims=True)
	cos = np.clip(np.einsum('ij,ij->i', u, v), -1.0, 1.0)
	return np.arccos(cos)


def enumerate_angles(local_edges: EdgeList, positions) -> AngleList:
	'''
	One-hop and two-hop angle triplets for every directed local edge.

	Args:
		- local_edges (EdgeList): directed edges, both orientations present.
		- positions (array-like): (n, 3) coordinates.

	Returns:
		- angles (AngleList)
	'''
	positions = np.asarray(positions, dtype=np.float64).reshape(-1, 3)
	n = positions.shape[0]
	src = local_edges.src
	dst = local_edges.dst

	if len(local_edges) and (
		src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n
	):
		raise GraphIndexError(f'Local edge references a node outside 0..{n - 1}.')

	if len(local_edges) == 0:
		return AngleList.empty()

	incoming = [[] for _ in range(n)]
	for e, i in enumerate(dst.tolist()):
		incoming[i].append(e)
	incoming = [np.asarray(i, dtype=np.int64) for i in incoming]

	kinds = []
	edge_a = []
	edge_b = []

	for a, (j, i) in enumerate(zip(src.tolist(), dst.tolist())):
		one = incoming[i]
		one = one[src[one] != j]

		two = incoming[j]
		two = two[src[two] != i]

		kinds.append(np.full(one.shape[0], ONE_HOP, dtype=np.int64))
		kinds.append(np.full(two.shape[0], TWO_HOP, dtype=np.int64))
		edge_a.append(np.full(one.shape[0] + two.shape[0], a, dtype=np.int64))
		edge_b.append(one)
		edge_b.append(two)

	kind = np.concatenate(kinds)
	edge_a = np.concatenate(edge_a)
	edge_b = np.concatenate(edge_b)

	if kind.shape[0] == 0:
		return AngleList.empty()

	# One-hop: vertex i = dst(a), rays towards src(a) and src(b).
	# Two-hop: vertex j = src(a) = dst(b), rays towards dst(a) and src(b).
	one_hop = kind == ONE_HOP
	vertex = np.where(one_hop, dst[edge_a], src[edge_a])
	ray_a = np.where(one_hop, src[edge_a], dst[edge_a])
	theta = vertex_angles(positions, vertex, ray_a, src[edge_b])

	order = np.lexsort((edge_b, edge_a))

	return AngleList(
		kind=kind[order],
		edge_a=edge_a[order],
		edge_b=edge_b[order],
		theta=theta[order],
	)
