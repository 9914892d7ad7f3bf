import logging
from dataclasses import dataclass

import numpy as np

from .neighbors import EdgeList, radius_neighbors_brute, radius_neighbors_grid
from .angles import AngleList, enumerate_angles
from ..geom import Structure
from ..exceptions import GraphIndexError


logger = logging.getLogger(__name__)

LOCAL_CUTOFF = 2.6
GLOBAL_CUTOFF = 20.0

SEARCHES = {
	'grid': radius_neighbors_grid,
	'brute': radius_neighbors_brute,
}


@dataclass(frozen=True, eq=False)
class MultiplexGraph:
	'''
	Two-plex molecular graph G = {G_global, G_local} over one node set.

	Args:
		- z (np.ndarray): (n,) atomic numbers.
		- global_edges (EdgeList): pairs within d_g.
		- local_edges (EdgeList): pairs within d_l, a subset of global_edges.
		- angles (AngleList): triplets over local_edges.
		- id (str, default=''): source structure id.
	'''
	z: np.ndarray
	global_edges: EdgeList
	local_edges: EdgeList
	angles: AngleList
	id: str = ''

	def __post_init__(self):
		n = self.n_nodes
		for name in ('global_edges', 'local_edges'):
			edges = getattr(self, name)
			if len(edges) and (
				min(edges.src.min(), edges.dst.min()) < 0
				or max(edges.src.max(), edges.dst.max()) >= n
			):
				raise GraphIndexError(f'{self.id}: {name} reference a node outside 0..{n - 1}.')

		m = len(self.local_edges)
		if len(self.angles) and (
			min(self.angles.edge_a.min(), self.angles.edge_b.min()) < 0
			or max(self.angles.edge_a.max(), self.angles.edge_b.max()) >= m
		):
			raise GraphIndexError(f'{self.id}: angle triplet references a missing local edge.')

	@property
	def n_nodes(self):
		return int(self.z.shape[0])

	def summary(self):
		return {
			'id': self.id,
			'nodes': self.n_nodes,
			'global_edges': len(self.global_edges),
			'local_edges': len(self.local_edges),
			'one_hop_angles': self.angles.count('one_hop'),
			'two_hop_angles': self.angles.count('two_hop'),
		}


def build_multiplex(
	s: Structure,
	d_l: float=LOCAL_CUTOFF,
	d_g: float=GLOBAL_CUTOFF,
	search: str='grid',
	) -> MultiplexGraph:
	'''
	Build the two-plex graph of an already C/N/O-filtered structure.

	Args:
		- s (Structure)
		- d_l (float, default=2.6): local cutoff, Angstrom.
		- d_g (float, default=20.0): global cutoff, Angstrom.
		- search (str, default='grid'): 'grid' or 'brute' neighbor search.

	Returns:
		- graph (MultiplexGraph)
	'''
	if not 0 < d_l < d_g:
		raise ValueError(f'Cutoffs must satisfy 0 < d_l < d_g, got d_l={d_l}, d_g={d_g}.')

	if search not in SEARCHES:
		raise ValueError(f'Unknown neighbor search {search!r}. Choose one of {list(SEARCHES)}')

	neighbors = SEARCHES[search]

	global_edges = neighbors(s.positions, d_g)
	local_edges = neighbors(s.positions, d_l)
	angles = enumerate_angles(local_edges, s.positions)

	if len(global_edges) == 0:
		logger.warning(f'{s.id}: no global edges within {d_g} A, structure is isolated.')

	return MultiplexGraph(
		z=np.array(s.elements, dtype=np.int64),
		global_edges=global_edges,
		local_edges=local_edges,
		angles=angles,
		id=s.id,
	)
