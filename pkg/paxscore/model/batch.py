from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .basis import rbf_expand, angle_basis
from .config import ModelConfig
from ..graph import MultiplexGraph
from ..exceptions import ConfigError


@dataclass(frozen=True, eq=False)
class PlexEdges:
	src: np.ndarray
	dst: np.ndarray
	basis: np.ndarray

	def __len__(self):
		return self.src.shape[0]


@dataclass(frozen=True, eq=False)
class AngleFeatures:
	edge_a: np.ndarray
	edge_b: np.ndarray
	basis: np.ndarray

	def __len__(self):
		return self.edge_a.shape[0]


@dataclass(frozen=True, eq=False)
class GraphBatch:
	'''
	Disjoint union of graphs with their basis expansions precomputed.

	Args:
		- z (np.ndarray): (N,) atomic numbers of every node in the batch.
		- node_graph (np.ndarray): (N,) graph index of each node.
		- nodes_per_graph (np.ndarray): (B,)
		- global_plex (PlexEdges): RBF with n_rbf components at d_g.
		- local_plex (PlexEdges): RBF with n_srbf components at d_l.
		- angles (AngleFeatures): cosine harmonics with n_shbf components.
	'''
	z: np.ndarray
	node_graph: np.ndarray
	nodes_per_graph: np.ndarray
	global_plex: PlexEdges
	local_plex: PlexEdges
	angles: AngleFeatures

	@property
	def n_nodes(self):
		return int(self.z.shape[0])

	@property
	def n_graphs(self):
		return int(self.nodes_per_graph.shape[0])


def _plex(src, dst, distance, cutoff, n) -> PlexEdges:
	if distance.shape[0] and distance.max() > cutoff:
		raise ConfigError(
			f'Edge of length {distance.max():.3f} A exceeds the {cutoff} A cutoff; '
			f'graph was built with other cutoffs.'
		)
	basis = rbf_expand(distance, cutoff, n) if distance.shape[0] else np.zeros((0, n))
	return PlexEdges(src=src, dst=dst, basis=basis)


def collate(graphs: Sequence[MultiplexGraph], config: ModelConfig) -> GraphBatch:
	'''
	Merge graphs into one batch, offsetting node and local-edge indices.
	'''
	if not graphs:
		raise ValueError('Cannot collate an empty list of graphs.')

	z = []
	node_graph = []
	nodes_per_graph = []
	g_src, g_dst, g_dist = [], [], []
	l_src, l_dst, l_dist = [], [], []
	a_a, a_b, a_theta = [], [], []

	node_offset = 0
	edge_offset = 0

	for index, g in enumerate(graphs):
		n = g.n_nodes

		z.append(g.z)
		node_graph.append(np.full(n, index, dtype=np.int64))
		nodes_per_graph.append(n)

		g_src.append(g.global_edges.src + node_offset)
		g_dst.append(g.global_edges.dst + node_offset)
		g_dist.append(g.global_edges.distance)

		l_src.append(g.local_edges.src + node_offset)
		l_dst.append(g.local_edges.dst + node_offset)
		l_dist.append(g.local_edges.distance)

		a_a.append(g.angles.edge_a + edge_offset)
		a_b.append(g.angles.edge_b + edge_offset)
		a_theta.append(g.angles.theta)

		node_offset += n
		edge_offset += len(g.local_edges)

	cat = lambda parts, dtype: np.concatenate(parts).astype(dtype)

	theta = cat(a_theta, np.float64)

	return GraphBatch(
		z=cat(z, np.int64),
		node_graph=cat(node_graph, np.int64),
		nodes_per_graph=np.asarray(nodes_per_graph, dtype=np.int64),
		global_plex=_plex(
			cat(g_src, np.int64), cat(g_dst, np.int64), cat(g_dist, np.float64),
			config.d_g, config.n_rbf,
		),
		local_plex=_plex(
			cat(l_src, np.int64), cat(l_dst, np.int64), cat(l_dist, np.float64),
			config.d_l, config.n_srbf,
		),
		angles=AngleFeatures(
			edge_a=cat(a_a, np.int64),
			edge_b=cat(a_b, np.int64),
			basis=angle_basis(theta, config.n_shbf) if theta.shape[0] else np.zeros((0, config.n_shbf)),
		),
	)
