'''
Versioned binary graph cache.

Layout, little-endian throughout:
	magic b'PXGR' | version u32 | node count u64 | id length u32 | id utf-8
	z: node count x i64
	global edges: count u64, then (src i64, dst i64, distance f64) records
	local edges: same layout
	triplets: count u64, then (kind u8, edge_a i64, edge_b i64, theta f64)
'''
import struct

import numpy as np

from .neighbors import EdgeList
from .angles import AngleList
from .multiplex import MultiplexGraph
from ..exceptions import CorruptCheckpointError


MAGIC = b'PXGR'
VERSION = 1

EDGE_DTYPE = np.dtype([('src', '<i8'), ('dst', '<i8'), ('distance', '<f8')])
TRIPLET_DTYPE = np.dtype([
	('kind', 'u1'), ('edge_a', '<i8'), ('edge_b', '<i8'), ('theta', '<f8'),
])


def _edges_bytes(edges: EdgeList) -> bytes:
	records = np.empty(len(edges), dtype=EDGE_DTYPE)
	records['src'] = edges.src
	records['dst'] = edges.dst
	records['distance'] = edges.distance
	return struct.pack('<Q', len(edges)) + records.tobytes()


def graph_to_bytes(graph: MultiplexGraph) -> bytes:
	gid = graph.id.encode('utf-8')

	triplets = np.empty(len(graph.angles), dtype=TRIPLET_DTYPE)
	triplets['kind'] = graph.angles.kind
	triplets['edge_a'] = graph.angles.edge_a
	triplets['edge_b'] = graph.angles.edge_b
	triplets['theta'] = graph.angles.theta

	return b''.join([
		struct.pack('<4sIQI', MAGIC, VERSION, graph.n_nodes, len(gid)),
		gid,
		np.asarray(graph.z, dtype='<i8').tobytes(),
		_edges_bytes(graph.global_edges),
		_edges_bytes(graph.local_edges),
		struct.pack('<Q', len(graph.angles)),
		triplets.tobytes(),
	])


class _Reader:
	def __init__(self, raw: bytes):
		self.raw = raw
		self.offset = 0

	def take(self, n: int) -> bytes:
		if self.offset + n > len(self.raw):
			raise CorruptCheckpointError('Graph cache is truncated.')
		chunk = self.raw[self.offset: self.offset + n]
		self.offset += n
		return chunk

	def unpack(self, fmt: str):
		return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

	def array(self, dtype, count: int) -> np.ndarray:
		dtype = np.dtype(dtype)
		return np.frombuffer(self.take(dtype.itemsize * count), dtype=dtype, count=count)


def graph_from_bytes(raw: bytes) -> MultiplexGraph:
	r = _Reader(raw)

	magic, version, n_nodes, id_len = r.unpack('<4sIQI')
	if magic != MAGIC:
		raise CorruptCheckpointError(f'Bad graph cache magic {magic!r}.')
	if version != VERSION:
		raise CorruptCheckpointError(f'Unsupported graph cache version {version}.')

	gid = r.take(id_len).decode('utf-8')
	z = r.array('<i8', n_nodes).astype(np.int64)

	def edges():
		(count,) = r.unpack('<Q')
		records = r.array(EDGE_DTYPE, count)
		return EdgeList(
			src=records['src'].astype(np.int64),
			dst=records['dst'].astype(np.int64),
			distance=records['distance'].astype(np.float64),
		)

	global_edges = edges()
	local_edges = edges()

	(count,) = r.unpack('<Q')
	triplets = r.array(TRIPLET_DTYPE, count)

	if r.offset != len(raw):
		raise CorruptCheckpointError('Trailing bytes after graph cache payload.')

	return MultiplexGraph(
		z=z,
		global_edges=global_edges,
		local_edges=local_edges,
		angles=AngleList(
			kind=triplets['kind'].astype(np.int64),
			edge_a=triplets['edge_a'].astype(np.int64),
			edge_b=triplets['edge_b'].astype(np.int64),
			theta=triplets['theta'].astype(np.float64),
		),
		id=gid,
	)


def save_graph(graph: MultiplexGraph, path: str):
	with open(path, 'wb') as f:
		f.write(graph_to_bytes(graph))


def load_graph(path: str) -> MultiplexGraph:
	with open(path, 'rb') as f:
		return graph_from_bytes(f.read())
