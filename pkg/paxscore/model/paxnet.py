from collections import OrderedDict
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from .config import ModelConfig
from .batch import GraphBatch, PlexEdges, AngleFeatures, collate
from .layers import mlp_shapes, mlp, residual, initial_value
from ..graph import MultiplexGraph
from ..tensor import (
	ParamStore,
	Tensor,
	no_grad,
	add,
	scale,
	mul,
	matmul,
	transpose,
	reshape,
	concat,
	gather,
	segment_sum,
	segment_softmax,
	leaky_relu,
)
from ..utils import load_logger
from ..exceptions import GraphIndexError, ConfigError


# Atomic numbers 1..9 have embedding rows; only C, N and O are used.
EMBEDDING_ROWS = 9

PUBLISHED_PARAM_COUNT = 12530

UPDATE_BLOCKS = (
	'trunk_res1', 'trunk_skip', 'trunk_res2', 'trunk_res3',
	'forward_res1',
	'fusion_res1', 'fusion_res2',
)


def parameter_shapes(config: ModelConfig) -> OrderedDict:
	'''
	Name -> shape of every learnable tensor, in initialization order.
	'''
	F = config.hidden_dim
	shapes = OrderedDict(embedding=(EMBEDDING_ROWS, F))

	for t in range(config.num_layers):
		for plex in config.plexes:
			p = f'layer{t}.{plex}'
			n_basis = config.n_rbf if plex == 'global' else config.n_srbf

			shapes.update(mlp_shapes(f'{p}.message', 2 * F + n_basis, F, F))
			shapes[f'{p}.w_e'] = (n_basis, F)

			if plex == 'local':
				shapes.update(mlp_shapes(f'{p}.angle', config.n_shbf, F, F))

			for block in UPDATE_BLOCKS:
				shapes.update(mlp_shapes(f'{p}.update.{block}', F, F, F))

			if config.attention:
				shapes[f'{p}.fusion.w_att'] = (1, F)
			shapes[f'{p}.fusion.w_out'] = (1, F)

	return shapes


def param_count(config: ModelConfig) -> int:
	return int(sum(np.prod(s) for s in parameter_shapes(config).values()))


def init_params(config: ModelConfig, seed: int=None) -> ParamStore:
	rng = np.random.default_rng(config.seed if seed is None else seed)
	params = ParamStore()

	for name, shape in parameter_shapes(config).items():
		params.add(name, initial_value(rng, name, shape))

	return params


def embed(z: np.ndarray, params: ParamStore) -> Tensor:
	z = np.asarray(z, dtype=np.int64)
	if z.size and (z.min() < 1 or z.max() > EMBEDDING_ROWS):
		raise GraphIndexError(f'Atomic numbers must lie in 1..{EMBEDDING_ROWS}, got {sorted(set(z.tolist()))}.')
	return gather(params['embedding'], z - 1)


def _messages(h: Tensor, edges: PlexEdges, params: ParamStore, prefix: str) -> Tuple[Tensor, Tensor]:
	'''
	m_ji = MLP_m([h_j || h_i || e_ji]) and phi_d(e_ji) = e_ji W_e per edge.
	'''
	e = Tensor(edges.basis)
	m = mlp(params, f'{prefix}.message', concat([gather(h, edges.src), gather(h, edges.dst), e]))
	phi = matmul(e, params[f'{prefix}.w_e'])
	return m, phi


def global_message_pass(h: Tensor, edges: PlexEdges, params: ParamStore, t: int) -> Tensor:
	'''
	h_i <- h_i + sum_j m_ji * phi_d(e_ji), all messages from the incoming h.
	'''
	if len(edges) == 0:
		return h

	m, phi = _messages(h, edges, params, f'layer{t}.global')

	return add(h, segment_sum(mul(m, phi), edges.dst, h.shape[0]))


def local_message_pass(
	h: Tensor,
	edges: PlexEdges,
	angles: AngleFeatures,
	params: ParamStore,
	t: int,
	) -> Tensor:
	'''
	Message update over one-hop and two-hop angle companions, then the
	node update:

		m'_ji = m_ji + sum_b m_b * phi_d(e_b) * phi_theta(theta_{b, ji})
		h_i <- h_i + sum_j m'_ji * phi_d(e_ji)

	b ranges over the companion edges of the angle triplets of ji.
	'''
	if len(edges) == 0:
		return h

	prefix = f'layer{t}.local'
	m, phi = _messages(h, edges, params, prefix)

	if len(angles):
		if angles.edge_a.max() >= len(edges) or angles.edge_b.max() >= len(edges):
			raise GraphIndexError('Angle triplet references a missing local edge.')

		phi_theta = mlp(params, f'{prefix}.angle', Tensor(angles.basis))
		term = mul(mul(gather(m, angles.edge_b), gather(phi, angles.edge_b)), phi_theta)
		m = add(m, segment_sum(term, angles.edge_a, len(edges)))

	return add(h, segment_sum(mul(m, phi), edges.dst, h.shape[0]))


def update_block(h_raw: Tensor, params: ParamStore, t: int, plex: str) -> Tuple[Tensor, Tensor]:
	'''
	Residual update after a message pass.

	The trunk runs a residual block, a skip MLP added back onto h_raw and two
	more residual blocks; it then splits into the forwarding branch (one
	residual block, h_next) and the fusion branch (two residual blocks,
	h_fuse).
	'''
	p = f'layer{t}.{plex}.update'

	u = residual(params, f'{p}.trunk_res1', h_raw)
	u = add(mlp(params, f'{p}.trunk_skip', u), h_raw)
	u = residual(params, f'{p}.trunk_res2', u)
	u = residual(params, f'{p}.trunk_res3', u)

	h_next = residual(params, f'{p}.forward_res1', u)

	h_fuse = residual(params, f'{p}.fusion_res1', u)
	h_fuse = residual(params, f'{p}.fusion_res2', h_fuse)

	return h_next, h_fuse


def attention_weights(
	h_fuse: Dict[str, Tensor],
	params: ParamStore,
	t: int,
	slope: float,
	) -> Tensor:
	'''
	Per-node softmax over plexes of LeakyReLU(W_m h), shape (N, P).
	'''
	plexes = list(h_fuse)
	n = h_fuse[plexes[0]].shape[0]

	logits = concat([
		leaky_relu(matmul(h_fuse[p], transpose(params[f'layer{t}.{p}.fusion.w_att'])), slope)
		for p in plexes
	])
	segments = np.repeat(np.arange(n, dtype=np.int64), len(plexes))
	alpha = segment_softmax(reshape(logits, (n * len(plexes),)), segments, n)

	return reshape(alpha, (n, len(plexes)))


def fusion(
	h_fuse: Sequence[Dict[str, Tensor]],
	params: ParamStore,
	config: ModelConfig,
	node_graph: np.ndarray=None,
	n_graphs: int=1,
	return_attention: bool=False,
	):
	'''
	Two-step pooling of per-layer, per-plex node embeddings.

	Step 1 turns each layer's plex embeddings into node predictions y_{i,t}
	(attention-weighted sum of W_out h, or a plain mean under no_fusion or a
	single plex). Step 2 averages y_{i,t} over the nodes and layers of each
	graph.

	Args:
		- h_fuse (list): one {plex: (N, F) Tensor} per layer.
		- params (ParamStore)
		- config (ModelConfig)
		- node_graph (np.ndarray, default=None): graph index per node;
			None means a single graph.
		- n_graphs (int, default=1)
		- return_attention (bool, default=False): also return the (N, P)
			attention Tensor of every layer (empty list without attention).

	Returns:
		- y (Tensor): (n_graphs,) predictions.
	'''
	if len(h_fuse) != config.num_layers:
		raise ConfigError(f'Expected embeddings for {config.num_layers} layers, got {len(h_fuse)}.')

	for layer in h_fuse:
		missing = set(config.plexes) - set(layer)
		if missing:
			raise ConfigError(f'Fusion is missing plex embeddings: {sorted(missing)}.')

	n = h_fuse[0][config.plexes[0]].shape[0]
	if node_graph is None:
		node_graph = np.zeros(n, dtype=np.int64)

	attention = []
	total = None

	for t, layer in enumerate(h_fuse):
		layer = OrderedDict((p, layer[p]) for p in config.plexes)

		outs = concat([
			matmul(h, transpose(params[f'layer{t}.{p}.fusion.w_out']))
			for p, h in layer.items()
		])

		if config.attention:
			alpha = attention_weights(layer, params, t, config.leaky_slope)
			attention.append(alpha)
			weights = alpha
		else:
			weights = Tensor(np.full(outs.shape, 1.0 / len(layer)))

		y_t = matmul(mul(weights, outs), Tensor(np.ones((len(layer), 1))))
		total = y_t if total is None else add(total, y_t)

	counts = np.bincount(node_graph, minlength=n_graphs).astype(np.float64)
	if np.any(counts == 0):
		raise ConfigError('Every graph in a batch needs at least one node.')

	y = segment_sum(reshape(total, (n,)), node_graph, n_graphs)
	y = mul(y, Tensor(1.0 / (counts * config.num_layers)))

	if return_attention:
		return y, attention
	return y


def forward(
	graph: Union[MultiplexGraph, GraphBatch, Sequence[MultiplexGraph]],
	params: ParamStore,
	config: ModelConfig,
	return_attention: bool=False,
	):
	'''
	Predicted RMSD for a graph, a list of graphs or a collated batch.

	Each layer runs the global pass, its update block, then the local pass
	and its update block; the forwarding output of the local block feeds the
	next layer. Ablations drop a plex.

	Returns:
		- y (Tensor): (n_graphs,)
	'''
	if isinstance(graph, MultiplexGraph):
		batch = collate([graph], config)
	elif isinstance(graph, GraphBatch):
		batch = graph
	else:
		batch = collate(list(graph), config)

	h = embed(batch.z, params)
	h_fuse = []

	for t in range(config.num_layers):
		layer = {}

		if 'global' in config.plexes:
			h_raw = global_message_pass(h, batch.global_plex, params, t)
			h, layer['global'] = update_block(h_raw, params, t, 'global')

		if 'local' in config.plexes:
			h_raw = local_message_pass(h, batch.local_plex, batch.angles, params, t)
			h, layer['local'] = update_block(h_raw, params, t, 'local')

		h_fuse.append(layer)

	return fusion(
		h_fuse,
		params,
		config,
		node_graph=batch.node_graph,
		n_graphs=batch.n_graphs,
		return_attention=return_attention,
	)


class PaxNet:
	'''
	Physics-aware multiplex graph network scoring structural models by
	predicted RMSD.

	Args:
		- config (ModelConfig, default=None): ModelConfig() when None.
		- params (ParamStore, default=None): freshly initialized from
			config.seed when None.
		- debug_level (str, default='INFO')
	'''
	def __init__(
		self,
		config: ModelConfig=None,
		params: ParamStore=None,
		debug_level: str='INFO',
		):
		self.config = config or ModelConfig()
		self.params = params if params is not None else init_params(self.config)
		self.logger = load_logger(self.__class__.__name__, debug_level=debug_level)

		expected = parameter_shapes(self.config)
		if self.params.shapes() != expected:
			raise ConfigError('Parameter shapes do not match the model configuration.')

	def __repr__(self):
		return f"PaxNet(ablation={self.config.ablation}, F={self.config.hidden_dim}, T={self.config.num_layers}, params={self.params.size})"

	@property
	def param_count(self):
		return self.params.size

	def report_param_count(self):
		count = self.param_count
		delta = (count - PUBLISHED_PARAM_COUNT) / PUBLISHED_PARAM_COUNT
		self.logger.info(
			f'Parameter count {count} ({delta:+.1%} vs published {PUBLISHED_PARAM_COUNT}).'
		)
		return count, delta

	def forward(self, graphs, return_attention=False):
		return forward(graphs, self.params, self.config, return_attention=return_attention)

	def predict(self, graphs: Sequence[MultiplexGraph], batch_size: int=8) -> np.ndarray:
		'''
		Inference without graph recording, in input order.
		'''
		graphs = list(graphs)
		out = []
		with no_grad():
			for i in range(0, len(graphs), batch_size):
				out.append(self.forward(graphs[i: i + batch_size]).data.copy())
		return np.concatenate(out) if out else np.zeros(0)
