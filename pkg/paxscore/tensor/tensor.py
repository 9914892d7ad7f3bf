'''
Dense float64 tensors with reverse-mode automatic differentiation.

Every op records its parents and a backward closure; Tensor.backward walks
the recorded graph in reverse topological order and accumulates gradients
into leaves that require them. Reductions through scatter-adds run in the
order of their index arrays, so results are reproducible bit for bit.
'''
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ShapeError, NumericError, GraphIndexError


Number = Union[int, float]

_GRAD_ENABLED = True


class no_grad:
	'''
	Context manager disabling graph recording, for inference and
	finite-difference evaluations.
	'''
	def __enter__(self):
		global _GRAD_ENABLED
		self._previous = _GRAD_ENABLED
		_GRAD_ENABLED = False
		return self

	def __exit__(self, *args):
		global _GRAD_ENABLED
		_GRAD_ENABLED = self._previous


class Tensor:
	__array_priority__ = 100

	def __init__(self, data, requires_grad: bool=False, _parents: Tuple=(), _op: str=''):
		self.data = np.asarray(data, dtype=np.float64)
		self.requires_grad = requires_grad
		self.grad = None
		self._parents = _parents
		self._backward = None
		self._op = _op

	@property
	def shape(self):
		return self.data.shape

	@property
	def size(self):
		return self.data.size

	def item(self) -> float:
		if self.data.size != 1:
			raise ShapeError('item', f'tensor of shape {self.shape} is not a scalar')
		return float(self.data.reshape(-1)[0])

	def numpy(self) -> np.ndarray:
		return self.data.copy()

	def __repr__(self):
		return f"Tensor(shape={self.shape}, op={self._op or 'leaf'}, requires_grad={self.requires_grad})"

	def zero_grad(self):
		self.grad = None

	def backward(self, grad: Optional[np.ndarray]=None):
		'''
		Reverse pass from this tensor. Scalars seed with 1.
		'''
		if grad is None:
			if self.data.size != 1:
				raise ShapeError('backward', 'gradient seed required for non-scalar tensors')
			grad = np.ones_like(self.data)

		topo = []
		visited = set()
		stack = [(self, False)]

		while stack:
			node, processed = stack.pop()
			if processed:
				topo.append(node)
				continue
			if id(node) in visited:
				continue
			visited.add(id(node))
			stack.append((node, True))
			for parent in node._parents:
				if parent.requires_grad and id(parent) not in visited:
					stack.append((parent, False))

		grads = {id(self): np.asarray(grad, dtype=np.float64)}

		for node in reversed(topo):
			g = grads.pop(id(node), None)
			if g is None:
				continue

			if node._backward is None:
				node.grad = g.copy() if node.grad is None else node.grad + g
				continue

			for parent, pg in zip(node._parents, node._backward(g)):
				if pg is None or not parent.requires_grad:
					continue
				if not np.all(np.isfinite(pg)):
					raise NumericError(f'{node._op}.backward')
				if id(parent) in grads:
					grads[id(parent)] = grads[id(parent)] + pg
				else:
					grads[id(parent)] = pg

	# Operator sugar
	def __add__(self, other):
		return add(self, other)

	def __radd__(self, other):
		return add(self, other)

	def __sub__(self, other):
		return add(self, scale(_lift(other), -1.0))

	def __rsub__(self, other):
		return add(scale(self, -1.0), other)

	def __mul__(self, other):
		if isinstance(other, (int, float)):
			return scale(self, other)
		return mul(self, other)

	def __rmul__(self, other):
		return self.__mul__(other)

	def __neg__(self):
		return scale(self, -1.0)

	def __matmul__(self, other):
		return matmul(self, other)

	@property
	def T(self):
		return transpose(self)


def _lift(x) -> Tensor:
	return x if isinstance(x, Tensor) else Tensor(x)


def _make(
	data: np.ndarray,
	parents: Sequence[Tensor],
	op: str,
	backward: Callable[[np.ndarray], Tuple],
	) -> Tensor:
	if not np.all(np.isfinite(data)):
		raise NumericError(op)

	track = _GRAD_ENABLED and any(p.requires_grad for p in parents)
	out = Tensor(data, requires_grad=track, _parents=tuple(parents) if track else (), _op=op)

	if track:
		out._backward = backward

	return out


def add(a, b) -> Tensor:
	'''
	a + b for equal shapes, a 2-D a with a row bias b of shape (F,), or a
	scalar b.
	'''
	a = _lift(a)
	b = _lift(b)

	if a.shape == b.shape:
		reduce_b = None
	elif b.data.ndim == 0:
		reduce_b = 'all'
	elif a.data.ndim == 2 and b.data.ndim == 1 and b.shape[0] == a.shape[1]:
		reduce_b = 'rows'
	else:
		raise ShapeError('add', f'cannot add {a.shape} and {b.shape}')

	def backward(g):
		if reduce_b is None:
			return g, g
		if reduce_b == 'all':
			return g, np.asarray(g.sum())
		return g, g.sum(axis=0)

	return _make(a.data + b.data, (a, b), 'add', backward)


def scale(a: Tensor, c: Number) -> Tensor:
	c = float(c)
	return _make(a.data * c, (a,), 'scale', lambda g: (g * c,))


def mul(a: Tensor, b: Tensor) -> Tensor:
	'''
	Elementwise (Hadamard) product of equal-shape tensors.
	'''
	a = _lift(a)
	b = _lift(b)

	if a.shape != b.shape:
		raise ShapeError('mul', f'cannot multiply {a.shape} and {b.shape} elementwise')

	return _make(a.data * b.data, (a, b), 'mul', lambda g: (g * b.data, g * a.data))


def matmul(a: Tensor, b: Tensor) -> Tensor:
	a = _lift(a)
	b = _lift(b)

	if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
		raise ShapeError('matmul', f'cannot multiply {a.shape} by {b.shape}')

	return _make(
		a.data @ b.data,
		(a, b),
		'matmul',
		lambda g: (g @ b.data.T, a.data.T @ g),
	)


def transpose(a: Tensor) -> Tensor:
	if a.data.ndim != 2:
		raise ShapeError('transpose', f'expected a matrix, got {a.shape}')
	return _make(a.data.T.copy(), (a,), 'transpose', lambda g: (g.T,))


def reshape(a: Tensor, shape) -> Tensor:
	try:
		data = a.data.reshape(shape)
	except ValueError:
		raise ShapeError('reshape', f'cannot reshape {a.shape} to {shape}') from None
	return _make(data.copy(), (a,), 'reshape', lambda g: (g.reshape(a.shape),))


def concat(tensors: Sequence[Tensor]) -> Tensor:
	'''
	Concatenate along the last axis.
	'''
	tensors = [_lift(t) for t in tensors]

	if not tensors:
		raise ShapeError('concat', 'nothing to concatenate')

	lead = tensors[0].shape[:-1]
	for t in tensors:
		if t.data.ndim == 0 or t.shape[:-1] != lead:
			raise ShapeError('concat', f'leading shapes differ: {[t.shape for t in tensors]}')

	widths = [t.shape[-1] for t in tensors]
	bounds = np.cumsum(widths)[:-1]

	def backward(g):
		return tuple(np.split(g, bounds, axis=-1))

	return _make(np.concatenate([t.data for t in tensors], axis=-1), tensors, 'concat', backward)


def _check_index(op, index, n):
	index = np.asarray(index, dtype=np.int64)
	if index.ndim != 1:
		raise ShapeError(op, f'index must be 1-D, got shape {index.shape}')
	if index.size and (index.min() < 0 or index.max() >= n):
		raise GraphIndexError(f'{op}: index outside 0..{n - 1}')
	return index


def gather(a: Tensor, index) -> Tensor:
	'''
	Row selection a[index].
	'''
	index = _check_index('gather', index, a.shape[0])

	def backward(g):
		out = np.zeros_like(a.data)
		np.add.at(out, index, g)
		return (out,)

	return _make(a.data[index], (a,), 'gather', backward)


def segment_sum(values: Tensor, segments, n: int) -> Tensor:
	'''
	Scatter-add rows of values into n segments, in index order.
	'''
	segments = _check_index('segment_sum', segments, n)

	if values.data.ndim == 0 or values.shape[0] != segments.shape[0]:
		raise ShapeError('segment_sum', f'{values.shape} values for {segments.shape[0]} segment ids')

	out = np.zeros((n,) + values.shape[1:], dtype=np.float64)
	np.add.at(out, segments, values.data)

	return _make(out, (values,), 'segment_sum', lambda g: (g[segments],))


def segment_softmax(values: Tensor, segments, n: int) -> Tensor:
	'''
	Softmax of values within each segment. Works on (m,) or (m, 1) values.
	'''
	segments = _check_index('segment_softmax', segments, n)

	if values.data.ndim == 0 or values.shape[0] != segments.shape[0]:
		raise ShapeError('segment_softmax', f'{values.shape} values for {segments.shape[0]} segment ids')

	x = values.data
	peak = np.full((n,) + x.shape[1:], -np.inf)
	np.maximum.at(peak, segments, x)

	e = np.exp(x - peak[segments])
	total = np.zeros((n,) + x.shape[1:], dtype=np.float64)
	np.add.at(total, segments, e)

	s = e / total[segments]

	def backward(g):
		weighted = np.zeros((n,) + x.shape[1:], dtype=np.float64)
		np.add.at(weighted, segments, g * s)
		return (s * (g - weighted[segments]),)

	return _make(s, (values,), 'segment_softmax', backward)


def _sigmoid(x: np.ndarray) -> np.ndarray:
	e = np.exp(-np.abs(x))
	return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def swish(a: Tensor) -> Tensor:
	'''
	Self-gated activation x * sigmoid(x).
	'''
	s = _sigmoid(a.data)

	return _make(
		a.data * s,
		(a,),
		'swish',
		lambda g: (g * (s + a.data * s * (1.0 - s)),),
	)


def leaky_relu(a: Tensor, slope: float=0.01) -> Tensor:
	positive = a.data > 0

	return _make(
		np.where(positive, a.data, slope * a.data),
		(a,),
		'leaky_relu',
		lambda g: (np.where(positive, g, slope * g),),
	)


def tensor_sum(a: Tensor) -> Tensor:
	return _make(np.asarray(a.data.sum()), (a,), 'sum', lambda g: (np.full(a.shape, g),))


def mean(a: Tensor) -> Tensor:
	if a.data.size == 0:
		raise ShapeError('mean', 'mean of an empty tensor')
	n = a.data.size
	return _make(np.asarray(a.data.mean()), (a,), 'mean', lambda g: (np.full(a.shape, g / n),))


def smooth_l1(pred: Tensor, target, beta: float=1.0) -> Tensor:
	'''
	Elementwise smooth L1 (Huber-style) loss.

	0.5 * x^2 / beta for |x| < beta, else |x| - 0.5 * beta, x = pred - target.
	'''
	if not beta > 0:
		raise ValueError(f'smooth_l1 beta must be positive, got {beta}.')

	pred = _lift(pred)
	target = np.asarray(target.data if isinstance(target, Tensor) else target, dtype=np.float64)

	if target.shape != pred.shape:
		raise ShapeError('smooth_l1', f'prediction {pred.shape} vs target {target.shape}')
	if not np.all(np.isfinite(target)):
		raise NumericError('smooth_l1', 'non-finite target')

	x = pred.data - target
	small = np.abs(x) < beta

	loss = np.where(small, 0.5 * x * x / beta, np.abs(x) - 0.5 * beta)

	return _make(
		loss,
		(pred,),
		'smooth_l1',
		lambda g: (g * np.where(small, x / beta, np.sign(x)),),
	)
