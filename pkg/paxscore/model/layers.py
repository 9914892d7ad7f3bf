from collections import OrderedDict

import numpy as np

from ..tensor import ParamStore, Tensor, add, matmul, swish


def mlp_shapes(prefix: str, n_in: int, hidden: int, n_out: int) -> OrderedDict:
	return OrderedDict([
		(f'{prefix}.w1', (n_in, hidden)),
		(f'{prefix}.b1', (hidden,)),
		(f'{prefix}.w2', (hidden, n_out)),
		(f'{prefix}.b2', (n_out,)),
	])


def dense(params: ParamStore, prefix: str, x: Tensor, layer: int) -> Tensor:
	return swish(add(matmul(x, params[f'{prefix}.w{layer}']), params[f'{prefix}.b{layer}']))


def mlp(params: ParamStore, prefix: str, x: Tensor) -> Tensor:
	'''
	Two dense layers, swish after each.
	'''
	return dense(params, prefix, dense(params, prefix, x, 1), 2)


def residual(params: ParamStore, prefix: str, x: Tensor) -> Tensor:
	'''
	x + MLP(x). All-zero weights give the identity.
	'''
	return add(x, mlp(params, prefix, x))


def glorot_uniform(rng: np.random.Generator, shape) -> np.ndarray:
	fan_in, fan_out = shape[0], shape[-1]
	limit = np.sqrt(6.0 / (fan_in + fan_out))
	return rng.uniform(-limit, limit, size=shape)


def initial_value(rng: np.random.Generator, name: str, shape) -> np.ndarray:
	'''
	Zeros for biases, N(0, 1) * 0.1 for embedding rows, Glorot uniform for
	every weight matrix.
	'''
	leaf = name.rsplit('.', 1)[-1]

	if leaf.startswith('b') and leaf[1:].isdigit():
		return np.zeros(shape)
	if name == 'embedding':
		return rng.standard_normal(size=shape) * 0.1
	return glorot_uniform(rng, shape)
