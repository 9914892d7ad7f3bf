from collections import OrderedDict
from typing import Dict, Iterator, Tuple

import numpy as np

from .tensor import Tensor
from ..exceptions import ShapeError


class ParamStore:
	'''
	Named learnable tensors with a fixed iteration order (insertion order).

	Names are unique and shapes never change after creation; new values are
	written into the existing arrays.
	'''
	def __init__(self):
		self._params = OrderedDict()

	def add(self, name: str, value) -> Tensor:
		if name in self._params:
			raise KeyError(f'Parameter {name!r} already exists.')
		t = Tensor(np.array(value, dtype=np.float64), requires_grad=True)
		self._params[name] = t
		return t

	def __getitem__(self, name: str) -> Tensor:
		return self._params[name]

	def __contains__(self, name: str) -> bool:
		return name in self._params

	def __iter__(self) -> Iterator[str]:
		return iter(self._params)

	def __len__(self):
		return len(self._params)

	def items(self) -> Iterator[Tuple[str, Tensor]]:
		return iter(self._params.items())

	def names(self):
		return list(self._params)

	@property
	def size(self) -> int:
		return int(sum(t.data.size for t in self._params.values()))

	def shapes(self) -> Dict[str, tuple]:
		return OrderedDict((k, t.shape) for k, t in self._params.items())

	def zero_grad(self):
		for t in self._params.values():
			t.grad = None

	def grads(self) -> Dict[str, np.ndarray]:
		'''
		Gradient per parameter; parameters untouched by the last backward
		pass report zeros.
		'''
		return OrderedDict(
			(k, t.grad.copy() if t.grad is not None else np.zeros_like(t.data))
			for k, t in self._params.items()
		)

	def state_dict(self) -> Dict[str, np.ndarray]:
		return OrderedDict((k, t.data.copy()) for k, t in self._params.items())

	def load_state_dict(self, state: Dict[str, np.ndarray]):
		missing = set(self._params) - set(state)
		unexpected = set(state) - set(self._params)
		if missing or unexpected:
			raise ShapeError(
				'load_state_dict',
				f'missing {sorted(missing)}, unexpected {sorted(unexpected)}'
			)
		for k, t in self._params.items():
			value = np.asarray(state[k], dtype=np.float64)
			if value.shape != t.shape:
				raise ShapeError('load_state_dict', f'{k}: expected {t.shape}, got {value.shape}')
			t.data[...] = value

	def __repr__(self):
		return f"ParamStore(tensors={len(self)}, size={self.size})"
