from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .params import ParamStore
from ..exceptions import ShapeError


@dataclass
class AdamState:
	'''
	Adam moments and hyperparameters. m and v are keyed by parameter name
	and created lazily on the first step.
	'''
	lr: float = 1e-4
	beta1: float = 0.9
	beta2: float = 0.999
	eps: float = 1e-8
	t: int = 0
	m: Dict[str, np.ndarray] = field(default_factory=dict)
	v: Dict[str, np.ndarray] = field(default_factory=dict)

	def copy(self):
		return AdamState(
			lr=self.lr, beta1=self.beta1, beta2=self.beta2, eps=self.eps, t=self.t,
			m={k: i.copy() for k, i in self.m.items()},
			v={k: i.copy() for k, i in self.v.items()},
		)


def adam_step(params: ParamStore, grads: Dict[str, np.ndarray], state: AdamState):
	'''
	One bias-corrected Adam update, in place.

	Args:
		- params (ParamStore)
		- grads (dict): name -> gradient array, same shapes as params.
		- state (AdamState): t is incremented before the update.

	Returns:
		- (params, state)
	'''
	for name, t in params.items():
		g = grads.get(name)
		if g is None:
			raise ShapeError('adam_step', f'no gradient for {name}')
		if np.shape(g) != t.shape:
			raise ShapeError('adam_step', f'{name}: gradient {np.shape(g)} vs parameter {t.shape}')

	state.t += 1

	c1 = 1.0 - state.beta1 ** state.t
	c2 = 1.0 - state.beta2 ** state.t

	for name, t in params.items():
		g = np.asarray(grads[name], dtype=np.float64)

		m = state.m.get(name)
		v = state.v.get(name)
		if m is None:
			m = np.zeros_like(t.data)
			v = np.zeros_like(t.data)
		elif m.shape != t.shape:
			raise ShapeError('adam_step', f'{name}: moment {m.shape} vs parameter {t.shape}')

		m = state.beta1 * m + (1.0 - state.beta1) * g
		v = state.beta2 * v + (1.0 - state.beta2) * g * g

		state.m[name] = m
		state.v[name] = v

		t.data -= state.lr * (m / c1) / (np.sqrt(v / c2) + state.eps)

	return params, state
