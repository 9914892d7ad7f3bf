from typing import Callable

import numpy as np

from .tensor import Tensor, no_grad
from .params import ParamStore
from ..exceptions import NumericError


def grad_check(
	f: Callable[[], Tensor],
	params: ParamStore,
	eps: float=1e-5,
	floor: float=1e-6,
	) -> float:
	'''
	Compare reverse-mode gradients with central differences.

	Args:
		- f (callable): no-argument function computing a scalar Tensor from
			the tensors in params.
		- params (ParamStore)
		- eps (float, default=1e-5): step, within [1e-7, 1e-4].
		- floor (float, default=1e-6): lower bound of the relative-error
			denominator, so gradients that are numerically zero compare by
			absolute error.

	Returns:
		- max_rel_error (float): |a - n| / max(|a|, |n|, floor) worst case.
	'''
	if not 1e-7 <= eps <= 1e-4:
		raise ValueError(f'eps must lie in [1e-7, 1e-4], got {eps}.')

	params.zero_grad()
	out = f()
	if not np.isfinite(out.item()):
		raise NumericError('grad_check', 'f is not finite')
	out.backward()
	analytic = params.grads()

	worst = 0.0

	with no_grad():
		for name, t in params.items():
			flat = t.data.reshape(-1)
			a = analytic[name].reshape(-1)

			for k in range(flat.shape[0]):
				original = flat[k]

				flat[k] = original + eps
				plus = f().item()
				flat[k] = original - eps
				minus = f().item()
				flat[k] = original

				if not (np.isfinite(plus) and np.isfinite(minus)):
					raise NumericError('grad_check', f'f is not finite around {name}[{k}]')

				numeric = (plus - minus) / (2.0 * eps)
				denom = max(abs(a[k]), abs(numeric), floor)
				worst = max(worst, abs(a[k] - numeric) / denom)

	return worst
