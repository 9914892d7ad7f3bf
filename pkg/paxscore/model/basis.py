import numpy as np


def rbf_expand(d, cutoff: float, n: int) -> np.ndarray:
	'''
	Spherical-Bessel-style radial basis.

	Component k (1..n) = sqrt(2 / cutoff) * sin(k * pi * d / cutoff) / d.

	Args:
		- d (float or array): distances in (0, cutoff].
		- cutoff (float)
		- n (int)

	Returns:
		- basis (np.ndarray): (n,) for a scalar d, else (len(d), n).
	'''
	scalar = np.ndim(d) == 0
	d = np.atleast_1d(np.asarray(d, dtype=np.float64))

	if np.any(d <= 0):
		raise ValueError('rbf_expand is defined for d > 0 only.')

	k = np.arange(1, n + 1, dtype=np.float64)
	out = np.sqrt(2.0 / cutoff) * np.sin(np.outer(d, k) * np.pi / cutoff) / d[:, None]

	return out[0] if scalar else out


def angle_basis(theta, n_shbf: int) -> np.ndarray:
	'''
	Cosine harmonics cos(l * theta), l = 0..n_shbf - 1. Theta is clamped
	to [0, pi].
	'''
	scalar = np.ndim(theta) == 0
	theta = np.clip(np.atleast_1d(np.asarray(theta, dtype=np.float64)), 0.0, np.pi)

	out = np.cos(np.outer(theta, np.arange(n_shbf, dtype=np.float64)))

	return out[0] if scalar else out
