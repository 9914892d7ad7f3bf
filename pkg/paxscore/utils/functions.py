import os
import sys
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar


T = TypeVar('T')
R = TypeVar('R')

DEBUG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']


class _StderrHandler(logging.StreamHandler):
	'''
	Writes to whatever sys.stderr is at emit time, so swapped streams (test
	runners, redirected CLIs) keep working.
	'''
	def __init__(self):
		logging.Handler.__init__(self)

	@property
	def stream(self):
		return sys.stderr

	@stream.setter
	def stream(self, value):
		pass


def load_logger(name: str, debug_level: str='INFO') -> logging.Logger:
	'''
	Complete setup for built-in logging module.

	Args:
		- name (str): Logger name, usually the class name.
		- debug_level (str, default='INFO'): One of DEBUG_LEVELS according to
			logging package. Invalid values fall back to DEBUG with a warning.

	Returns:
		- logger (logging.Logger)
	'''
	_raise = False

	if debug_level not in DEBUG_LEVELS:
		_raise = True
		debug_level = 'DEBUG'

	logger = logging.getLogger(name)

	# Requesting the same logger twice must not duplicate output.
	if not any(getattr(h, '_paxscore', False) for h in logger.handlers):
		handler = _StderrHandler()
		handler.setFormatter(logging.Formatter('%(name)s - %(levelname)s - %(message)s'))
		handler._paxscore = True
		logger.addHandler(handler)
		logger.propagate = False

	logger.setLevel(getattr(logging, debug_level))

	if _raise:
		logger.warning(f'Debug level specified not valid. Setting to {debug_level}.')

	return logger


def int_to_chunks(number: int, n: int) -> List[int]:
	'''
	Split 0 -> number in n near-uniform sizes, larger chunks first.
	'''
	l = [int(number / n)] * n
	diff = number % n
	for i in range(diff):
		l[i] += 1
	return l


def batched(items: Sequence[T], size: int) -> List[Sequence[T]]:
	if size < 1:
		raise ValueError('Batch size must be at least 1.')
	return [items[i: i + size] for i in range(0, len(items), size)]


def parallel_map(
	f: Callable[[T], R],
	items: Iterable[T],
	threads: int=1,
	) -> List[R]:
	'''
	Ordered map over items.

	Args:
		- f (callable)
		- items (iterable)
		- threads (int, default=1): 1 runs inline. Larger values use a
			ThreadPoolExecutor; results always come back in input order so
			outputs do not depend on the width.

	Returns:
		- results (list)
	'''
	items = list(items)

	if threads is None or threads <= 1 or len(items) <= 1:
		return [f(i) for i in items]

	max_workers = min(len(items), threads, (os.cpu_count() or 1) + 4)

	with ThreadPoolExecutor(max_workers=max_workers) as ex:
		results = ex.map(f, items)

	return [*results]
