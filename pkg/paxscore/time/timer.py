import time
import logging
from functools import wraps, update_wrapper


class TimeIt:
	def __init__(self, func=None, decimals=4, text=None, logger=None):
		'''
		Utility class to time:
			1. Callables
			2. Indented blocks

		Elapsed times go to a logger at INFO level, never to stdout, so
		timed commands keep their output clean.

		Args:
			- func (callable, default=None)
			- decimals (int, default=4)
			- text(str, default=None): Use text for indented block
			- logger (logging.Logger, default=None): Defaults to the
				'paxscore.time' logger.

		Examples:

			A)
				@TimeIt
				def build():
					pass

				>> build takes: 0.0006 sec.

			B)
				with TimeIt(text='epoch 3') as timer:
					train_epoch()

				timer.elapsed

		'''
		if func is not None:
			update_wrapper(self, func)

		self.func = func
		self.decimals = decimals
		self.block_text = text or 'indented block'
		self.logger = logger or logging.getLogger('paxscore.time')
		self.elapsed = None

	def _report(self, name, t):
		self.elapsed = t
		self.logger.info(f"{name} takes: {round(t, self.decimals)} sec.")

	def __call__(self, func=None, *args, **kwargs):
		# When decorating without callable
		if self.func:
			# the func argument work as the first positional argument
			if func is not None:
				args = [func] + list(args)

			start = time.perf_counter()
			result = self.func(*args, **kwargs)
			self._report(self.func.__name__, time.perf_counter() - start)

			return result

		# When decorating with callable
		@wraps(func)
		def wrapper(*args, **kwargs):
			start = time.perf_counter()
			result = func(*args, **kwargs)
			self._report(func.__name__, time.perf_counter() - start)
			return result

		return wrapper

	def __enter__(self):
		self.start = time.perf_counter()
		return self

	def __exit__(self, *args):
		self._report(self.block_text, time.perf_counter() - self.start)
