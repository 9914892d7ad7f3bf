'''
Error hierarchy for paxscore.

Every error derives from PaxscoreError, itself a ValueError, so callers
written against built-in errors keep working.
'''


class PaxscoreError(ValueError):
	pass


class ParseError(PaxscoreError):
	def __init__(self, message, line=None):
		self.line = line
		if line is not None:
			message = f'line {line}: {message}'
		super().__init__(message)


class EmptyStructureError(PaxscoreError):
	pass


class DegenerateStructureError(PaxscoreError):
	pass


class InvalidStructureError(PaxscoreError):
	pass


class CorrespondenceError(PaxscoreError):
	pass


class CoincidentAtomError(PaxscoreError):
	pass


class GraphIndexError(PaxscoreError, IndexError):
	pass


class ShapeError(PaxscoreError):
	def __init__(self, op, message):
		self.op = op
		super().__init__(f'{op}: {message}')


class NumericError(PaxscoreError, ArithmeticError):
	def __init__(self, op, message='non-finite value produced'):
		self.op = op
		super().__init__(f'{op}: {message}')


class ConfigError(PaxscoreError):
	pass


class ManifestError(PaxscoreError):
	def __init__(self, message, line=None, path=None):
		self.line = line
		self.path = path
		prefix = ''
		if path is not None:
			prefix += f'{path}'
		if line is not None:
			prefix += f':{line}'
		super().__init__(f'{prefix}: {message}' if prefix else message)


class CorruptCheckpointError(PaxscoreError):
	pass


class CheckpointMismatchError(PaxscoreError):
	pass


class EntryError(PaxscoreError):
	def __init__(self, entry, cause):
		self.entry = entry
		self.cause = cause
		super().__init__(f'{entry}: {cause}')


class EmptyGroupError(PaxscoreError):
	pass


class ReportError(PaxscoreError):
	pass
