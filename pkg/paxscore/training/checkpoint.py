'''
Versioned binary checkpoints.

Layout, little-endian throughout:
	magic b'PAXN' | version u32
	ModelConfig JSON (sorted keys): length u32 | utf-8
	metadata JSON (sorted keys): length u32 | utf-8
	tensor count u32, then per tensor:
		name length u16 | name utf-8 | ndim u8 | dims u32 each | f8 data
	optimizer flag u8; when 1:
		t u64 | lr, beta1, beta2, eps f8 | per tensor, in tensor order: m, v
'''
import json
import struct
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..model import ModelConfig, parameter_shapes
from ..tensor import ParamStore, AdamState
from ..exceptions import CorruptCheckpointError, CheckpointMismatchError, ConfigError


MAGIC = b'PAXN'
VERSION = 1


@dataclass
class Checkpoint:
	'''
	Args:
		- config (ModelConfig)
		- params (ParamStore)
		- optimizer (AdamState, default=None)
		- metadata (dict): epoch, best_val_loss, seed and friends. Must be
			JSON serializable.
		- version (int, default=VERSION)
	'''
	config: ModelConfig
	params: ParamStore
	optimizer: Optional[AdamState] = None
	metadata: dict = field(default_factory=dict)
	version: int = VERSION

	@property
	def epoch(self):
		return self.metadata.get('epoch')

	@property
	def best_val_loss(self):
		return self.metadata.get('best_val_loss')


def _json_bytes(obj) -> bytes:
	return json.dumps(obj, sort_keys=True, allow_nan=False).encode('utf-8')


def _array_bytes(name: str, value: np.ndarray) -> bytes:
	key = name.encode('utf-8')
	value = np.ascontiguousarray(value, dtype='<f8')
	return b''.join([
		struct.pack('<H', len(key)),
		key,
		struct.pack('<B', value.ndim),
		struct.pack(f'<{value.ndim}I', *value.shape),
		value.tobytes(),
	])


def checkpoint_to_bytes(ckpt: Checkpoint) -> bytes:
	config = ckpt.config.to_json().encode('utf-8')
	metadata = _json_bytes(ckpt.metadata)

	chunks = [
		struct.pack('<4sI', MAGIC, ckpt.version),
		struct.pack('<I', len(config)), config,
		struct.pack('<I', len(metadata)), metadata,
		struct.pack('<I', len(ckpt.params)),
	]
	chunks.extend(_array_bytes(name, t.data) for name, t in ckpt.params.items())

	opt = ckpt.optimizer
	if opt is None:
		chunks.append(struct.pack('<B', 0))
	else:
		chunks.append(struct.pack('<BQ4d', 1, opt.t, opt.lr, opt.beta1, opt.beta2, opt.eps))
		for name, t in ckpt.params.items():
			m = opt.m.get(name, np.zeros(t.shape))
			v = opt.v.get(name, np.zeros(t.shape))
			chunks.append(np.ascontiguousarray(m, dtype='<f8').tobytes())
			chunks.append(np.ascontiguousarray(v, dtype='<f8').tobytes())

	return b''.join(chunks)


class _Reader:
	def __init__(self, raw: bytes):
		self.raw = raw
		self.offset = 0

	def take(self, n: int) -> bytes:
		if self.offset + n > len(self.raw):
			raise CorruptCheckpointError('Checkpoint is truncated.')
		chunk = self.raw[self.offset: self.offset + n]
		self.offset += n
		return chunk

	def unpack(self, fmt: str):
		return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

	def floats(self, shape) -> np.ndarray:
		count = int(np.prod(shape, dtype=np.int64))
		raw = self.take(8 * count)
		return np.frombuffer(raw, dtype='<f8', count=count).astype(np.float64).reshape(shape)

	def text(self, n: int) -> str:
		try:
			return self.take(n).decode('utf-8')
		except UnicodeDecodeError:
			raise CorruptCheckpointError('Checkpoint text field is not UTF-8.') from None


def checkpoint_from_bytes(raw: bytes, expected: ModelConfig=None) -> Checkpoint:
	'''
	Decode a checkpoint.

	Args:
		- raw (bytes)
		- expected (ModelConfig, default=None): when given, every stored
			tensor shape must match the shapes this config implies.

	Returns:
		- ckpt (Checkpoint)
	'''
	r = _Reader(raw)

	magic, version = r.unpack('<4sI')
	if magic != MAGIC:
		raise CorruptCheckpointError(f'Bad checkpoint magic {magic!r}.')
	if version != VERSION:
		raise CorruptCheckpointError(f'Unsupported checkpoint version {version}.')

	(n,) = r.unpack('<I')
	try:
		config = ModelConfig.from_json(r.text(n))
	except ConfigError as e:
		raise CorruptCheckpointError(f'Stored model config is invalid: {e}') from None

	(n,) = r.unpack('<I')
	try:
		metadata = json.loads(r.text(n))
	except json.JSONDecodeError as e:
		raise CorruptCheckpointError(f'Stored metadata is not JSON: {e}') from None

	(count,) = r.unpack('<I')
	tensors = OrderedDict()
	for _ in range(count):
		(n,) = r.unpack('<H')
		name = r.text(n)
		(ndim,) = r.unpack('<B')
		shape = r.unpack(f'<{ndim}I') if ndim else ()
		if name in tensors:
			raise CorruptCheckpointError(f'Duplicate tensor {name!r}.')
		tensors[name] = r.floats(shape)

	(flag,) = r.unpack('<B')
	optimizer = None
	if flag == 1:
		t, lr, beta1, beta2, eps = r.unpack('<Q4d')
		optimizer = AdamState(lr=lr, beta1=beta1, beta2=beta2, eps=eps, t=t)
		for name, value in tensors.items():
			optimizer.m[name] = r.floats(value.shape)
			optimizer.v[name] = r.floats(value.shape)
	elif flag != 0:
		raise CorruptCheckpointError(f'Bad optimizer flag {flag}.')

	if r.offset != len(raw):
		raise CorruptCheckpointError('Trailing bytes after checkpoint payload.')

	stored = OrderedDict((k, v.shape) for k, v in tensors.items())

	if expected is not None:
		wanted = parameter_shapes(expected)
		if dict(stored) != dict(wanted):
			diff = sorted(
				f'{k}: stored {stored.get(k)} vs expected {wanted.get(k)}'
				for k in set(stored) | set(wanted)
				if stored.get(k) != wanted.get(k)
			)
			raise CheckpointMismatchError(
				'Checkpoint shapes do not match the expected config: ' + '; '.join(diff[:5])
			)

	if dict(stored) != dict(parameter_shapes(config)):
		raise CorruptCheckpointError('Stored tensors do not match the stored model config.')

	params = ParamStore()
	for name in parameter_shapes(config):
		params.add(name, tensors[name])

	return Checkpoint(config=config, params=params, optimizer=optimizer, metadata=metadata, version=version)


def save_checkpoint(ckpt: Checkpoint, path: str):
	with open(path, 'wb') as f:
		f.write(checkpoint_to_bytes(ckpt))


def load_checkpoint(path: str, expected: ModelConfig=None) -> Checkpoint:
	with open(path, 'rb') as f:
		return checkpoint_from_bytes(f.read(), expected=expected)
