import json
from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..exceptions import ConfigError


ABLATIONS = ('full', 'no_fusion', 'no_local', 'no_global')

Ablation = Literal['full', 'no_fusion', 'no_local', 'no_global']


class _Config(BaseModel):
	'''
	Base for validated, immutable configuration objects. Validation failures
	surface as ConfigError.
	'''
	model_config = ConfigDict(extra='forbid', frozen=True, protected_namespaces=())

	def __init__(self, **data):
		try:
			super().__init__(**data)
		except ValidationError as e:
			raise ConfigError(str(e)) from None

	def to_dict(self) -> dict:
		return self.model_dump()

	def to_json(self) -> str:
		return json.dumps(self.to_dict(), sort_keys=True)

	@classmethod
	def from_json(cls, text: str):
		try:
			data = json.loads(text)
		except json.JSONDecodeError as e:
			raise ConfigError(f'Invalid {cls.__name__} JSON: {e}') from None
		return cls(**data)

	def replace(self, **changes):
		return type(self)(**{**self.to_dict(), **changes})


class ModelConfig(_Config):
	'''
	Architecture hyperparameters.

	Args:
		- hidden_dim (int, default=16): F.
		- num_layers (int, default=1): T.
		- n_rbf (int, default=16): radial functions for global edges.
		- n_shbf (int, default=7): cosine harmonics for angles.
		- n_srbf (int, default=6): radial functions for local edges.
		- d_l (float, default=2.6): local cutoff, Angstrom.
		- d_g (float, default=20.0): global cutoff, Angstrom.
		- ablation (str, default='full'): one of ABLATIONS.
		- leaky_slope (float, default=0.01): attention LeakyReLU slope.
		- seed (int, default=0): parameter initialization seed.
	'''
	hidden_dim: int = Field(16, ge=1)
	num_layers: int = Field(1, ge=1)
	n_rbf: int = Field(16, ge=1)
	n_shbf: int = Field(7, ge=1)
	n_srbf: int = Field(6, ge=1)
	d_l: float = Field(2.6, gt=0)
	d_g: float = Field(20.0, gt=0)
	ablation: Ablation = 'full'
	leaky_slope: float = Field(0.01, ge=0)
	seed: int = 0

	@model_validator(mode='after')
	def _cutoffs(self):
		if not self.d_l < self.d_g:
			raise ValueError(f'd_l ({self.d_l}) must be smaller than d_g ({self.d_g})')
		return self

	@property
	def plexes(self) -> Tuple[str, ...]:
		if self.ablation == 'no_local':
			return ('global',)
		if self.ablation == 'no_global':
			return ('local',)
		return ('global', 'local')

	@property
	def attention(self) -> bool:
		return self.ablation != 'no_fusion' and len(self.plexes) > 1
