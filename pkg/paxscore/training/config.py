from typing import Optional

from pydantic import Field

from ..model.config import _Config, ModelConfig


class TrainConfig(_Config):
	'''
	Optimization settings.

	Args:
		- batch_size (int, default=8)
		- learning_rate (float, default=1e-4)
		- max_epochs (int, default=500)
		- patience (int, default=25): epochs without validation improvement
			before stopping. None disables early stopping.
		- seed (int, default=0): shuffling seed.
		- model (ModelConfig, default=ModelConfig())
		- val_manifest (str, default=None): validation manifest path. The
			training loss drives model selection when absent.
		- smooth_l1_beta (float, default=1.0)
		- beta1, beta2, eps (float): Adam constants.
		- threads (int, default=1): graph-building width.
	'''
	batch_size: int = Field(8, ge=1)
	learning_rate: float = Field(1e-4, gt=0)
	max_epochs: int = Field(500, ge=1)
	patience: Optional[int] = Field(25, ge=1)
	seed: int = 0
	model: ModelConfig = Field(default_factory=ModelConfig)
	val_manifest: Optional[str] = None
	smooth_l1_beta: float = Field(1.0, gt=0)
	beta1: float = Field(0.9, ge=0, lt=1)
	beta2: float = Field(0.999, ge=0, lt=1)
	eps: float = Field(1e-8, gt=0)
	threads: int = Field(1, ge=1)
