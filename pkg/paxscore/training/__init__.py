from .config import TrainConfig
from .manifest import DatasetManifest, ManifestEntry, load_manifest, write_manifest
from .synth import synth_decoys, random_folded_chain
from .dataset import structure_graph, build_graphs
from .checkpoint import (
	Checkpoint,
	save_checkpoint,
	load_checkpoint,
	checkpoint_to_bytes,
	checkpoint_from_bytes,
)
from .trainer import Trainer, train
