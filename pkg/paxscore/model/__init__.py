from .config import ModelConfig, ABLATIONS
from .basis import rbf_expand, angle_basis
from .batch import GraphBatch, PlexEdges, AngleFeatures, collate
from .paxnet import (
	PaxNet,
	parameter_shapes,
	param_count,
	init_params,
	embed,
	global_message_pass,
	local_message_pass,
	update_block,
	attention_weights,
	fusion,
	forward,
	PUBLISHED_PARAM_COUNT,
)
