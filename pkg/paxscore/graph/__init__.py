from .neighbors import (
	Edge,
	EdgeList,
	radius_neighbors_brute,
	radius_neighbors_grid,
	pair_distances,
)
from .angles import AngleTriplet, AngleList, enumerate_angles, ONE_HOP, TWO_HOP
from .multiplex import MultiplexGraph, build_multiplex, LOCAL_CUTOFF, GLOBAL_CUTOFF
from .cache import save_graph, load_graph, graph_to_bytes, graph_from_bytes
