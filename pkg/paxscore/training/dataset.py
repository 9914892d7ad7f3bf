import logging
from typing import List, Sequence

from ..geom import read_structure, filter_heavy_cno
from ..graph import MultiplexGraph, build_multiplex, load_graph
from ..model import ModelConfig
from ..utils import parallel_map
from ..exceptions import PaxscoreError, EntryError


logger = logging.getLogger(__name__)


def structure_graph(path: str, config: ModelConfig, search: str='grid') -> MultiplexGraph:
	'''
	Graph of one structure file at the config's cutoffs.

	'.pxg' files are read from the graph cache as they are.
	'''
	if path.endswith('.pxg'):
		return load_graph(path)

	s = filter_heavy_cno(read_structure(path))
	return build_multiplex(s, d_l=config.d_l, d_g=config.d_g, search=search)


def build_graphs(
	paths: Sequence[str],
	config: ModelConfig,
	threads: int=1,
	search: str='grid',
	) -> List[MultiplexGraph]:
	'''
	Build every graph up front, in input order.

	Any failure is raised as EntryError naming the offending path before
	any work depends on the result.
	'''
	def build(path):
		try:
			return structure_graph(path, config, search=search)
		except (PaxscoreError, OSError) as e:
			raise EntryError(path, e) from e

	graphs = parallel_map(build, paths, threads=threads)
	logger.debug(f'Built {len(graphs)} graphs with {threads} thread(s).')

	return graphs
