from .functions import load_logger, int_to_chunks, batched, parallel_map, DEBUG_LEVELS
