from .timer import TimeIt
