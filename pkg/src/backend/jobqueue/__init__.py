from .tasks import queue, convergence_level
