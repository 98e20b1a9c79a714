"""signlab: sign-alphabet dataset building, transfer-learning training,
statistical model selection, evaluation, and serving.
"""

from .letters import LETTERS, N_CLASSES, letter_index

__version__ = "0.1.0"

__all__ = ["LETTERS", "N_CLASSES", "letter_index", "__version__"]
