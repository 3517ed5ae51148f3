"""Learning-based winning-region computation."""

from .common import LearnOptions, LearnState, Status, SynthesisVerdict
from .hstree import hs_tree, literal_drop
from .learnqbf import all_min_generalizations, generalize, learn_qbf
from .learnsat import LearnSat, learn_sat

__all__ = [
    "LearnOptions", "LearnState", "Status", "SynthesisVerdict", "LearnSat",
    "learn_sat", "learn_qbf", "all_min_generalizations", "generalize", "hs_tree", "literal_drop",
]
