"""SAT-based solving of safety games given as AIGER circuits.

The main entry points are :func:`learn_sat`, :func:`learn_qbf`,
:func:`synth_template` and :func:`synth_parallel`; each returns a
:class:`SynthesisVerdict` whose region can be checked with
:func:`check_winning_region`.
"""

__version__ = "0.1.0"

from .aiger import load_spec, parse_aag, to_safety_spec, write_aag  # noqa: E402
from .game import SafetySpec  # noqa: E402
from .learning import LearnOptions, Status, SynthesisVerdict, learn_qbf, learn_sat  # noqa: E402
from .parallel import synth_parallel  # noqa: E402
from .template import TemplateOptions, synth_template  # noqa: E402
from .verify import Mode, check_winning_region, explicit_attractor  # noqa: E402

__all__ = [
    "__version__", "load_spec", "parse_aag", "to_safety_spec", "write_aag", "SafetySpec",
    "LearnOptions", "Status", "SynthesisVerdict", "learn_sat", "learn_qbf", "synth_parallel",
    "TemplateOptions", "synth_template", "Mode", "check_winning_region", "explicit_attractor",
]
