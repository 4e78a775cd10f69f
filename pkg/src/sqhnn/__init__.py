"""Square complexes and small cancellation for ascending HNN extensions of free groups."""

from importlib.metadata import PackageNotFoundError, version

from .bns import Character, brown_classify, hull, sweep, walk
from .cancel import c_prime, max_piece, piece_oracle, symmetrize
from .hnn import (
    FixedWordStream,
    genericity_experiment,
    is_immersion,
    periodic_conjugacy_search,
    periodic_exponent_filter,
    prefix_exponent_scan,
    random_endomorphism,
)
from .npc import build_link, check_condition_1, check_condition_2, girth, npc_check
from .presentation import (
    Presentation,
    abelianization,
    build_r_l,
    expand_to_at,
    mapping_torus,
    smith_normal_form,
    t_rewrite,
)
from .squarify import (
    apply_schedule,
    general_squarify_search,
    nested_cuts,
    prop31_squarify,
    verify_substitutions,
)
from .word import Alphabet, CyclicWord, Endomorphism, Word, cyclic_reduce, is_conjugate

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover - running from a source tree
    __version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "Character",
    "CyclicWord",
    "Endomorphism",
    "FixedWordStream",
    "Presentation",
    "Word",
    "__version__",
    "abelianization",
    "apply_schedule",
    "brown_classify",
    "build_link",
    "build_r_l",
    "c_prime",
    "check_condition_1",
    "check_condition_2",
    "cyclic_reduce",
    "expand_to_at",
    "general_squarify_search",
    "genericity_experiment",
    "girth",
    "hull",
    "is_conjugate",
    "is_immersion",
    "mapping_torus",
    "max_piece",
    "nested_cuts",
    "npc_check",
    "periodic_conjugacy_search",
    "periodic_exponent_filter",
    "piece_oracle",
    "prefix_exponent_scan",
    "prop31_squarify",
    "random_endomorphism",
    "smith_normal_form",
    "sweep",
    "symmetrize",
    "t_rewrite",
    "verify_substitutions",
    "walk",
]
