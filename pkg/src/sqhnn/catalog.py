"""Named groups and endomorphisms used throughout the package and its tests."""

from __future__ import annotations

from .presentation import AT, Presentation, build_r_l, expand_to_at, mapping_torus
from .word import Endomorphism

__all__ = [
    "SAPIR",
    "PHI",
    "PHI_FIXED_PREFIX",
    "L8_RELATOR",
    "sapir",
    "phi",
    "r_l_group",
    "sapir_torus",
    "phi_torus",
    "baumslag_solitar_12",
    "torus",
]

SAPIR = "a -> a b, b -> b a"
PHI = "a -> a b^-1 a^2 b, b -> b a^-1 b^2 a"

# the first ten letters of lim PHI^i(a)
PHI_FIXED_PREFIX = "a b^-1 a^2 b a^-1 b^-2 a b^-1"

# r_8 written out over a, t
L8_RELATOR = (
    "t^8 a^-1 t^-8 a^-1 t^7 a t^-6 a t^5 a t^-4 a t^3 a t^-2 a t a t^-4 a^-1 "
    "t^8 a t^-8 a t^7 a^-1 t^-6 a^-1 t^5 a^-1 t^-4 a^-1 t^3 a^-1 t^-2 a^-1 t a^-1 t^-4 a"
)


def sapir() -> Endomorphism:
    return Endomorphism.parse(SAPIR)


def phi() -> Endomorphism:
    return Endomorphism.parse(PHI)


def r_l_group(l: int) -> Presentation:
    """``< a, t | r_l >`` with ``r_l`` expanded via ``a_i = t^i a t^-i``."""
    return Presentation(AT, [expand_to_at(build_r_l(l))])


def sapir_torus() -> Presentation:
    return mapping_torus(sapir())


def phi_torus() -> Presentation:
    return mapping_torus(phi())


def baumslag_solitar_12() -> Presentation:
    return Presentation.parse("< a, t | t a t^-1 = a^2 >")


def torus() -> Presentation:
    return Presentation.parse("< a, t | t a t^-1 a^-1 >")
