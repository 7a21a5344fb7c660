"""Finite inverse semigroups of partial bijections, the ample / rich /
ultra-rich hierarchy, and verdicts for semigroup amalgams."""

from .errors import AmpleError, ConsistencyError, InputError, ParseError, ResourceError
from .pbij import PartialBijection, format_pbij, parse_pbij
from .semigroup import (
    CayleyPresentation,
    FiniteSemigroup,
    closure,
    dual,
    idempotents,
    inverse_hull,
    wagner_preston,
)
from .families import FamilySpec, build, parse_family_spec, symmetric_inverse_monoid
from .ample import (
    classify,
    dominion_of,
    is_ample,
    is_left_ample,
    is_rich_ample,
    is_rich_left_ample,
    is_rich_right_ample,
    is_right_ample,
    is_ultra_rich_ample,
    is_ultra_rich_left_ample,
    is_ultra_rich_right_ample,
)
from .amalgam import AmalgamInstance, Monomorphism, classify_amalgam, special_check
from .census import run_census

__version__ = "0.1.0"


def family(text: str) -> FiniteSemigroup:
    """Shorthand for ``build(parse_family_spec(text))``."""
    return build(parse_family_spec(text))
