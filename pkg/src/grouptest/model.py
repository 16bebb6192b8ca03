"""Populations, probability parsing, and the numeric-mode contract.

A population is an ordered sequence of units.  Unit ``i`` is defective
with known probability ``p_i`` (independently of the others) and good
with probability ``q_i = 1 - p_i``.  All probabilities are strictly
inside (0, 1); the boundary values are rejected because the conditional
transitions used by every engine divide by ``1 - q_product`` terms that
would vanish at ``p = 0``.

Costs and probabilities travel on two parallel numeric tracks:

* FLOAT mode: IEEE doubles.  This is the performance path.  Equality
  decisions use the absolute tolerance :data:`TOLERANCE`, defined here
  once and imported everywhere a float comparison is made.
* EXACT mode: :class:`fractions.Fraction` values.  Decimal literals
  parse exactly (``0.62`` becomes 62/100), so equality and strict
  inequality can be decided without rounding doubt.  Exact mode is the
  arbiter when a float-mode comparison lands too close to call.

Downstream engines never branch on the mode: ``+``, ``-``, ``*`` and
``/`` on a mix of ints and either scalar kind stay inside that kind, so
the same code evaluates both.  The irrational constants below (the
pairwise-optimality range and the golden-ratio tie point) exist only as
floats; they have no exact decimal representation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Number = Union[float, Fraction]

# Absolute tolerance for FLOAT-mode equality decisions. Documented once,
# used everywhere.
TOLERANCE = 1e-9

# Range of defect probabilities p for which testing in pairs is an optimal
# nested strategy when all units share the same p. Closed interval: at
# either endpoint pairwise testing ties an alternative strategy.
R_RANGE_LO = 1.0 - 1.0 / math.sqrt(2.0)
R_RANGE_HI = (3.0 - math.sqrt(5.0)) / 2.0

# The q value at which a two-unit pair test exactly ties two individual
# tests: q**2 = 1 - q, i.e. q = (sqrt(5) - 1) / 2.
GOLDEN_RATIO_Q = (math.sqrt(5.0) - 1.0) / 2.0


class GroupTestError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(GroupTestError):
    """Invalid input value, population, or configuration."""


class SizeLimitError(GroupTestError):
    """A population exceeds the documented size limit of an operation."""


class Mode(enum.Enum):
    """Numeric track a population's probabilities live on."""

    FLOAT = "float"
    EXACT = "exact"


class ValueKind(enum.Enum):
    """Whether parsed literals are defect (p) or good (q) probabilities."""

    P_VALUES = "p"
    Q_VALUES = "q"


def _check_probability(value: Number, position: int) -> None:
    if not isinstance(value, (float, Fraction)):
        raise ValidationError(
            f"value {position}: unsupported probability type {type(value).__name__}"
        )
    if not (0 < value < 1):
        raise ValidationError(f"value {position}: {value} outside the open interval (0, 1)")


@dataclass(frozen=True)
class Unit:
    """One testable unit: an integer tag plus its defect probability."""

    uid: int
    p: Number

    @property
    def q(self) -> Number:
        return 1 - self.p


@dataclass(frozen=True)
class Population:
    """Ordered sequence of units; doubles as a testing order.

    The unit sequence is significant: engines that consume a "testing
    order" take a Population whose units are arranged in that order.
    """

    units: tuple[Unit, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        kinds: set[type] = set()
        for position, unit in enumerate(self.units, start=1):
            _check_probability(unit.p, position)
            if unit.uid in seen:
                raise ValidationError(f"duplicate unit id {unit.uid}")
            seen.add(unit.uid)
            kinds.add(type(unit.p))
        if len(kinds) > 1:
            raise ValidationError("population mixes float and exact probabilities")

    @classmethod
    def from_p(cls, values: Iterable[Number]) -> "Population":
        return cls(tuple(Unit(i, p) for i, p in enumerate(values, start=1)))

    @classmethod
    def from_q(cls, values: Iterable[Number]) -> "Population":
        return cls(tuple(Unit(i, 1 - q) for i, q in enumerate(values, start=1)))

    @property
    def n(self) -> int:
        return len(self.units)

    @property
    def p_values(self) -> tuple[Number, ...]:
        return tuple(u.p for u in self.units)

    @property
    def q_values(self) -> tuple[Number, ...]:
        return tuple(u.q for u in self.units)

    @property
    def mode(self) -> Mode:
        if self.units and isinstance(self.units[0].p, Fraction):
            return Mode.EXACT
        return Mode.FLOAT


def parse_population(
    text: str,
    kind: ValueKind = ValueKind.Q_VALUES,
    mode: Mode = Mode.FLOAT,
) -> Population:
    """Parse a comma- or newline-separated list of probability literals.

    Lines whose first non-blank character is ``#`` are comments. In EXACT
    mode each decimal literal becomes the exact ratio it denotes.
    Raises ValidationError naming the 1-based position of a malformed or
    out-of-range value.
    """
    tokens: list[str] = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens.extend(piece.strip() for piece in stripped.split(",") if piece.strip())

    values: list[Number] = []
    for position, token in enumerate(tokens, start=1):
        try:
            value: Number = Fraction(token) if mode is Mode.EXACT else float(token)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"value {position}: malformed literal {token!r}") from None
        _check_probability(value, position)
        values.append(value)

    if kind is ValueKind.Q_VALUES:
        return Population.from_q(values)
    return Population.from_p(values)


def q_product(pop: Population, i: int, j: int) -> Number:
    """Product of q over units i..j (1-based, inclusive).

    Computed directly from the stored values, so it is exact in EXACT
    mode and matches the plain left-to-right product in FLOAT mode.
    """
    if not (1 <= i <= j <= pop.n):
        raise IndexError(f"range {i}..{j} out of bounds for population of {pop.n}")
    return math.prod(u.q for u in pop.units[i - 1 : j])


def r_range_contains(p: Number) -> bool:
    """True iff p lies in the closed pairwise-optimality interval."""
    _check_probability(p, 1)
    return R_RANGE_LO <= p <= R_RANGE_HI


def sort_by_q_descending(pop: Population) -> Population:
    """Stable sort: q nonincreasing, equal-q units keep their relative order."""
    return Population(tuple(sorted(pop.units, key=lambda u: u.p)))
