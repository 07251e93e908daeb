"""Three-valued verdicts with derivation traces, and the extended-value
markers used where the calculus cannot settle a quantity.

A `Verdict` is True/False/Undetermined plus the chain of rule names that
produced it, so every decided fact is auditable.  `UNDETERMINED` marks a
value the in-scope laws do not settle; it never silently coerces to an
ordinal.  `UNBOUNDED` is the "no upper bound" marker for interval data.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .ordinals import Ordinal


class Truth(Enum):
    TRUE = "True"
    FALSE = "False"
    UNDETERMINED = "Undetermined"


class _Marker:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self):
        return self._name

    def __str__(self):
        return self._name


UNDETERMINED = _Marker("undetermined")
UNBOUNDED = _Marker("infinity")

# An extended ordinal value: a real ordinal, or one of the two markers.
ExtOrdinal = Union[Ordinal, _Marker]


def is_determined(v: ExtOrdinal) -> bool:
    return isinstance(v, Ordinal)


def ext_str(v) -> str:
    if isinstance(v, Ordinal):
        from .ordinals import format_ordinal
        return format_ordinal(v)
    return str(v)


@dataclass(frozen=True)
class Verdict:
    truth: Truth
    trace: tuple = ()

    @property
    def is_true(self) -> bool:
        return self.truth is Truth.TRUE

    @property
    def is_false(self) -> bool:
        return self.truth is Truth.FALSE

    @property
    def is_undetermined(self) -> bool:
        return self.truth is Truth.UNDETERMINED

    def with_rule(self, rule: str) -> "Verdict":
        return Verdict(self.truth, (rule,) + self.trace)

    def __str__(self):
        if self.trace:
            return f"{self.truth.value} (trace: {'; '.join(self.trace)})"
        return self.truth.value


def true(*rules: str) -> Verdict:
    return Verdict(Truth.TRUE, rules)


def false(*rules: str) -> Verdict:
    return Verdict(Truth.FALSE, rules)


def undetermined(*rules: str) -> Verdict:
    return Verdict(Truth.UNDETERMINED, rules)


@dataclass(frozen=True)
class ComponentInfo:
    """Component data for an index a: the minimal point kappa_a and the
    (possibly unsettled) top max1(kappa_a), with a certified lower bound
    on the top that is exact whenever `max1` is determined."""

    alpha: Ordinal
    kappa: Ordinal
    max1: ExtOrdinal
    max1_lower_bound: Optional[Ordinal] = None

    def top_bound(self) -> Ordinal:
        if isinstance(self.max1, Ordinal):
            return self.max1
        assert self.max1_lower_bound is not None
        return self.max1_lower_bound


@dataclass(frozen=True)
class NuInfo:
    """Second-order point data inside an epsilon component."""

    alpha: Ordinal
    xi: Ordinal
    nu: ExtOrdinal
    max2: ExtOrdinal
    j_upper: ExtOrdinal
