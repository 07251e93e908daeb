"""Finite closed sets of ordinals and embedding-level maps between them.

For a fixed additively indecomposable `rho`, the stepping maps f_xi send a
multiple rho*z to rho*z + xi and anything else back down to its multiple.
A finite set is closed when it contains rho*d whenever it contains
rho*d + xi with 0 < xi < rho.  An order-preserving map between closed sets
is an embedding exactly when it preserves remainders mod rho and has closed
range; coverings are embeddings that additionally preserve the two
resemblance relations forward (certified against injected deciders).

Everything here is pure and immutable; instances are safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .ordinals import (
    Ordinal, OrdinalError, add, check_rho, compare, divides, format_ordinal,
    parse, rho_split,
)
from .verdicts import Truth, Verdict


class XiOutOfRange(OrdinalError):
    """f_xi requires xi < rho."""


class DomainNotClosed(OrdinalError):
    """The proposed domain is not closed under the base map."""


class EmbeddingRejected(OrdinalError):
    """Candidate map is not an embedding; lists every violated condition."""

    def __init__(self, reasons: Sequence[str]):
        super().__init__("; ".join(reasons))
        self.reasons = tuple(reasons)


class ImageNotDivisible(OrdinalError):
    """A partial map on divisible points must take divisible values."""


def f_xi(xi: Ordinal, a: Ordinal, rho: Ordinal) -> Ordinal:
    """The stepping map: rho*z + eps goes to rho*z + xi when eps = 0 and to
    rho*z otherwise.  Requires xi < rho."""
    rho = check_rho(rho)
    if compare(xi, rho) >= 0:
        raise XiOutOfRange(f"xi={format_ordinal(xi)} must be below rho={format_ordinal(rho)}")
    base, eps = rho_split(a, rho)
    if not eps:
        return add(a, xi)
    return base


class ClosedSet:
    """A finite, strictly sorted set of ordinals closed under the base map
    f_0 (contains rho*d whenever it contains rho*d + xi, 0 < xi < rho)."""

    __slots__ = ("members", "rho")

    def __init__(self, members: Iterable[Ordinal], rho: Ordinal):
        rho = check_rho(rho)
        ms = sorted(set(members))
        missing = _closure_defect(ms, rho)
        if missing:
            raise DomainNotClosed(
                "missing bases: " + ", ".join(format_ordinal(m) for m in missing))
        self.members = tuple(ms)
        self.rho = rho

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in set(self.members)

    def __eq__(self, other):
        return (isinstance(other, ClosedSet)
                and self.members == other.members and self.rho == other.rho)

    def __hash__(self):
        return hash((self.members, self.rho))

    def __repr__(self):
        body = ", ".join(format_ordinal(m) for m in self.members)
        return f"ClosedSet({{{body}}}, rho={format_ordinal(self.rho)})"

    def union(self, other: "ClosedSet") -> "ClosedSet":
        return ClosedSet(self.members + other.members, self.rho)

    def intersection(self, other: "ClosedSet") -> "ClosedSet":
        common = set(self.members) & set(other.members)
        return ClosedSet(common, self.rho)

    def initial_segment(self, cut: Ordinal) -> "ClosedSet":
        return ClosedSet([m for m in self.members if m < cut], self.rho)

    def to_json(self) -> list:
        return [format_ordinal(m) for m in self.members]

    @classmethod
    def from_json(cls, data: Sequence[str], rho: Ordinal,
                  epsilon_depth: int = 2) -> "ClosedSet":
        return cls([parse(s, epsilon_depth=epsilon_depth) for s in data], rho)


def _closure_defect(sorted_members, rho) -> list:
    present = set(sorted_members)
    missing = []
    for m in sorted_members:
        base, eps = rho_split(m, rho)
        if eps and base not in present:
            missing.append(base)
    return missing


def closure(members: Iterable[Ordinal], rho: Ordinal) -> ClosedSet:
    """Smallest closed set containing `members`.  A single pass suffices:
    the added bases are divisible, hence impose nothing further."""
    rho = check_rho(rho)
    out = set(members)
    for m in list(out):
        base, eps = rho_split(m, rho)
        if eps:
            out.add(base)
    return ClosedSet(out, rho)


def is_closed(members: Iterable[Ordinal], rho: Ordinal) -> bool:
    return not _closure_defect(sorted(set(members)), check_rho(rho))


class Level(Enum):
    EMBEDDING = "embedding"
    COVERING = "covering"


@dataclass(frozen=True)
class CoveringMap:
    """An order/remainder-preserving map between closed sets, recorded by
    position.  `level` says how far it has been certified: EMBEDDING means
    the structural conditions only, COVERING additionally the forward
    preservation of both resemblance relations."""

    domain: ClosedSet
    image: tuple
    level: Level = Level.EMBEDDING

    def pairs(self):
        return tuple(zip(self.domain.members, self.image))

    def apply(self, x: Ordinal) -> Ordinal:
        for a, b in zip(self.domain.members, self.image):
            if a == x:
                return b
        raise KeyError(format_ordinal(x))

    def image_set(self) -> ClosedSet:
        return ClosedSet(self.image, self.domain.rho)

    def is_identity(self) -> bool:
        return self.domain.members == self.image

    def compose(self, other: "CoveringMap") -> "CoveringMap":
        """self after other: requires range(other) = domain(self)."""
        if other.image_set().members != self.domain.members:
            raise OrdinalError("composition mismatch")
        image = tuple(self.apply(y) for y in other.image)
        level = self.level if self.level is other.level else Level.EMBEDDING
        return CoveringMap(other.domain, image, level)

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "image": [format_ordinal(x) for x in self.image],
            "level": self.level.value,
        }


def embedding_violations(domain: ClosedSet, image: Sequence[Ordinal]) -> list:
    """Every violated embedding condition for mapping `domain` onto `image`
    positionally: order preservation, remainder preservation, closed range."""
    rho = domain.rho
    reasons = []
    if len(image) != len(domain.members):
        return [f"arity: {len(domain.members)} members, {len(image)} images"]
    for i in range(1, len(image)):
        if not image[i - 1] < image[i]:
            reasons.append(
                f"order: {format_ordinal(image[i - 1])} !< {format_ordinal(image[i])}")
    for x, y in zip(domain.members, image):
        if rho_split(x, rho)[1] != rho_split(y, rho)[1]:
            reasons.append(
                f"remainder: {format_ordinal(x)} -> {format_ordinal(y)}"
                f" changes rem {format_ordinal(rho_split(x, rho)[1])}"
                f" to {format_ordinal(rho_split(y, rho)[1])}")
    if not is_closed(image, rho):
        reasons.append("image not closed")
    return reasons


def check_embedding(domain: ClosedSet, image: Sequence[Ordinal]) -> CoveringMap:
    """Accept the positional map as an embedding or reject it with every
    violated condition."""
    reasons = embedding_violations(domain, image)
    if reasons:
        raise EmbeddingRejected(reasons)
    return CoveringMap(domain, tuple(image), Level.EMBEDDING)


def extend_embedding(partial: Mapping[Ordinal, Ordinal],
                     domain: ClosedSet) -> CoveringMap:
    """Unique embedding of `domain` extending a map given on its divisible
    members, via h(base + xi) = h(base) + xi."""
    rho = domain.rho
    image = []
    for x in domain.members:
        base, eps = rho_split(x, rho)
        if not eps:
            if x not in partial:
                raise EmbeddingRejected(
                    [f"no image for divisible member {format_ordinal(x)}"])
            y = partial[x]
            if not divides(rho, y):
                raise ImageNotDivisible(
                    f"{format_ordinal(x)} -> {format_ordinal(y)} is not divisible")
            image.append(y)
        else:
            if base not in partial:
                raise EmbeddingRejected(
                    [f"no image for base {format_ordinal(base)}"])
            image.append(add(partial[base], eps))
    return check_embedding(domain, image)


@dataclass(frozen=True)
class MoveCheck:
    ok: bool
    least_moved: Optional[Ordinal]
    detail: str


def least_moved_check(cm: CoveringMap) -> MoveCheck:
    """Sanity assertion: the least point moved by an embedding, if any, is
    divisible by rho.  A failure indicates an upstream bug."""
    rho = cm.domain.rho
    for x, y in cm.pairs():
        if x != y:
            if divides(rho, x):
                return MoveCheck(True, x, "least moved point is divisible")
            return MoveCheck(
                False, x,
                f"least moved point {format_ordinal(x)} is not divisible by rho")
    return MoveCheck(True, None, "identity map")


Decider = Callable[[Ordinal, Ordinal], Verdict]


@dataclass(frozen=True)
class Certification:
    status: Truth
    reasons: tuple
    covering: Optional[CoveringMap] = None


def certify_covering(cm: CoveringMap, le1: Decider, le2: Decider) -> Certification:
    """Upgrade an embedding to a covering: both relations must be preserved
    forward on all domain pairs.  Any Undetermined verdict on a needed query
    makes the certification Undetermined rather than a guess."""
    undecided = []
    for i, (x, hx) in enumerate(cm.pairs()):
        for y, hy in cm.pairs()[i:]:
            for name, rel in (("first-order", le1), ("second-order", le2)):
                v = rel(x, y)
                if v.truth is Truth.UNDETERMINED:
                    undecided.append(
                        f"{name} {format_ordinal(x)},{format_ordinal(y)} undetermined")
                    continue
                if v.is_true:
                    w = rel(hx, hy)
                    if w.is_false:
                        return Certification(
                            Truth.FALSE,
                            (f"{name} not preserved at "
                             f"{format_ordinal(x)},{format_ordinal(y)}",))
                    if w.truth is Truth.UNDETERMINED:
                        undecided.append(
                            f"{name} image pair {format_ordinal(hx)},"
                            f"{format_ordinal(hy)} undetermined")
    if undecided:
        return Certification(Truth.UNDETERMINED, tuple(undecided))
    return Certification(
        Truth.TRUE, (), CoveringMap(cm.domain, cm.image, Level.COVERING))
