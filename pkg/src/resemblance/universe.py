"""Budgeted notation universes and exhaustive covering search.

The true quantifiers of the theory range over all ordinals; the oracle
explores a finite, canonically ordered universe instead: every normal form
with bounded term count, bounded coefficients, natural exponents up to a
bounded degree, and optionally a strict value cap.  Search results are
exhaustive relative to that budget only, and only in the direction of
missed counterexamples.

The covering enumerator factors the domain into blocks (members coupled by
True relation pairs or by base/remainder attachment); within a block only
divisible members are free choice points, every non-divisible member being
forced to its base's image plus its remainder.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .closed_sets import ClosedSet, CoveringMap, Level, embedding_violations
from .components import RelationEngine
from .nu import NuEngine
from .ordinals import Ordinal, ZERO, add, natural, rho_split
from .verdicts import Truth


@dataclass(frozen=True)
class Budget:
    """Bounds on the candidate-image universe."""

    max_terms: int = 6
    max_coeff: int = 8
    max_degree: int = 4
    limit: Optional[Ordinal] = None  # strict value cap

    def to_json(self) -> dict:
        return {
            "max_terms": self.max_terms,
            "max_coeff": self.max_coeff,
            "max_degree": self.max_degree,
            "limit": None if self.limit is None else str(self.limit),
        }


def notation_universe(budget: Budget) -> list:
    """All budget ordinals, sorted increasing."""
    from .ordinals import _make
    out = [ZERO]

    def extend(prefix_terms, max_exp, depth):
        for e in range(max_exp, -1, -1):
            for c in range(1, budget.max_coeff + 1):
                terms = prefix_terms + ((natural(e), c),)
                val = _make(terms)
                if budget.limit is not None and val >= budget.limit:
                    break  # larger coefficients only grow the value
                out.append(val)
                if depth + 1 < budget.max_terms and e > 0:
                    extend(terms, e - 1, depth + 1)

    extend((), budget.max_degree, 0)
    out.sort()
    return out


@dataclass
class SearchEngines:
    fo: RelationEngine
    so: NuEngine

    @classmethod
    def for_rho(cls, rho, **kwargs) -> "SearchEngines":
        fo = RelationEngine(rho, **kwargs)
        return cls(fo, NuEngine(fo))


class UndeterminedSearch(Exception):
    """A relation verdict needed by certification was Undetermined."""


def relation_pairs(members, fo: RelationEngine, so: NuEngine):
    """All True constraint pairs (i, j, relation) among `members`; raises
    UndeterminedSearch when any needed verdict is Undetermined."""
    pairs = []
    for i, x in enumerate(members):
        for j in range(i + 1, len(members)):
            y = members[j]
            v1 = fo.le1(x, y)
            if v1.truth is Truth.UNDETERMINED:
                raise UndeterminedSearch(f"le1({x}, {y})")
            v2 = so.le2(x, y)
            if v2.truth is Truth.UNDETERMINED:
                raise UndeterminedSearch(f"le2({x}, {y})")
            if v1.is_true:
                pairs.append((i, j, "le1"))
            if v2.is_true:
                pairs.append((i, j, "le2"))
    return pairs


class CoveringSearch:
    """Exhaustive enumeration of coverings of a closed set with images in a
    budget universe, certified through the relation engines."""

    def __init__(self, domain: ClosedSet, budget: Budget,
                 engines: SearchEngines):
        self.domain = domain
        self.budget = budget
        self.eng = engines
        self.members = domain.members
        self.rho = domain.rho
        self.universe = notation_universe(budget)
        self.pairs = relation_pairs(self.members, engines.fo, engines.so)
        self._pairs_into: dict = {}
        for i, j, rel in self.pairs:
            self._pairs_into.setdefault(j, []).append((i, rel))
        self.base_pos: dict = {}
        for i, x in enumerate(self.members):
            base, eps = rho_split(x, self.rho)
            if eps:
                self.base_pos[i] = self.members.index(base)
        # per-position candidate values, filtered by remainder
        self._cands = []
        for x in self.members:
            rem = rho_split(x, self.rho)[1]
            self._cands.append(
                [v for v in self.universe if rho_split(v, self.rho)[1] == rem])

    def _pair_ok(self, images, pos) -> bool:
        for i, rel in self._pairs_into.get(pos, ()):
            if rel == "le1":
                v = self.eng.fo.le1(images[i], images[pos])
            else:
                v = self.eng.so.le2(images[i], images[pos])
            if v.truth is Truth.UNDETERMINED:
                raise UndeterminedSearch(
                    f"image pair {images[i]}, {images[pos]}")
            if not v.is_true:
                return False
        return True

    def _upper_bound(self, images, pos):
        """Exact cap on the image of `pos` from its incoming first-order
        constraints: a preserved pair (i, pos) forces the image into the
        interval of images[i]."""
        ub = None
        for i, _rel in self._pairs_into.get(pos, ()):
            info = self.eng.fo.max1_info(images[i])
            top = info.value
            if not isinstance(top, Ordinal):
                raise UndeterminedSearch(
                    f"interval top of {images[i]} undetermined")
            if ub is None or top < ub:
                ub = top
        return ub

    def all_coverings(self, cap: Optional[int] = None) -> list:
        """Every covering, positionwise-ascending canonical order."""
        import bisect

        results = []
        n = len(self.members)
        images: dict = {}
        uset = set(self.universe)

        def rec(pos):
            if cap is not None and len(results) >= cap:
                return
            if pos == n:
                results.append(self._emit(images))
                return
            prev = images[pos - 1] if pos else None
            if pos in self.base_pos:
                eps = rho_split(self.members[pos], self.rho)[1]
                y = add(images[self.base_pos[pos]], eps)
                if (prev is None or y > prev) and y in uset:
                    images[pos] = y
                    if self._pair_ok(images, pos):
                        rec(pos + 1)
                    del images[pos]
                return
            cands = self._cands[pos]
            start = bisect.bisect_right(cands, prev) if prev is not None else 0
            ub = self._upper_bound(images, pos)
            for k in range(start, len(cands)):
                y = cands[k]
                if ub is not None and y > ub:
                    break
                images[pos] = y
                if self._pair_ok(images, pos):
                    rec(pos + 1)
                del images[pos]

        rec(0)
        return results

    def _emit(self, images: dict) -> CoveringMap:
        img = tuple(images[i] for i in range(len(self.members)))
        bad = embedding_violations(self.domain, img)
        assert not bad, f"search produced a non-embedding: {bad}"
        return CoveringMap(self.domain, img, Level.COVERING)


def covering_search(domain: ClosedSet, budget: Budget,
                    engines: SearchEngines, cap: Optional[int] = None) -> list:
    """All coverings of `domain` with images in the budget universe, in
    canonical order.  Raises UndeterminedSearch when certification needs an
    Undetermined verdict."""
    return CoveringSearch(domain, budget, engines).all_coverings(cap=cap)
