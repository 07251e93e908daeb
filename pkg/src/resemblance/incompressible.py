"""Incompressible coverings: pointwise index-minimal images of closed sets.

A covering of a closed set is incompressible when no covering sends any
member into an earlier component.  The constructive route splits the set
into the fan reachable from its minimum, the remainder tail within rho of
the fan's top, and the rest; fans are placed in the least component wide
enough for their (recursively minimized) offsets, and the chain is
reassembled with a one-rho separator.  The bounded verifier instead
searches the budget universe for a covering that lowers some index.

Index sets of incompressible sets are characterized by four closure
clauses (base presence, complete finite-multiple chains, complete
prefix-sum chains of the indecomposable decomposition); `build_from_index_set`
realizes any valid index set by chaining canonical component skeletons.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .closed_sets import ClosedSet, CoveringMap, Level, closure
from .components import UndeterminedValue
from .ordinals import (
    Ordinal, ZERO, ONE, add, as_natural, format_ordinal, is_limit, mul,
    natural, omega_pow, rho_quotient, rho_split, sub_left,
)
from .universe import Budget, CoveringSearch, SearchEngines, UndeterminedSearch
from .verdicts import Truth, is_determined


class ClauseViolation(Exception):
    """An index-set hypothesis clause fails; `.clause` names which."""

    def __init__(self, clause: int, message: str):
        super().__init__(f"clause {clause}: {message}")
        self.clause = clause


@dataclass(frozen=True)
class IndexedSet:
    """A closed set together with the component index of each member."""

    base: ClosedSet
    indices: tuple

    def index_set(self) -> tuple:
        return tuple(sorted(set(self.indices)))

    def to_json(self) -> dict:
        return {
            "set": self.base.to_json(),
            "indices": [format_ordinal(i) for i in self.indices],
        }


def indexed(members: ClosedSet, engines: SearchEngines) -> IndexedSet:
    idx = []
    for m in members:
        j = engines.fo.index(m)
        if not is_determined(j):
            raise UndeterminedValue(f"index({format_ordinal(m)}) undetermined")
        idx.append(j)
    return IndexedSet(members, tuple(idx))


# -- constructive incompressible cover ---------------------------------------------


def incompressible_cover(x: ClosedSet, engines: SearchEngines) -> CoveringMap:
    """A pointwise index-minimal covering of `x`.  Raises UndeterminedValue
    when a needed first-order verdict is Undetermined."""
    image = _cover_values(x, engines)
    return CoveringMap(x, tuple(image), Level.EMBEDDING)


def _cover_values(x: ClosedSet, engines: SearchEngines) -> list:
    fo = engines.fo
    rho = x.rho
    members = x.members
    if not members:
        return []
    m = members[0]
    fan = [m]
    for y in members[1:]:
        v = fo.le1(m, y)
        if v.truth is Truth.UNDETERMINED:
            raise UndeterminedValue(
                f"le1({format_ordinal(m)}, {format_ordinal(y)}) undetermined")
        if v.is_true:
            fan.append(y)
        else:
            break
    k = len(fan)
    threshold = add(fan[-1], rho)
    near = [y for y in members[k:] if y < threshold]
    far = [y for y in members[k + len(near):]]

    if far:
        head = _cover_values(ClosedSet(fan + near, rho), engines)
        tail = _cover_values(ClosedSet(far, rho), engines)
        sep = add(head[-1], rho)
        return head + [add(sep, y) for y in tail]
    if near:
        head = _cover_values(ClosedSet(fan, rho), engines)
        img = dict(zip(fan, head))
        out = list(head)
        for y in near:
            base, eps = rho_split(y, rho)
            out.append(add(img[base], eps))
        return out
    # pure fan: min reaches every member
    if k == 1:
        return [rho_split(m, rho)[1]]  # the minimum of a closed set is divisible
    offsets = [sub_left(m, y) for y in fan[1:]]
    sub = closure([ZERO] + offsets, rho)
    sub_img = dict(zip(sub.members, _cover_values(sub, engines)))
    off_imgs = [sub_img[d] for d in offsets]
    top = max(off_imgs)
    j_star = fo.index(top)
    if not is_determined(j_star):
        raise UndeterminedValue(
            f"index({format_ordinal(top)}) undetermined")
    root = fo.kappa(mul(rho, omega_pow(j_star)))
    if not is_determined(root):
        raise UndeterminedValue("fan root undetermined")
    return [root] + [add(root, d) for d in off_imgs]


# -- index-set clauses and construction ------------------------------------------------


def index_set_violations(k_set, rho) -> list:
    """Violated hypothesis clauses for a prospective index set, as
    (clause, message) pairs.  Also usable as the experimental necessary-
    condition check on an observed index set."""
    ks = sorted(set(k_set))
    present = set(ks)
    out = []
    for a in ks:
        base, eps = rho_split(a, rho)
        if eps and base not in present:
            out.append((2, f"{format_ordinal(a)} without its base "
                           f"{format_ordinal(base)}"))
    for a in ks:
        base, eps = rho_split(a, rho)
        if eps:
            continue
        q = rho_quotient(a, rho)
        n = as_natural(q)
        if n is not None and n >= 1:
            for i in range(n):
                want = mul(rho, natural(i))
                if want not in present:
                    out.append((3, f"{format_ordinal(a)} without "
                                   f"{format_ordinal(want)}"))
        else:
            parts = _unit_parts(q)
            if len(parts) >= 2 and parts[0] > ONE:
                acc = ZERO
                for p in parts[:-1]:
                    acc = add(acc, p)
                    want = mul(rho, acc)
                    if want not in present:
                        out.append((4, f"{format_ordinal(a)} without prefix "
                                       f"{format_ordinal(want)}"))
    return out


def _unit_parts(q: Ordinal) -> list:
    """The additively indecomposable summands of q, largest first, with
    multiplicity."""
    parts = []
    for e, c in q.terms:
        parts.extend([omega_pow(e)] * c)
    return parts


def skeleton_values(j: Ordinal, engines: SearchEngines) -> list:
    """The canonical incompressible value set topping out at the component
    top of index j: complete multiple chains below rho*w, recursively
    витness fans above."""
    fo = engines.fo
    rho = fo.rho
    if not j:
        return [ZERO]
    base, eps = rho_split(j, rho)
    q = rho_quotient(j, rho)
    n = as_natural(q)
    if n is not None:  # j below rho*w
        out = [mul(rho, natural(i)) for i in range(n + 1)]
        if eps:
            out.append(j)
        return sorted(set(out))
    out = []
    prefix = ZERO
    for e, c in q.terms:
        for _ in range(c):
            if not e:
                prefix = add(prefix, rho)
                out.append(_kappa_or_raise(fo, prefix))
            else:
                prefix = add(prefix, mul(rho, omega_pow(e)))
                root = _kappa_or_raise(fo, prefix)
                out.extend(add(root, x) for x in skeleton_values(e, engines))
    if eps:
        out.append(_kappa_or_raise(fo, j))
    return sorted(set(out))


def _kappa_or_raise(fo, a: Ordinal) -> Ordinal:
    k = fo.kappa(a)
    if not is_determined(k):
        raise UndeterminedValue(f"kappa({format_ordinal(a)}) undetermined")
    return k


def build_from_index_set(k_set, engines: SearchEngines) -> IndexedSet:
    """An incompressible set whose members' indices form exactly the given
    set.  The clauses are validated first; violations raise
    ClauseViolation."""
    fo = engines.fo
    rho = fo.rho
    bad = index_set_violations(k_set, rho)
    if bad:
        clause, msg = bad[0]
        raise ClauseViolation(clause, msg)
    values = []
    for a in sorted(set(k_set)):
        base, eps = rho_split(a, rho)
        q = rho_quotient(a, rho)
        if as_natural(q) is not None:  # below rho*w: the value is its own index
            values.append(a)
            continue
        beta = q.terms[-1][0] if not eps else None
        if eps:
            values.append(_kappa_or_raise(fo, a))
            continue
        root = _kappa_or_raise(fo, a)
        values.extend(add(root, x) for x in skeleton_values(beta, engines))
    out = closure(values, rho)
    return indexed(out, engines)


def clause_closure(k_set, rho) -> set:
    """Close an index set under the hypothesis clauses.  Every added
    element is below an existing one, so this terminates."""
    out = set(k_set)
    changed = True
    while changed:
        changed = False
        for a in list(out):
            base, eps = rho_split(a, rho)
            if eps and base not in out:
                out.add(base)
                changed = True
                continue
            if eps:
                continue
            q = rho_quotient(a, rho)
            n = as_natural(q)
            if n is not None:
                for i in range(n):
                    want = mul(rho, natural(i))
                    if want not in out:
                        out.add(want)
                        changed = True
            else:
                parts = _unit_parts(q)
                if len(parts) >= 2 and parts[0] > ONE:
                    acc = ZERO
                    for p in parts[:-1]:
                        acc = add(acc, p)
                        want = mul(rho, acc)
                        if want not in out:
                            out.add(want)
                            changed = True
    return out


def extend_incompressible(x: ClosedSet, engines: SearchEngines) -> IndexedSet:
    """An incompressible superset with the same maximal index: close the
    index set under the clauses, build its canonical witness, and join."""
    if not x.members:
        return IndexedSet(x, ())
    rho = x.rho
    idx = indexed(x, engines)
    k_set = clause_closure(idx.indices, rho)
    built = build_from_index_set(sorted(k_set), engines)
    merged = closure(x.members + built.base.members, rho)
    return indexed(merged, engines)


# -- bounded verification ------------------------------------------------------------


class VerifyOutcome(Enum):
    CONFIRMED = "Confirmed"
    COUNTEREXAMPLE = "Counterexample"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class VerifyResult:
    outcome: VerifyOutcome
    witness: Optional[CoveringMap]
    reason: str
    budget: Budget

    def to_json(self) -> dict:
        data = {
            "verdict": self.outcome.value,
            "reason": self.reason,
            "budget": self.budget.to_json(),
        }
        if self.witness is not None:
            data["witness"] = self.witness.to_json()
        return data


def default_budget(x: ClosedSet, max_terms: int = 6, max_coeff: int = 8) -> Budget:
    """Budget generous enough to contain the identity covering of x and the
    pointwise-minimal one (whose values never exceed the identity)."""
    degree = 4
    coeff = max_coeff
    for m in x.members:
        for e, c in m.terms:
            n = as_natural(e)
            if n is not None:
                degree = max(degree, n)
            coeff = max(coeff, c + len(x.members))
    limit = add(x.members[-1], ONE) if x.members else ONE
    return Budget(max_terms=max(max_terms, max(
        (len(m.terms) for m in x.members), default=1)),
        max_coeff=coeff, max_degree=degree, limit=limit)


def verify_incompressible(x: ClosedSet, engines: SearchEngines,
                          budget: Optional[Budget] = None) -> VerifyResult:
    """Search the budget universe for a covering of x that lowers some
    member's index.  The first covering in canonical order is pointwise
    value-minimal, so a single probe decides; exhaustiveness is relative to
    the budget, in the direction of missed counterexamples only."""
    if budget is None:
        budget = default_budget(x)
    if not x.members:
        return VerifyResult(VerifyOutcome.CONFIRMED, None, "empty set", budget)
    try:
        search = CoveringSearch(x, budget, engines)
        found = search.all_coverings(cap=1)
    except UndeterminedSearch as e:
        return VerifyResult(VerifyOutcome.INCONCLUSIVE, None, str(e), budget)
    if not found:
        return VerifyResult(VerifyOutcome.INCONCLUSIVE, None,
                            "no covering within budget", budget)
    best = found[0]
    fo = engines.fo
    for orig, img in best.pairs():
        ji, jo = fo.index(img), fo.index(orig)
        if not (is_determined(ji) and is_determined(jo)):
            return VerifyResult(VerifyOutcome.INCONCLUSIVE, None,
                                "index undetermined", budget)
        if ji < jo:
            return VerifyResult(VerifyOutcome.COUNTEREXAMPLE, best,
                                f"{format_ordinal(orig)} lowers to component "
                                f"{format_ordinal(ji)}", budget)
    return VerifyResult(VerifyOutcome.CONFIRMED, None,
                        "no covering lowers any index", budget)
