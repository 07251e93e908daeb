"""The second-order layer inside an epsilon component.

For an epsilon number a > rho, the points of component `a` that are
divisible by kappa(a) = a and minimal for the second-order relation are
enumerated by nu(a, xi).  The laws in scope determine the chain exactly up
to the first limit index:

    nu(a, 0) = a,  nu(a, xi+1) = max2(nu(a, xi)) + a,  max2 at 0 and at
    successors is the point itself, and nu is continuous,

so nu(a, n) = a*(n+1) and nu(a, w) = a*w.  What max2 does at limit indices
is outside this calculus: it is surfaced as UNDETERMINED, which freezes the
chain past w.  The second-order decision le2 applies a fixed refutation
ladder (order, first-order respect, divisibility both ways, window
boundary, small-interval gap) and proves positives only inside a
determined window; everything else is Undetermined with trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .components import NotEpsilon, RelationEngine, UndeterminedValue
from .ordinals import (
    OMEGA, ONE, ZERO, Ordinal, OrdinalError, add, as_natural, format_ordinal,
    mul, natural, rho_quotient, rho_split, try_sub_left,
)
from .verdicts import (
    UNDETERMINED, ExtOrdinal, NuInfo, Truth, Verdict, false, is_determined,
    true, undetermined,
)


class DeltaNotDivisible(OrdinalError):
    """Small-interval translation requires the offset to be a multiple of
    the component's kappa."""


class XOutOfRange(OrdinalError):
    """Small-interval translation argument must lie in [1, kappa]."""


@dataclass(frozen=True)
class JInterval:
    lower: Ordinal
    upper: ExtOrdinal
    closed_upper: ExtOrdinal

    def to_json(self) -> dict:
        from .verdicts import ext_str
        return {
            "j_lower": format_ordinal(self.lower),
            "j_upper": ext_str(self.upper),
            "j_closed_upper": ext_str(self.closed_upper),
        }


@dataclass(frozen=True)
class Theta2Report:
    alpha: Ordinal
    shape: str
    second_point: Ordinal

    def text(self) -> str:
        return (f"theta2({format_ordinal(self.alpha)}) is infinity or the "
                f"successor of an infinite additively indecomposable ordinal; "
                f"the chain starts {format_ordinal(self.alpha)}, "
                f"{format_ordinal(self.second_point)} "
                f"(second point = kappa + kappa), ...")


class NuEngine:
    """Second-order decisions, layered over a first-order engine."""

    def __init__(self, first_order: RelationEngine):
        self.fo = first_order
        self.rho = first_order.rho

    def _check_epsilon(self, alpha: Ordinal) -> Ordinal:
        if not (alpha.is_epsilon_atom and alpha > self.rho):
            raise NotEpsilon(
                f"{format_ordinal(alpha)} is not an epsilon number above rho")
        k = self.fo.kappa(alpha)
        assert is_determined(k) and k == alpha
        return k

    # -- the nu chain -----------------------------------------------------------

    def nu(self, alpha: Ordinal, xi: Ordinal) -> ExtOrdinal:
        """The xi-th second-order minimal multiple in component alpha:
        a*(n+1) for finite xi, a*w at xi = w, UNDETERMINED past the first
        limit (its max2 is not settled here)."""
        kappa = self._check_epsilon(alpha)
        n = as_natural(xi)
        if n is not None:
            return mul(kappa, natural(n + 1))
        if xi == OMEGA:
            return mul(kappa, OMEGA)  # continuity over the finite chain
        return UNDETERMINED

    def nu_info(self, alpha: Ordinal, xi: Ordinal) -> NuInfo:
        v = self.nu(alpha, xi)
        m2 = self.max2(v) if is_determined(v) else UNDETERMINED
        up = self.nu(alpha, add(xi, ONE)) if is_determined(v) else UNDETERMINED
        return NuInfo(alpha, xi, v, m2, up)

    # -- max2 -------------------------------------------------------------------

    def max2(self, b: Ordinal) -> ExtOrdinal:
        """Largest second-order successor of b.  Equal to b outside epsilon
        components and at non-multiples; equal to b at determined chain
        points below the limit; UNDETERMINED from the limit point on."""
        j = self.fo.index(b)
        if not is_determined(j):
            return UNDETERMINED
        if not (j.is_epsilon_atom and j > self.rho):
            return b
        base, x = rho_split(b, j)
        if x:
            return b
        mu = rho_quotient(b, j)
        n = as_natural(mu)
        if n is not None:
            return b  # chain points 0..: max2 is the point itself
        return UNDETERMINED  # limit multiple: deferred growth

    # -- the second-order decision ------------------------------------------------

    def le2(self, b1: Ordinal, b2: Ordinal) -> Verdict:
        if b2 < b1:
            return false("order")
        if b1 == b2:
            return true("reflexive")
        v1 = self.fo.le1(b1, b2)
        if v1.is_false:
            return Verdict(Truth.FALSE, ("requires-first-order",) + v1.trace)
        j = self.fo.index(b1)
        if not is_determined(j):
            return undetermined("component-undetermined")
        if not (j.is_epsilon_atom and j > self.rho):
            return false("no-second-order-structure")
        base1, x1 = rho_split(b1, j)
        if x1:
            return false("source-not-divisible")
        base2, x2 = rho_split(b2, j)
        if x2:
            return false("small-interval-gap")
        mu1 = rho_quotient(b1, j)
        n1 = as_natural(mu1)
        if n1 is not None:
            # b1 = a*n1 is the (n1-1)-th chain point; its window is
            # [a*n1, a*(n1+1))
            upper = mul(j, natural(n1 + 1))
            if b2 >= upper:
                return false("second-order-boundary")
            return true("within-window-divisible")  # unreachable: one multiple
        if mu1 == OMEGA:
            # the window above the limit point is not settled here
            return Verdict(Truth.UNDETERMINED,
                           ("limit-window-undetermined",) + v1.trace)
        return undetermined("beyond-second-order-frontier")

    # -- small-interval translation -------------------------------------------------

    def rtsi_translate(self, alpha: Ordinal, delta: Ordinal,
                       x: Ordinal) -> Ordinal:
        """Witness of the small-interval recurrence: [1, kappa] maps onto
        [delta+1, delta+kappa] by x -> delta + x, for any multiple delta of
        kappa(alpha)."""
        kappa = self._check_epsilon(alpha)
        if rho_split(delta, kappa)[1]:
            raise DeltaNotDivisible(
                f"{format_ordinal(delta)} is not a multiple of {format_ordinal(kappa)}")
        if not (ONE <= x <= kappa):
            raise XOutOfRange(
                f"{format_ordinal(x)} outside [1, {format_ordinal(kappa)}]")
        return add(delta, x)

    # -- window intervals ---------------------------------------------------------

    def j_interval(self, alpha: Ordinal, xi: Ordinal) -> JInterval:
        lower = self.nu(alpha, xi)
        if not is_determined(lower):
            raise UndeterminedValue(
                f"nu({format_ordinal(alpha)}, {format_ordinal(xi)}) is undetermined")
        upper = self.nu(alpha, add(xi, ONE))
        return JInterval(lower, upper, upper)

    # -- shape report ---------------------------------------------------------------

    def theta2_shape(self, alpha: Ordinal) -> Theta2Report:
        kappa = self._check_epsilon(alpha)
        return Theta2Report(
            alpha,
            "infinity-or-successor-of-infinite-additively-indecomposable",
            add(kappa, kappa))
