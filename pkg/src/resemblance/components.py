"""The first-order layer of the resemblance calculus.

For a fixed additively indecomposable `rho`, the ordinals split into
consecutive closed intervals ("components"): the enumeration `kappa` of
their minimal points, the top of each component (`max1` of its kappa), and
the component index of an arbitrary value.  The recursion follows four
laws plus continuity:

  * kappa(0) = 0, and the top of component 0 is 0;
  * for a small tail 0 < t < rho*w: kappa(a+t) = top(a) + t, and that
    component is a singleton (successor-step);
  * additivity: kappa(a+b) = top(a) + kappa(b), top(a+b) = top(a) + top(b)
    (component-additivity);
  * for pure powers, top(rho*w^b) = kappa(rho*w^b) + top(b)
    (power-recurrence), which pins kappa(rho*w^b) = rho*w^b below the
    least epsilon number above rho.

At an epsilon number e > rho the power-recurrence becomes self-referential:
it certifies the lower bound kappa(e)*w for the top but no exact value.
The exact value kappa(e)*(w+1) for the *least* such epsilon is a
sequel-sourced fact, exposed only behind `assume_sequel`.  Every quantity
the in-scope laws do not settle is returned as UNDETERMINED, never guessed;
lower bounds are tracked separately so that decisions which only need a
bound still resolve.

All operations are pure; memo tables are per-engine dicts, and concurrent
use is safe in the sense that duplicated computation is acceptable and
insertion is atomic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .ordinals import (
    OMEGA, ONE, ZERO, Ordinal, OrdinalError, add, check_rho, compare, divides,
    epsilon, format_ordinal, is_additively_indecomposable, is_limit,
    is_limit_multiple, mul, natural, omega_pow, rho_quotient, rho_split,
    sub_left, try_sub_left,
)
from .verdicts import (
    UNDETERMINED, ComponentInfo, ExtOrdinal, Truth, Verdict, false,
    is_determined, true, undetermined,
)


class UndeterminedValue(OrdinalError):
    """An exact ordinal was required where only Undetermined is available."""


class NotEpsilon(OrdinalError):
    """Operation requires an epsilon number greater than rho."""


class XNotInComponent(OrdinalError):
    """Translation argument lies outside the stated component."""


class NotApplicable(OrdinalError):
    """A translation hypothesis fails; the message names it."""


_OMEGA_PLUS_ONE = add(OMEGA, ONE)


@dataclass(frozen=True)
class Max1Info:
    value: ExtOrdinal
    lower_bound: Ordinal
    rules: tuple


class RelationEngine:
    """Decision procedures for the first-order relation at a fixed rho."""

    def __init__(self, rho: Union[Ordinal, int] = ONE, *,
                 epsilon_depth: int = 1, assume_sequel: bool = False):
        if isinstance(rho, int):
            rho = natural(rho)
        self.rho = check_rho(rho)
        self.r = self.rho.terms[0][0]
        self.rho_omega = omega_pow(add(self.r, ONE))
        self.epsilon_depth = epsilon_depth
        self.assume_sequel = assume_sequel
        self.eps_star: Optional[Ordinal] = None
        for k in range(epsilon_depth):
            atom = epsilon(k)
            if atom > self.rho:
                self.eps_star = atom
                break
        self._kappa: dict = {}
        self._kappa_lb: dict = {}
        self._m1k: dict = {}
        self._m1k_lb: dict = {}
        self._index: dict = {}
        self._max1: dict = {}

    # -- small-tail split ---------------------------------------------------

    def _split_tail(self, a: Ordinal):
        """a = H + t with t the maximal tail below rho*w (exponents <= r)."""
        terms = a.terms
        i = len(terms)
        while i > 0 and compare(terms[i - 1][0], self.r) <= 0:
            i -= 1
        from .ordinals import _make  # canonical split of a canonical tuple
        return _make(terms[:i]), _make(terms[i:])

    def _is_eps_above_rho(self, a: Ordinal) -> bool:
        return a.is_epsilon_atom and a > self.rho

    # -- kappa ----------------------------------------------------------------

    def kappa(self, a: Ordinal) -> ExtOrdinal:
        """The minimal point of component `a` (UNDETERMINED past the
        frontier)."""
        v = self._kappa.get(a)
        if v is None:
            v = self._kappa_compute(a)
            self._kappa[a] = v
        return v

    def _kappa_compute(self, a: Ordinal) -> ExtOrdinal:
        if not a:
            return ZERO
        high, tail = self._split_tail(a)
        if tail:
            m = self.max1_kappa(high)
            return add(m, tail) if is_determined(m) else UNDETERMINED
        # a > 0 and divisible by rho*w: peel one power off the last term
        e, c = a.terms[-1]
        prefix = self._drop_one_power(a)
        p = self._kappa_power(e)
        if not prefix:
            return p
        m = self.max1_kappa(prefix)
        if is_determined(m) and is_determined(p):
            return add(m, p)
        return UNDETERMINED

    @staticmethod
    def _drop_one_power(a: Ordinal) -> Ordinal:
        from .ordinals import _make
        e, c = a.terms[-1]
        if c > 1:
            return _make(a.terms[:-1] + ((e, c - 1),))
        return _make(a.terms[:-1])

    def _kappa_power(self, e: Ordinal) -> ExtOrdinal:
        """kappa at the index w^e = rho*w^(e-r), for e >= r+1."""
        value = omega_pow(e)
        if self.eps_star is None or value <= self.eps_star:
            # identity zone: kappa fixes rho*w^b up to the least epsilon
            return value
        e1 = sub_left(self.r, e)
        if not is_limit(e1):
            # successor exponent: top of the previous power level, times w
            e0 = self._predecessor(e1)
            x = self._kappa_power(add(self.r, e0)) if e0 else self.rho_omega
            m1 = self.max1_kappa(e0)
            if is_determined(x) and is_determined(m1):
                return mul(add(x, m1), OMEGA)
            return UNDETERMINED
        return UNDETERMINED  # limit exponent past the least epsilon

    @staticmethod
    def _predecessor(a: Ordinal) -> Ordinal:
        from .ordinals import _make
        e, c = a.terms[-1]
        assert not e.terms, "predecessor of a limit"
        if c > 1:
            return _make(a.terms[:-1] + ((e, c - 1),))
        return _make(a.terms[:-1])

    def kappa_lb(self, a: Ordinal) -> Ordinal:
        """Certified lower bound for kappa(a); exact when determined."""
        v = self.kappa(a)
        if is_determined(v):
            return v
        cached = self._kappa_lb.get(a)
        if cached is not None:
            return cached
        if not a:
            out = ZERO
        else:
            high, tail = self._split_tail(a)
            if tail:
                out = add(self.max1_kappa_lb(high), tail)
            else:
                prefix = self._drop_one_power(a)
                e, _ = a.terms[-1]
                p = self._kappa_power(e)
                p_lb = p if is_determined(p) else omega_pow(e)
                out = add(self.max1_kappa_lb(prefix), p_lb) if prefix else p_lb
        out = max(out, a)  # the enumeration never falls below its index
        self._kappa_lb[a] = out
        return out

    # -- max1 of kappa ---------------------------------------------------------

    def max1_kappa(self, a: Ordinal) -> ExtOrdinal:
        """Top of component `a`."""
        v = self._m1k.get(a)
        if v is None:
            v = self._m1k_compute(a)
            self._m1k[a] = v
        return v

    def _m1k_compute(self, a: Ordinal) -> ExtOrdinal:
        if not a:
            return ZERO
        high, tail = self._split_tail(a)
        if tail:
            return self.kappa(a)  # singleton component (successor-step)
        beta = self._power_sub_index(a)
        if beta == a:
            # self-referential: a is an epsilon number above rho
            if self.assume_sequel and a == self.eps_star:
                k = self.kappa(a)
                assert is_determined(k)
                return mul(k, _OMEGA_PLUS_ONE)
            return UNDETERMINED
        k = self.kappa(a)
        m = self.max1_kappa(beta)
        if is_determined(k) and is_determined(m):
            return add(k, m)
        return UNDETERMINED

    def _power_sub_index(self, a: Ordinal) -> Ordinal:
        """The exponent b with a = rho*(g + w^b), i.e. the last exponent of
        the quotient of `a` by rho."""
        q = rho_quotient(a, self.rho)
        return q.terms[-1][0]

    def max1_kappa_lb(self, a: Ordinal) -> Ordinal:
        v = self.max1_kappa(a)
        if is_determined(v):
            return v
        cached = self._m1k_lb.get(a)
        if cached is not None:
            return cached
        high, tail = self._split_tail(a)
        if tail:
            out = self.kappa_lb(a)
        else:
            beta = self._power_sub_index(a)
            if beta == a:
                out = mul(self.kappa_lb(a), OMEGA)  # self-equation bound
            else:
                out = add(self.kappa_lb(a), self.max1_kappa_lb(beta))
        self._m1k_lb[a] = out
        return out

    def max1_lower_bound(self, a: Ordinal) -> Ordinal:
        """Certified lower bound kappa(a)*w for the top of an epsilon
        component; requires a to be an epsilon number above rho."""
        if not self._is_eps_above_rho(a):
            raise NotEpsilon(f"{format_ordinal(a)} is not an epsilon number above rho")
        k = self.kappa(a)
        assert is_determined(k)
        return mul(k, OMEGA)

    def component(self, a: Ordinal) -> ComponentInfo:
        k = self.kappa(a)
        if not is_determined(k):
            raise UndeterminedValue(f"kappa({format_ordinal(a)}) is undetermined")
        return ComponentInfo(a, k, self.max1_kappa(a), self.max1_kappa_lb(a))

    # -- index: invert kappa ---------------------------------------------------

    def index(self, b: Ordinal) -> ExtOrdinal:
        """The unique a with kappa(a) <= b <= top(a)."""
        v = self._index.get(b)
        if v is None:
            v = self._index_compute(b)
            self._index[b] = v
        return v

    def _index_compute(self, b: Ordinal) -> ExtOrdinal:
        high, tail = self._split_tail(b)
        if not high:
            return b  # below rho*w every value is its own singleton component
        d, c = b.terms[0]
        from .ordinals import _make
        rest = _make(b.terms[1:])
        head_val = omega_pow(d)
        if self.eps_star is None or head_val < self.eps_star:
            beta = sub_left(self.r, d)
            width = self.max1_kappa(beta)
            assert is_determined(width)
            anchor = _make(((d, c),))
            if rest <= width:
                return anchor
            v = sub_left(width, rest)
            sub = self.index(v)
            return add(anchor, sub) if is_determined(sub) else UNDETERMINED
        if head_val == self.eps_star:
            # the component of the least epsilon holds everything up to at
            # least eps*w (lower-bound rule), covering all eps*c + rest
            return self.eps_star
        if not self.assume_sequel:
            return UNDETERMINED
        top = self.max1_kappa(self.eps_star)
        assert is_determined(top)
        if b <= top:
            return self.eps_star
        v = sub_left(top, b)
        if v == b:
            return UNDETERMINED  # past the computable translate
        sub = self.index(v)
        return add(self.eps_star, sub) if is_determined(sub) else UNDETERMINED

    # -- max1 of an arbitrary value -----------------------------------------------

    def max1_info(self, b: Ordinal) -> Max1Info:
        v = self._max1.get(b)
        if v is None:
            v = self._max1_compute(b)
            self._max1[b] = v
        return v

    def max1(self, b: Ordinal) -> ExtOrdinal:
        return self.max1_info(b).value

    def _max1_compute(self, b: Ordinal) -> Max1Info:
        if not is_limit_multiple(b, self.rho):
            return Max1Info(b, b, ("not-limit-multiple",))
        j = self.index(b)
        if not is_determined(j):
            return Max1Info(UNDETERMINED, b, ("component-undetermined",))
        kj = self.kappa(j)
        assert is_determined(kj)
        if kj == b:
            return Max1Info(self.max1_kappa(j), self.max1_kappa_lb(j),
                            ("component-top",))
        cap = self.max1_kappa(j)
        if self._is_eps_above_rho(j):
            mu = rho_quotient(b, j)
            base, x = rho_split(b, j)
            if x:
                sub = self.max1_info(x)
                val = add(base, sub.value) if is_determined(sub.value) else UNDETERMINED
                lb = add(base, sub.lower_bound)
                return Max1Info(val, lb, ("window-translate",) + sub.rules)
            if is_determined(cap) and b == cap:
                return Max1Info(b, b, ("component-top-point",))
            if mu <= OMEGA:
                return Max1Info(cap, self.max1_kappa_lb(j),
                                ("second-order-point-top",))
            return Max1Info(UNDETERMINED, b, ("beyond-second-order-frontier",))
        delta = sub_left(kj, b)
        sub = self.max1_info(delta)
        lb = add(kj, sub.lower_bound)
        if is_determined(sub.value):
            val: ExtOrdinal = add(kj, sub.value)
            if is_determined(cap) and cap < val:
                val = cap  # safety cap; unreachable when the laws hold
        else:
            val = UNDETERMINED
        return Max1Info(val, lb, ("interior-translate",) + sub.rules)

    # -- the first-order decision -----------------------------------------------

    def le1(self, b1: Ordinal, b2: Ordinal) -> Verdict:
        c = compare(b1, b2)
        if c > 0:
            return false("order")
        if c == 0:
            return true("reflexive")
        info = self.max1_info(b1)
        if is_determined(info.value):
            if b2 <= info.value:
                return Verdict(Truth.TRUE, ("within-interval",) + info.rules)
            return Verdict(Truth.FALSE, ("beyond-interval",) + info.rules)
        if b2 <= info.lower_bound:
            return Verdict(Truth.TRUE, ("epsilon-lower-bound",) + info.rules)
        j1, j2 = self.index(b1), self.index(b2)
        if is_determined(j1) and is_determined(j2) and j1 != j2:
            return false("component-separation")
        return Verdict(Truth.UNDETERMINED, ("top-undetermined",) + info.rules)

    # -- translation witnesses ------------------------------------------------------

    def frt_iso(self, a: Ordinal, b: Ordinal, x: Ordinal) -> Ordinal:
        """Image of x under the shift that witnesses component recurrence:
        component b maps onto component a+b by t -> top(a) + t."""
        if not b:
            raise XNotInComponent("b must be positive")
        m_a = self.max1_kappa(a)
        if not is_determined(m_a):
            raise UndeterminedValue(
                f"top of component {format_ordinal(a)} is undetermined")
        kb = self.kappa(b)
        if not is_determined(kb):
            raise UndeterminedValue(
                f"kappa({format_ordinal(b)}) is undetermined")
        if x < kb:
            raise XNotInComponent(
                f"{format_ordinal(x)} is below kappa({format_ordinal(b)})")
        top = self.max1_kappa(b)
        if is_determined(top):
            if x > top:
                raise XNotInComponent(
                    f"{format_ordinal(x)} is above the top of component "
                    f"{format_ordinal(b)}")
        elif x > self.max1_kappa_lb(b):
            raise UndeterminedValue(
                f"membership of {format_ordinal(x)} in component "
                f"{format_ordinal(b)} is undetermined")
        return add(m_a, x)

    def msl_translate(self, x: Ordinal, gamma: Ordinal,
                      source_base: Ordinal, target_base: Ordinal) -> Ordinal:
        """Translate x from [source, source+gamma] to [target, target+gamma].

        Divisible bases use the parallel-segment form (requiring the width
        hypotheses); a base equal to 1 against a non-divisible base uses the
        initial-segment form.  Hypothesis failures raise NotApplicable with
        the hypothesis named."""
        eta = try_sub_left(source_base, x)
        if eta is None or eta > gamma:
            raise NotApplicable("x outside the source segment")
        s_div = divides(self.rho, source_base)
        t_div = divides(self.rho, target_base)
        if s_div and t_div:
            self._require_no_escape(source_base, gamma)
            self._require_no_escape(target_base, gamma)
            d1 = self._width_above(source_base)
            d2 = self._width_above(target_base)
            if not self._width_condition(gamma, d1, d2):
                raise NotApplicable(
                    "width hypothesis: need gamma <= both widths or equal widths")
            return add(target_base, eta)
        if s_div != t_div:
            raise NotApplicable("bases must be both divisible or both not")
        # both non-divisible: compose two initial-segment translations
        for base in (source_base, target_base):
            self._require_no_escape(base, gamma)
        return add(target_base, eta)

    def _width_above(self, base: Ordinal):
        """(exact_or_None, lower_bound) for max1(base) - base."""
        info = self.max1_info(base)
        if is_determined(info.value):
            d = sub_left(base, info.value)
            return d, d
        return None, sub_left(base, max(info.lower_bound, base))

    def _width_condition(self, gamma, d1, d2) -> bool:
        e1, lb1 = d1
        e2, lb2 = d2
        if e1 is not None and e2 is not None:
            return (gamma <= e1 and gamma <= e2) or e1 == e2
        return gamma <= lb1 and gamma <= lb2

    def _require_no_escape(self, base: Ordinal, gamma: Ordinal):
        t = self.no_second_order_escape(base, gamma)
        if t is Truth.FALSE:
            raise NotApplicable(
                f"second-order link from below {format_ordinal(base)} into the range")
        if t is Truth.UNDETERMINED:
            raise UndeterminedValue(
                f"second-order escape at {format_ordinal(base)} undetermined")

    def no_second_order_escape(self, base: Ordinal, gamma: Ordinal) -> Truth:
        """Whether no point <= base relates second-order into
        (base, base+gamma].  Links require an epsilon component and a
        divisible target that is not second-order minimal; in the
        determined region every such multiple is minimal."""
        end = add(base, gamma)
        if self.eps_star is None or end < self.eps_star:
            return Truth.TRUE
        for k in range(self.epsilon_depth):
            atom = epsilon(k)
            if atom <= self.rho or atom > end:
                continue
            # multiples of the epsilon inside (base, base+gamma]
            q_end = rho_quotient(end, atom)
            if q_end > OMEGA:
                return Truth.UNDETERMINED
        return Truth.TRUE
