import random

import pytest

from resemblance.components import (
    NotApplicable, NotEpsilon, RelationEngine, UndeterminedValue,
    XNotInComponent,
)
from resemblance.ordinals import (
    OMEGA as w, ONE, ZERO, add, divides, epsilon, is_additively_indecomposable,
    mul, natural, omega_pow, parse, sub_left,
)
from resemblance.verdicts import UNDETERMINED, Truth, is_determined

e0 = epsilon(0)


def o(s):
    return parse(s)


@pytest.fixture(scope="module")
def eng():
    return RelationEngine(ONE)


@pytest.fixture(scope="module")
def eng_w():
    return RelationEngine(w)


@pytest.fixture(scope="module")
def eng_seq():
    return RelationEngine(ONE, assume_sequel=True)


def random_below_w_w(rng, max_exp=5, max_coeff=6):
    out = ZERO
    for e in sorted(rng.sample(range(max_exp + 1), rng.randrange(1, 4)),
                    reverse=True):
        out = add(out, mul(omega_pow(natural(e)), natural(rng.randrange(1, max_coeff))))
    return out


# -- kappa ------------------------------------------------------------------

def test_kappa_naturals(eng):
    # unfolding the successor-step from kappa(0)=0: kappa(n) = n
    for n in range(50):
        assert eng.kappa(natural(n)) == natural(n)


def test_kappa_small_values(eng):
    assert eng.kappa(w) == w
    assert eng.kappa(o("w+1")) == o("w+2")
    assert eng.kappa(o("w+2")) == o("w+3")
    assert eng.kappa(o("w*2")) == o("w*2")
    assert eng.kappa(o("w*5")) == o("w*5")
    assert eng.kappa(o("w^2")) == o("w^2")
    assert eng.kappa(o("w^2+w")) == o("w^2+w")
    assert eng.kappa(o("w^2+w+1")) == o("w^2+w+2")
    assert eng.kappa(o("w^w")) == o("w^w")
    assert eng.kappa(o("w^w+1")) == o("w^w+w+2")  # past the top w^w+w+1


def test_max1_kappa_values(eng):
    assert eng.max1_kappa(ZERO) == ZERO
    assert eng.max1_kappa(w) == o("w+1")
    assert eng.max1_kappa(o("w+1")) == eng.kappa(o("w+1"))
    assert eng.max1_kappa(o("w*2")) == o("w*2+1")
    assert eng.max1_kappa(o("w^2")) == o("w^2+2")
    assert eng.max1_kappa(o("w^w")) == o("w^w+w+1")
    assert eng.max1_kappa(o("w^3*2+w^2")) == add(eng.kappa(o("w^3*2+w^2")), o("2"))


def test_max1_kappa_at_rho_omega(eng_w):
    # with rho = w the first recurrence level has width one
    assert eng_w.max1_kappa(o("w^2")) == o("w^2+1")
    assert eng_w.kappa(o("w*3")) == o("w*3")
    assert eng_w.max1_kappa(o("w*3")) == o("w*3")  # below rho*w: singleton


def test_kappa_epsilon_fixed_point(eng):
    # continuity over the towers pins kappa at the epsilon atom
    t = w
    for _ in range(5):
        assert eng.kappa(t) == t
        t = omega_pow(t)
    assert eng.kappa(e0) == e0


def test_kappa_undetermined_past_epsilon_without_flag(eng):
    assert eng.kappa(o("e0+1")) is UNDETERMINED
    assert eng.max1_kappa(e0) is UNDETERMINED
    assert eng.max1_kappa_lb(e0) == mul(e0, w)


def test_kappa_with_sequel_flag(eng_seq):
    m = mul(e0, o("w+1"))
    assert eng_seq.max1_kappa(e0) == m
    assert eng_seq.kappa(o("e0+1")) == add(m, ONE)
    assert eng_seq.kappa(o("e0+w")) == add(m, w)
    # kappa(e0*2) = top(e0) + e0
    assert eng_seq.kappa(o("e0*2")) == add(m, e0)
    # successor power above the epsilon: kappa(e0*w) = e0*w^2
    assert eng_seq.kappa(mul(e0, w)) == mul(e0, o("w^2"))


def test_max1_lower_bound(eng):
    assert eng.max1_lower_bound(e0) == mul(e0, w)
    with pytest.raises(NotEpsilon):
        eng.max1_lower_bound(w)


def test_sequel_bound_consistency(eng_seq):
    assert eng_seq.max1_kappa(e0) >= eng_seq.max1_lower_bound(e0)


# -- additivity and recurrence laws ----------------------------------------------

def test_additivity_seeded(eng):
    rng = random.Random(7)
    for _ in range(100):
        a = random_below_w_w(rng)
        b = random_below_w_w(rng)
        if not b:
            continue
        lhs = eng.kappa(add(a, b))
        rhs = add(eng.max1_kappa(a), eng.kappa(b))
        assert lhs == rhs
        lhs = eng.max1_kappa(add(a, b))
        rhs = add(eng.max1_kappa(a), eng.max1_kappa(b))
        assert lhs == rhs


def test_power_recurrence_seeded(eng):
    rng = random.Random(8)
    for _ in range(50):
        b = random_below_w_w(rng, max_exp=3, max_coeff=4)
        p = omega_pow(b)
        assert eng.max1_kappa(p) == add(eng.kappa(p), eng.max1_kappa(b))


def test_kappa_continuity_at_limits(eng):
    rng = random.Random(9)
    checked = 0
    while checked < 50:
        lam = random_below_w_w(rng)
        if not lam or not lam.terms[-1][0]:
            continue
        e, c = lam.terms[-1]
        # fundamental sequence: replace the last power w^e by w^(e-1)*n
        prefix = add(sub_left(omega_pow(e), lam) or ZERO, ZERO)
        # recompute prefix properly: lam = prefix + w^e
        from resemblance.ordinals import cnf_last_term
        prefix, le = cnf_last_term(lam)
        approach = [add(prefix, mul(omega_pow(sub_left(ONE, le)), natural(n)))
                    for n in range(1, 30)]
        kl = eng.kappa(lam)
        ks = [eng.kappa(x) for x in approach]
        assert all(ks[i] < ks[i + 1] for i in range(len(ks) - 1))
        assert all(k < kl for k in ks)
        # the approach closes the gap: last step within one power level
        assert ks[-1] >= add(prefix, mul(omega_pow(sub_left(ONE, le)), natural(25)))
        checked += 1


def test_kappa_strictly_increasing(eng):
    rng = random.Random(10)
    xs = sorted({random_below_w_w(rng) for _ in range(60)})
    ks = [eng.kappa(x) for x in xs]
    for i in range(len(ks) - 1):
        assert ks[i] < ks[i + 1]


def test_divisibility_transfer(eng_w):
    rng = random.Random(11)
    for _ in range(80):
        a = random_below_w_w(rng)
        k = eng_w.kappa(a)
        assert divides(w, a) == divides(w, k)


def test_indecomposability_transfer(eng):
    rng = random.Random(12)
    for _ in range(80):
        a = random_below_w_w(rng)
        if not a:
            continue
        k = eng.kappa(a)
        assert is_additively_indecomposable(a) == is_additively_indecomposable(k)


# -- index ---------------------------------------------------------------------

def test_index_examples(eng):
    for n in range(20):
        assert eng.index(natural(n)) == natural(n)
    assert eng.index(o("w+1")) == w
    assert eng.index(o("w+2")) == o("w+1")
    assert eng.index(o("w*5")) == o("w*5")
    assert eng.index(o("w^2+1")) == o("w^2")
    assert eng.index(o("w^2+2")) == o("w^2")
    assert eng.index(o("w^2+3")) == o("w^2+1")
    assert eng.index(o("w^w+w")) == o("w^w")
    assert eng.index(o("w^w+w+1")) == o("w^w")
    assert eng.index(o("w^w+w+2")) == o("w^w+1")


def test_index_inverts_kappa(eng, eng_w):
    rng = random.Random(13)
    for engine in (eng, eng_w):
        for _ in range(120):
            a = random_below_w_w(rng)
            k = engine.kappa(a)
            assert engine.index(k) == a
            top = engine.max1_kappa(a)
            assert engine.index(top) == a


def test_index_epsilon_component(eng):
    assert eng.index(e0) == e0
    assert eng.index(o("e0*3")) == e0
    assert eng.index(o("e0*5+w^2")) == e0
    assert eng.index(mul(e0, w)) is UNDETERMINED  # past the bound, no flag


def test_index_epsilon_with_flag(eng_seq):
    assert eng_seq.index(mul(e0, w)) == e0
    assert eng_seq.index(mul(e0, o("w+1"))) == e0
    past = add(mul(e0, o("w+1")), ONE)  # first point past the component
    assert eng_seq.index(past) == o("e0+1")


# -- max1 of values ---------------------------------------------------------------

def test_max1_values(eng):
    assert eng.max1(ZERO) == ZERO
    assert eng.max1(o("w+1")) == o("w+1")  # successor: not a limit multiple
    assert eng.max1(w) == o("w+1")
    assert eng.max1(o("w^w+w")) == o("w^w+w+1")
    # w^2+w is past the width-2 component of w^2 and heads its own component,
    # which mirrors the width-1 component of w
    assert eng.index(o("w^2+w")) == o("w^2+w")
    assert eng.max1(o("w^2+w")) == o("w^2+w+1")
    # interior successors are trivial even inside a wide component
    assert eng.max1(o("w^2+1")) == o("w^2+1")


def test_max1_window_translate(eng):
    # inside the epsilon component: e0*3+w has the same reach as w, shifted
    assert eng.max1(o("e0*3+w")) == o("e0*3+w+1")
    assert eng.max1(o("e0*2+w^w")) == o("e0*2+w^w+w+1")


def test_max1_nu_points(eng, eng_seq):
    assert eng.max1(o("e0*2")) is UNDETERMINED
    assert eng.max1_info(o("e0*2")).lower_bound == mul(e0, w)
    assert eng_seq.max1(o("e0*2")) == mul(e0, o("w+1"))
    assert eng_seq.max1(mul(e0, w)) == mul(e0, o("w+1"))
    assert eng_seq.max1(mul(e0, o("w+1"))) == mul(e0, o("w+1"))  # top point


# -- le1 -----------------------------------------------------------------------

def test_le1_examples(eng):
    assert eng.le1(w, o("w+1")).is_true
    assert eng.le1(w, o("w+2")).is_false
    assert eng.le1(o("w+1"), w).is_false
    assert eng.le1(w, w).is_true
    assert eng.le1(e0, o("e0*3")).is_true          # lower-bound rule
    assert eng.le1(e0, mul(e0, w)).is_true         # exactly the bound
    assert eng.le1(e0, add(mul(e0, w), ONE)).is_undetermined
    v = eng.le1(w, o("w+1"))
    assert "within-interval" in v.trace


def test_le1_trace_strings(eng):
    assert str(eng.le1(w, o("w+2"))).startswith("False (trace: ")


def test_le1_component_separation(eng):
    rng = random.Random(14)
    for _ in range(60):
        a = random_below_w_w(rng)
        b = random_below_w_w(rng)
        if eng.index(a) == eng.index(b):
            continue
        lo, hi = (a, b) if a < b else (b, a)
        top = eng.max1(lo)
        if is_determined(top) and hi > top:
            assert eng.le1(lo, hi).is_false


def test_le1_partial_order_and_interval(eng):
    rng = random.Random(15)
    xs = sorted({random_below_w_w(rng, max_exp=3, max_coeff=3) for _ in range(25)})
    for a in xs:
        for b in xs:
            vab = eng.le1(a, b)
            for c in xs:
                if vab.is_true and eng.le1(b, c).is_true:
                    assert eng.le1(a, c).is_true
            if vab.is_true and eng.le1(b, a).is_true:
                assert a == b
        # the set of b with le1(a,b) true is the interval [a, max1(a)]
        top = eng.max1(a)
        assert is_determined(top)
        for b in xs:
            assert eng.le1(a, b).is_true == (a <= b <= top)


def test_le1_respects_order_chain(eng):
    # x <= y <= z and le1(x,z) imply le1(x,y)
    rng = random.Random(16)
    for _ in range(200):
        xs = sorted(random_below_w_w(rng) for _ in range(3))
        x, y, z = xs
        if eng.le1(x, z).is_true:
            assert eng.le1(x, y).is_true


# -- component shift (recurrence witness) ----------------------------------------

def test_frt_iso_examples(eng):
    assert eng.frt_iso(w, w, o("w+1")) == o("w*2+1")
    rng = random.Random(17)
    for _ in range(40):
        a = random_below_w_w(rng)
        b = random_below_w_w(rng)
        if not b:
            continue
        kb = eng.kappa(b)
        assert eng.frt_iso(a, b, kb) == eng.kappa(add(a, b))
        top = eng.max1_kappa(b)
        assert eng.frt_iso(a, b, top) == eng.max1_kappa(add(a, b))


def test_frt_iso_errors(eng):
    with pytest.raises(XNotInComponent):
        eng.frt_iso(w, o("w^2"), o("w^2+5"))  # top of w^2 comp is w^2+2
    with pytest.raises(XNotInComponent):
        eng.frt_iso(w, w, ZERO)


def test_frt_iso_preserves_verdicts(eng):
    a, b = o("w^2*3"), o("w^w")
    members = [o("w^w"), o("w^w+1"), o("w^w+w"), o("w^w+w+1")]
    images = [eng.frt_iso(a, b, x) for x in members]
    for i, x in enumerate(members):
        for j, y in enumerate(members):
            vx = eng.le1(x, y)
            vy = eng.le1(images[i], images[j])
            assert vx.truth == vy.truth


# -- segment translation ------------------------------------------------------------

def test_msl_translate_parallel(eng):
    # both bases divisible, widths 2 and 2; gamma small
    out = eng.msl_translate(o("w^2+3"), natural(5), o("w^2"), o("w^2*2"))
    assert out == o("w^2*2+3")


def test_msl_translate_initial_segment():
    eng = RelationEngine(w)
    out = eng.msl_translate(natural(4), natural(7), ONE, o("w*2+1"))
    assert out == o("w*2+4")


def test_msl_translate_rejections(eng):
    # gamma exceeds both widths and widths differ: w has width 1, w^2 width 2
    with pytest.raises(NotApplicable):
        eng.msl_translate(o("w+1"), o("w^3"), w, o("w^2"))
    with pytest.raises(NotApplicable):
        eng.msl_translate(o("w^2+1"), natural(5), o("w^2"), o("w*2+1"))
    with pytest.raises(NotApplicable):
        eng.msl_translate(natural(9), natural(2), ONE, o("w*2+1"))  # x outside


def test_msl_translate_equal_widths_allows_large_gamma(eng):
    # w and w*2 both have width 1; gamma may exceed it
    out = eng.msl_translate(o("w+1"), o("w^3"), w, o("w*2"))
    assert out == o("w*2+1")
