"""Exact ordinal arithmetic in Cantor normal form with epsilon-number atoms.

An ordinal is a finite sum  w^e1*c1 + ... + w^en*cn  with strictly decreasing
exponents and positive integer coefficients.  Exponents are themselves
ordinals; the fixed points w^e = e of the base-omega power are available as
primitive atoms e0, e1, ... so that every ordinal below eps_K is representable
when atoms e0..e_{K-1} are admitted.

Values are immutable, interned and totally ordered; equality is structural
(and, thanks to interning, effectively identity), so they are safe as dict
keys and across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional


class OrdinalError(Exception):
    """Base class for ordinal-algebra errors."""


class BoundExceeded(OrdinalError):
    """An epsilon atom beyond the configured depth was requested."""


class ZeroArgument(OrdinalError):
    """Operation undefined at zero."""


class OrdinalSyntaxError(OrdinalError):
    """Malformed ordinal text; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class Ordinal:
    """A canonical-form ordinal.  Do not instantiate directly; use the
    module constructors (`natural`, `omega_pow`, `epsilon`, `parse`) or
    arithmetic.  Canonical form is enforced at construction, so equal
    ordinals are the same object."""

    __slots__ = ("_terms", "_eps", "_hash")

    _terms: tuple  # tuple[(Ordinal, int), ...], exponents strictly decreasing
    _eps: int      # epsilon-atom index, or -1

    def __new__(cls, *a, **k):  # pragma: no cover - guard against misuse
        raise TypeError("use the module-level ordinal constructors")

    # -- comparisons ----------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Ordinal):
            return NotImplemented
        return _cmp(self, other) == 0

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        return _cmp(self, other) < 0

    def __le__(self, other):
        return _cmp(self, other) <= 0

    def __gt__(self, other):
        return _cmp(self, other) > 0

    def __ge__(self, other):
        return _cmp(self, other) >= 0

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- arithmetic sugar ------------------------------------------------

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)

    # -- structure accessors ----------------------------------------------

    @property
    def terms(self) -> tuple:
        """CNF terms as (exponent, coefficient) pairs, exponents decreasing."""
        return self._terms

    @property
    def is_epsilon_atom(self) -> bool:
        return self._eps >= 0

    @property
    def epsilon_index(self) -> int:
        """Index k of the atom e_k, or -1 for non-atoms."""
        return self._eps

    def degree(self) -> "Ordinal":
        """Leading exponent; undefined at zero."""
        if not self._terms:
            raise ZeroArgument("degree of 0")
        return self._terms[0][0]


def _instance(terms: tuple, eps: int, h: int) -> Ordinal:
    o = object.__new__(Ordinal)
    o._terms = terms
    o._eps = eps
    o._hash = h
    return o


_INTERN: dict = {}


def _make(terms: tuple) -> Ordinal:
    """Intern a canonical term tuple.  Callers must guarantee canonicity
    (strictly decreasing exponents, coefficients >= 1)."""
    if not terms:
        return ZERO
    if len(terms) == 1 and terms[0][1] == 1 and terms[0][0]._eps >= 0:
        return terms[0][0]  # w^e_k collapses to the atom e_k
    key = terms
    o = _INTERN.get(key)
    if o is None:
        h = hash((17, tuple((e._hash, c) for e, c in terms)))
        o = _instance(terms, -1, h)
        _INTERN[key] = o
    return o


def _cmp(a: Ordinal, b: Ordinal) -> int:
    if a is b:
        return 0
    if a._eps >= 0 and b._eps >= 0:
        return -1 if a._eps < b._eps else 1
    ta, tb = a._terms, b._terms
    for (ea, ca), (eb, cb) in zip(ta, tb):
        c = _cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(ta) == len(tb):
        return 0
    return -1 if len(ta) < len(tb) else 1


def compare(a: Ordinal, b: Ordinal) -> int:
    """Total order: negative, zero or positive as a <, =, > b."""
    return _cmp(a, b)


# -- constants and constructors -----------------------------------------

ZERO = _instance((), -1, hash((17, ())))
_INTERN[()] = ZERO

ONE = _make(((ZERO, 1),))
OMEGA = _make(((ONE, 1),))

_EPS_CACHE: dict = {}


def epsilon(k: int, *, max_depth: Optional[int] = None) -> Ordinal:
    """The k-th epsilon atom (least fixed points of a -> w^a).  When
    `max_depth` is given, indices k >= max_depth raise BoundExceeded."""
    if k < 0:
        raise ValueError("epsilon index must be >= 0")
    if max_depth is not None and k >= max_depth:
        raise BoundExceeded(f"epsilon atom e{k} exceeds depth {max_depth}")
    o = _EPS_CACHE.get(k)
    if o is None:
        o = _instance((), k, hash(("eps", k)))
        o._terms = ((o, 1),)
        _EPS_CACHE[k] = o
        _INTERN[o._terms] = o
    return o


def natural(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    if n == 0:
        return ZERO
    return _make(((ZERO, n),))


def _coerce(x) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int):
        return natural(x)
    raise TypeError(f"cannot interpret {x!r} as an ordinal")


# -- arithmetic ----------------------------------------------------------

def add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal sum.  Terms of `a` below the degree of `b` are absorbed."""
    if not b._terms:
        return a
    if not a._terms:
        return b
    eb = b._terms[0][0]
    ta = a._terms
    i = len(ta)
    while i > 0 and _cmp(ta[i - 1][0], eb) < 0:
        i -= 1
    if i > 0 and _cmp(ta[i - 1][0], eb) == 0:
        merged = (eb, ta[i - 1][1] + b._terms[0][1])
        return _make(ta[: i - 1] + (merged,) + b._terms[1:])
    return _make(ta[:i] + b._terms)


def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal product (left-distributes over the CNF of `b`)."""
    if not a._terms or not b._terms:
        return ZERO
    da = a._terms[0][0]
    out = ZERO
    for e, c in b._terms:
        if e is ZERO or not e._terms:
            part = _make(((da, a._terms[0][1] * c),) + a._terms[1:])
        else:
            part = _make(((add(da, e), c),))
        out = add(out, part)
    return out


def omega_pow(a: Ordinal) -> Ordinal:
    """w^a, collapsing epsilon fixed points to their atoms."""
    if a._eps >= 0:
        return a
    return _make(((a, 1),))


def try_sub_left(a: Ordinal, b: Ordinal) -> Optional[Ordinal]:
    """The unique x with a + x = b, or None when a > b."""
    if not a._terms:
        return b
    c = _cmp(a, b)
    if c == 0:
        return ZERO
    if c > 0:
        return None
    ta, tb = a._terms, b._terms
    for i in range(min(len(ta), len(tb))):
        (ea, ca), (eb, cb) = ta[i], tb[i]
        ec = _cmp(ea, eb)
        if ec != 0:
            # first difference with a < b forces ea < eb
            return _make(tb[i:])
        if ca != cb:
            return _make(((eb, cb - ca),) + tb[i + 1:])
    return _make(tb[len(ta):])


def sub_left(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique x with a + x = b; requires a <= b."""
    x = try_sub_left(a, b)
    if x is None:
        raise OrdinalError(f"{a} does not left-divide into {b} additively")
    return x


# -- shape classification --------------------------------------------------

class Kind(Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


@dataclass(frozen=True)
class Shape:
    kind: Kind
    is_additively_indecomposable: bool
    is_epsilon: bool


def classify(a: Ordinal) -> Shape:
    if not a._terms:
        return Shape(Kind.ZERO, False, False)
    kind = Kind.SUCCESSOR if not a._terms[-1][0]._terms else Kind.LIMIT
    indec = len(a._terms) == 1 and a._terms[0][1] == 1
    return Shape(kind, indec, a._eps >= 0)


def is_additively_indecomposable(a: Ordinal) -> bool:
    return len(a._terms) == 1 and a._terms[0][1] == 1


def is_limit(a: Ordinal) -> bool:
    return bool(a._terms) and bool(a._terms[-1][0]._terms)


def is_successor(a: Ordinal) -> bool:
    return bool(a._terms) and not a._terms[-1][0]._terms


def as_natural(a: Ordinal) -> Optional[int]:
    """The integer value of a finite ordinal, else None."""
    if not a._terms:
        return 0
    if len(a._terms) == 1 and not a._terms[0][0]._terms:
        return a._terms[0][1]
    return None


def cnf_last_term(a: Ordinal) -> tuple:
    """Split a = prefix + w^e with w^e the final single power.

    The last coefficient is folded into the prefix: w^2*2 + w*3 yields
    (w^2*2 + w*2, 1)."""
    if not a._terms:
        raise ZeroArgument("no last term at 0")
    e, c = a._terms[-1]
    if c > 1:
        prefix = _make(a._terms[:-1] + ((e, c - 1),))
    else:
        prefix = _make(a._terms[:-1])
    return prefix, e


def successor_part(a: Ordinal) -> tuple:
    """Split a = limit_part + n with n the trailing natural."""
    if a._terms and not a._terms[-1][0]._terms:
        n = a._terms[-1][1]
        return _make(a._terms[:-1]), n
    return a, 0


# -- division by an additively indecomposable ordinal ----------------------

def check_rho(rho: Ordinal) -> Ordinal:
    """Validate a rho parameter (must be additively indecomposable)."""
    rho = _coerce(rho)
    if not is_additively_indecomposable(rho):
        raise OrdinalError(f"rho must be additively indecomposable, got {rho}")
    return rho


def rho_split(a: Ordinal, rho: Ordinal) -> tuple:
    """Split a = (rho * d) + eps with eps < rho; returns (rho*d, eps).

    Divisibility by rho is `eps == 0`; the multiple rho*d is returned in
    solved form, see `rho_quotient` for d itself."""
    rho = check_rho(rho)
    r = rho._terms[0][0]
    ta = a._terms
    i = len(ta)
    while i > 0 and _cmp(ta[i - 1][0], r) < 0:
        i -= 1
    return _make(ta[:i]), _make(ta[i:])


def rho_quotient(a: Ordinal, rho: Ordinal) -> Ordinal:
    """The unique d with a = rho*d + rem, rem < rho."""
    rho = check_rho(rho)
    r = rho._terms[0][0]
    high, _ = rho_split(a, rho)
    qterms = tuple((sub_left(r, e), c) for e, c in high._terms)
    return _make(qterms)


def divides(rho: Ordinal, a: Ordinal) -> bool:
    return not rho_split(a, rho)[1]._terms


def is_limit_multiple(a: Ordinal, rho: Ordinal) -> bool:
    """True when a = rho * d for a limit ordinal d."""
    if rho_split(a, rho)[1]._terms:
        return False
    return is_limit(rho_quotient(a, rho))


# -- text form -------------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    """Canonical ASCII form, inverse of `parse`."""
    if not a._terms:
        return "0"
    parts = []
    for e, c in a._terms:
        parts.append(_format_term(e, c))
    return "+".join(parts)


def _format_term(e: Ordinal, c: int) -> str:
    if not e._terms:  # w^0
        return str(c)
    head = _power_str(e)
    if c == 1:
        return head
    return f"{head}*{c}"


def _power_str(e: Ordinal) -> str:
    """String for the value w^e (e > 0, e not an atom)."""
    if e._eps >= 0:
        return f"e{e._eps}"
    if e is ONE:
        return "w"
    return "w^" + _factor_str(e)


def _factor_str(v: Ordinal) -> str:
    """String for a value in exponent/factor position: bare when the
    grammar's `factor := atom | nat` covers it, else parenthesized."""
    if v._eps >= 0:
        return f"e{v._eps}"
    n = as_natural(v)
    if n is not None:
        return str(n)
    if len(v._terms) == 1 and v._terms[0][1] == 1:
        return _power_str(v._terms[0][0])
    return "(" + format_ordinal(v) + ")"


class _Parser:
    def __init__(self, text: str, epsilon_depth: int):
        self.text = text
        self.pos = 0
        self.depth = epsilon_depth

    def error(self, msg: str):
        raise OrdinalSyntaxError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a number")
        return int(self.text[start:self.pos])

    def ordinal(self) -> Ordinal:
        total = self.term()
        while self.peek() == "+":
            self.eat("+")
            total = add(total, self.term())
        return total

    def term(self) -> Ordinal:
        ch = self.peek()
        if ch.isdigit():
            return natural(self.nat())
        base = self.atom()
        if self.peek() == "*":
            self.eat("*")
            n = self.nat()
            if n == 0:
                return ZERO
            return mul(base, natural(n))
        return base

    def atom(self) -> Ordinal:
        ch = self.peek()
        if ch == "w":
            self.pos += 1
            if self.peek() == "^":
                self.eat("^")
                return omega_pow(self.factor())
            return OMEGA
        if ch == "e":
            self.pos += 1
            k = self.nat()
            try:
                return epsilon(k, max_depth=self.depth)
            except BoundExceeded:
                raise BoundExceeded(
                    f"epsilon atom e{k} exceeds configured depth {self.depth}")
        self.error("expected 'w', 'e<k>' or a number")

    def factor(self) -> Ordinal:
        ch = self.peek()
        if ch == "(":
            self.eat("(")
            o = self.ordinal()
            self.eat(")")
            return o
        if ch.isdigit():
            return natural(self.nat())
        return self.atom()


def parse(text: str, *, epsilon_depth: int = 1) -> Ordinal:
    """Parse the ASCII grammar `term ('+' term)*`, terms `nat | atom ('*' nat)?`,
    atoms `w | w^factor | e<k>`.  The result is canonical even when the
    input is not (e.g. "w+w" parses to w*2)."""
    p = _Parser(text, epsilon_depth)
    o = p.ordinal()
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing input")
    return o


def iter_below(limit: int) -> Iterator[Ordinal]:
    """The naturals 0..limit-1 as ordinals (test helper)."""
    for n in range(limit):
        yield natural(n)
