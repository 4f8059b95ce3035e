"""Homogeneous forms over the integers and the operations built on them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import mpoly
from .errors import (
    ArityMismatch,
    DegreeMismatch,
    InhomogeneousError,
    NotDivisible,
    RingMismatch,
    ZeroFormError,
)

Exp = Tuple[int, ...]


@dataclass(frozen=True)
class Ring:
    """Coordinate ring of P^N: ``N + 1`` named variables."""

    var_names: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.var_names)
        object.__setattr__(self, "var_names", names)
        if len(names) < 2:
            raise ValueError("a projective coordinate ring needs at least two variables")
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be distinct: {names}")

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    @property
    def dim(self) -> int:
        """Dimension N of the projective space."""
        return len(self.var_names) - 1

    def var(self, i: int) -> "HomogeneousForm":
        e = [0] * self.num_vars
        e[i] = 1
        return HomogeneousForm(self, {tuple(e): 1})

    def gens(self) -> List["HomogeneousForm"]:
        return [self.var(i) for i in range(self.num_vars)]

    def one(self) -> "HomogeneousForm":
        return HomogeneousForm(self, {(0,) * self.num_vars: 1})

    def parse(self, text: str) -> "HomogeneousForm":
        from .parsing import parse_form

        return parse_form(text, self)


def grevlex_key(exp: Exp) -> Tuple:
    """Sort key; larger key means larger in graded reverse lexicographic order."""
    return (sum(exp),) + tuple(-e for e in reversed(exp))


class HomogeneousForm:
    """Immutable sparse homogeneous polynomial with integer coefficients."""

    __slots__ = ("ring", "_terms", "degree", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exp, int]):
        clean: Dict[Exp, int] = {}
        n = ring.num_vars
        for e, c in terms.items():
            e = tuple(int(k) for k in e)
            if len(e) != n:
                raise ArityMismatch(f"exponent vector {e} has length != {n}")
            if min(e) < 0:
                raise ValueError(f"negative exponent in {e}")
            c = int(c)
            if c:
                clean[e] = c
        degrees = {sum(e) for e in clean}
        if len(degrees) > 1:
            raise InhomogeneousError(f"mixed degrees {sorted(degrees)}")
        self.ring = ring
        self._terms = clean
        self.degree: Optional[int] = degrees.pop() if degrees else None
        self._hash = None

    # -- basic protocol ----------------------------------------------------
    @property
    def terms(self) -> Dict[Exp, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return self.degree == 0

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"HomogeneousForm({self})"

    def __str__(self) -> str:
        return canonical_str(self)

    def __mul__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        return multiply(self, other)

    def __pow__(self, k: int) -> "HomogeneousForm":
        return HomogeneousForm(self.ring, mpoly.power(self._terms, k, self.ring.num_vars))

    def __neg__(self) -> "HomogeneousForm":
        return HomogeneousForm(self.ring, mpoly.neg(self._terms))

    def __add__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        _same_ring(self, other)
        return HomogeneousForm(self.ring, mpoly.add(self._terms, other._terms))

    def __sub__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        _same_ring(self, other)
        return HomogeneousForm(self.ring, mpoly.sub(self._terms, other._terms))

    def scale(self, c: int) -> "HomogeneousForm":
        return HomogeneousForm(self.ring, mpoly.scale(self._terms, c))

    # -- normalization -----------------------------------------------------
    def content(self) -> int:
        """Signed content: ``self == content * primitive_part``."""
        return mpoly.primitive(self._terms)[0]

    def primitive_part(self) -> "HomogeneousForm":
        return HomogeneousForm(self.ring, mpoly.primitive(self._terms)[1])

    def is_primitive(self) -> bool:
        return self.content() == 1

    def derivative(self, i: int) -> "HomogeneousForm":
        return HomogeneousForm(self.ring, mpoly.derivative(self._terms, i))

    def variables(self) -> List[int]:
        return mpoly.active_vars(self._terms)

    def sorted_terms(self) -> List[Tuple[Exp, int]]:
        return sorted(self._terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def sort_key(self) -> Tuple:
        """Total order on forms: by degree, then term by term in grevlex."""
        return (self.degree if self.degree is not None else -1,
                tuple((tuple(-k for k in grevlex_key(e)), c) for e, c in self.sorted_terms()))

    def require_nonzero(self) -> "HomogeneousForm":
        if self.is_zero():
            raise ZeroFormError("the zero form cannot define a divisor")
        return self

    def __call__(self, *coords) -> int:
        return evaluate(self, coords[0] if len(coords) == 1 else coords)


def _same_ring(a: HomogeneousForm, b: HomogeneousForm) -> None:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring.var_names} vs {b.ring.var_names}")


def _monomial_str(exp: Exp, names: Sequence[str]) -> str:
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def canonical_str(form: HomogeneousForm) -> str:
    """Canonical text: grevlex term order, ``^`` powers, ``*`` products, no spaces."""
    if form.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(form.sorted_terms()):
        mono = _monomial_str(e, form.ring.var_names)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("-" if c < 0 else "+") + body)
    return "".join(out)


# -- operations -------------------------------------------------------------

def multiply(a: HomogeneousForm, b: HomogeneousForm) -> HomogeneousForm:
    _same_ring(a, b)
    return HomogeneousForm(a.ring, mpoly.mul(a._terms, b._terms))


def compose(form: HomogeneousForm, subs: Sequence[HomogeneousForm]) -> HomogeneousForm:
    """Substitute ``subs[i]`` for the i-th variable of ``form`` and expand."""
    form.require_nonzero()
    if len(subs) != form.ring.num_vars:
        raise ArityMismatch(f"expected {form.ring.num_vars} substitutions, got {len(subs)}")
    ring = subs[0].ring
    degs = {s.degree for s in subs}
    if len(degs) != 1 or None in degs:
        raise DegreeMismatch(f"substitutions must share one degree, got {sorted(map(str, degs))}")
    for s in subs:
        _same_ring(subs[0], s)
    n = ring.num_vars
    cache: Dict[Tuple[int, int], mpoly.Poly] = {}

    def pw(i: int, k: int) -> mpoly.Poly:
        key = (i, k)
        if key not in cache:
            if k == 0:
                cache[key] = mpoly.const(1, n)
            elif k == 1:
                cache[key] = subs[i]._terms
            else:
                half = pw(i, k // 2)
                sq = mpoly.mul(half, half)
                cache[key] = mpoly.mul(sq, subs[i]._terms) if k % 2 else sq
        return cache[key]

    total: mpoly.Poly = {}
    for e, c in form._terms.items():
        t = mpoly.const(c, n)
        for i, k in enumerate(e):
            if k:
                t = mpoly.mul(t, pw(i, k))
        total = mpoly.add(total, t)
    return HomogeneousForm(ring, total)


def exact_divide(a: HomogeneousForm, b: HomogeneousForm) -> HomogeneousForm:
    """Return ``q`` with ``b*q == a`` exactly; raise :class:`NotDivisible` otherwise.

    Quotients are taken over the integers, so ``b`` with a nontrivial content
    only divides ``a`` when the content carries over.
    """
    _same_ring(a, b)
    a.require_nonzero()
    b.require_nonzero()
    if b.degree > a.degree:
        raise NotDivisible(f"{b} does not divide {a}")
    q = mpoly.divexact(a._terms, b._terms)
    if q is None:
        raise NotDivisible(f"{b} does not divide {a}")
    return HomogeneousForm(a.ring, q)


def try_divide(a: HomogeneousForm, b: HomogeneousForm) -> Optional[HomogeneousForm]:
    try:
        return exact_divide(a, b)
    except NotDivisible:
        return None


def gcd(a: HomogeneousForm, b: HomogeneousForm) -> HomogeneousForm:
    """Primitive GCD with positive lex-leading coefficient (``1`` when coprime)."""
    _same_ring(a, b)
    a.require_nonzero()
    b.require_nonzero()
    return HomogeneousForm(a.ring, mpoly.gcd(a._terms, b._terms))


def evaluate(form: HomogeneousForm, coords: Sequence[int]) -> int:
    if len(coords) != form.ring.num_vars:
        raise ArityMismatch(f"expected {form.ring.num_vars} coordinates, got {len(coords)}")
    return mpoly.evaluate(form._terms, coords)


def evaluate_fraction(form: HomogeneousForm, coords: Sequence[Fraction]) -> Fraction:
    if len(coords) != form.ring.num_vars:
        raise ArityMismatch(f"expected {form.ring.num_vars} coordinates, got {len(coords)}")
    return sum((Fraction(c) * _mono_value(e, coords) for e, c in form._terms.items()), Fraction(0))


def _mono_value(e: Exp, coords) -> Fraction:
    v = Fraction(1)
    for x, k in zip(coords, e):
        if k:
            v *= Fraction(x) ** k
    return v


# -- squarefree decomposition ----------------------------------------------

def _yun(p: mpoly.Poly, k: int) -> List[Tuple[mpoly.Poly, int]]:
    """Yun's algorithm in variable ``k`` for ``p`` primitive w.r.t. ``k``."""
    out = []
    b = mpoly.derivative(p, k)
    a0 = mpoly.gcd(p, b)
    c = mpoly.divexact(p, a0)
    d = mpoly.sub(mpoly.divexact(b, a0), mpoly.derivative(c, k))
    i = 1
    while not mpoly.is_constant(c):
        a = mpoly.gcd(c, d) if d else mpoly.primitive(c)[1]
        if not mpoly.is_constant(a):
            out.append((a, i))
        c = mpoly.divexact(c, a)
        d = mpoly.sub(mpoly.divexact(d, a), mpoly.derivative(c, k))
        i += 1
    return out


def _sqf_rec(p: mpoly.Poly) -> List[Tuple[mpoly.Poly, int]]:
    if mpoly.is_constant(p):
        return []
    k = mpoly.active_vars(p)[-1]
    u = mpoly.to_univariate(p, k)
    cont = mpoly._coeff_gcd(u)
    pp = mpoly.divexact(p, cont)
    return _yun(pp, k) + _sqf_rec(cont)


def squarefree_decomposition(form: HomogeneousForm) -> List[Tuple[HomogeneousForm, int]]:
    """Squarefree decomposition ``form = c * prod(G_j ** e_j)``.

    The ``G_j`` are primitive, squarefree and pairwise coprime, and the
    exponents are strictly increasing.  The rational constant ``c`` is not
    returned; :func:`squarefree_unit` recovers it.
    """
    form.require_nonzero()
    if form.degree < 1:
        raise ValueError("squarefree decomposition needs a form of positive degree")
    ring = form.ring
    n = ring.num_vars
    _, p = mpoly.primitive(form._terms)
    pieces: List[Tuple[mpoly.Poly, int]] = []
    mono = mpoly.min_exponents(p)
    for i, k in enumerate(mono):
        if k:
            e = [0] * n
            e[i] = 1
            pieces.append(({tuple(e): 1}, k))
    p = mpoly.shift_down(p, mono)
    pieces.extend(_sqf_rec(p))
    grouped: Dict[int, mpoly.Poly] = {}
    for g, e in pieces:
        grouped[e] = mpoly.mul(grouped[e], g) if e in grouped else g
    return [(HomogeneousForm(ring, mpoly.primitive(grouped[e])[1]), e) for e in sorted(grouped)]


def squarefree_unit(form: HomogeneousForm, decomposition: Iterable[Tuple[HomogeneousForm, int]]) -> Fraction:
    prod = form.ring.one()
    for g, e in decomposition:
        prod = prod * g ** e
    q = exact_divide(form, prod)
    assert q.is_constant()
    return Fraction(q.terms[(0,) * form.ring.num_vars])


def is_squarefree(form: HomogeneousForm) -> bool:
    return all(e == 1 for _, e in squarefree_decomposition(form))
