"""Effective divisors on P^N, pullbacks under iterates, reduced properly intersecting parts."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import DegreeMismatch, ParseError, UnverifiedComponent
from .factor import find_linear_factor, linear_factors
from .forms import HomogeneousForm, Ring, compose, squarefree_decomposition, try_divide
from .intersect import DEFAULT_SEED, IntersectionReport, properly_intersect
from .selfmap import SelfMap

ASSERTED = "asserted-by-user"
VERIFIED_LINEAR = "verified-linear"
VERIFIED_LOW_DEGREE = "verified-low-degree"
UNVERIFIED = "unverified"

_STATUS_RANK = {VERIFIED_LINEAR: 3, VERIFIED_LOW_DEGREE: 3, ASSERTED: 2, UNVERIFIED: 1}


def _stronger(a: str, b: str) -> str:
    return a if _STATUS_RANK[a] >= _STATUS_RANK[b] else b


def classify(form: HomogeneousForm, asserted: bool = False) -> str:
    """Irreducibility status of ``form``; ``asserted`` marks user-declared forms."""
    if form.degree == 1:
        return VERIFIED_LINEAR
    if form.degree <= 3:
        # a reducible form of degree <= 3 always has a linear factor
        return UNVERIFIED if find_linear_factor(form) is not None else VERIFIED_LOW_DEGREE
    return ASSERTED if asserted else UNVERIFIED


@dataclass(frozen=True)
class Component:
    form: HomogeneousForm
    multiplicity: int
    status: str

    def __str__(self) -> str:
        return f"({self.form})^{self.multiplicity}"


class Divisor:
    """Formal sum ``sum m_i (F_i = 0)`` of primitive, pairwise non-proportional forms."""

    def __init__(self, components: Iterable, ring: Optional[Ring] = None):
        merged: Dict[HomogeneousForm, Tuple[int, str]] = {}
        for item in components:
            if isinstance(item, Component):
                form, mult, status = item.form, item.multiplicity, item.status
            elif len(item) == 2:
                form, mult = item
                status = classify(form, asserted=True)
            else:
                form, mult, status = item
            form = form.require_nonzero().primitive_part()
            if form.degree == 0:
                continue
            if mult < 0:
                raise ValueError("effective divisors only")
            if mult == 0:
                continue
            if form in merged:
                m0, s0 = merged[form]
                merged[form] = (m0 + mult, _stronger(s0, status))
            else:
                merged[form] = (mult, status)
        if not merged and ring is None:
            raise ValueError("empty divisor needs an explicit ring")
        self.ring = ring if ring is not None else next(iter(merged)).ring
        comps = [Component(f, m, s) for f, (m, s) in merged.items()]
        comps.sort(key=lambda c: c.form.sort_key())
        self.components: Tuple[Component, ...] = tuple(comps)

    def __iter__(self):
        return iter((c.form, c.multiplicity) for c in self.components)

    def __len__(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        return sum(c.multiplicity * c.form.degree for c in self.components)

    @property
    def forms(self) -> List[HomogeneousForm]:
        return [c.form for c in self.components]

    def multiplicity(self, form: HomogeneousForm) -> int:
        form = form.primitive_part()
        for c in self.components:
            if c.form == form:
                return c.multiplicity
        return 0

    def reduced(self) -> "Divisor":
        return Divisor([Component(c.form, 1, c.status) for c in self.components], self.ring)

    def defining_form(self) -> HomogeneousForm:
        out = self.ring.one()
        for c in self.components:
            out = out * c.form ** c.multiplicity
        return out

    def has_unverified(self) -> bool:
        return any(c.status == UNVERIFIED for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.ring == other.ring and [(c.form, c.multiplicity) for c in self.components] == [
            (c.form, c.multiplicity) for c in other.components
        ]

    def __hash__(self) -> int:
        return hash(tuple((c.form, c.multiplicity) for c in self.components))

    def __str__(self) -> str:
        if not self.components:
            return "0"
        return " + ".join(str(c) for c in self.components)

    def __repr__(self) -> str:
        return f"Divisor({self})"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "components": [
                {"form": str(c.form), "degree": c.form.degree, "multiplicity": c.multiplicity, "status": c.status}
                for c in self.components
            ],
            "text": str(self),
        }


def degree(D: Divisor) -> int:
    return D.degree


class FactorBasis:
    """Known irreducible forms used to split pullbacks without general factorization."""

    def __init__(self, forms: Iterable = ()):
        self._forms: Dict[HomogeneousForm, str] = {}
        for item in forms:
            if isinstance(item, HomogeneousForm):
                self.add(item)
            else:
                self.add(*item)

    def add(self, form: HomogeneousForm, status: Optional[str] = None) -> None:
        form = form.require_nonzero().primitive_part()
        if form.degree == 0:
            return
        if status is None:
            found, rest = linear_factors(form)
            if found and form.degree > 1:
                raise ValueError(f"basis form {form} has the linear factor {found[0][0]}")
            status = classify(form, asserted=True)
            if status == UNVERIFIED:
                raise ValueError(f"basis form {form} is reducible")
        if form in self._forms:
            status = _stronger(self._forms[form], status)
        self._forms[form] = status

    def __contains__(self, form: HomogeneousForm) -> bool:
        return form.primitive_part() in self._forms

    def __iter__(self):
        return iter(sorted(self._forms, key=HomogeneousForm.sort_key))

    def __len__(self) -> int:
        return len(self._forms)

    def status(self, form: HomogeneousForm) -> str:
        return self._forms[form.primitive_part()]

    def items(self) -> List[Tuple[HomogeneousForm, str]]:
        return [(f, self._forms[f]) for f in self]

    def copy(self) -> "FactorBasis":
        out = FactorBasis()
        out._forms = dict(self._forms)
        return out


def factorize(form: HomogeneousForm, basis: Optional[FactorBasis] = None) -> List[Component]:
    """Split ``form`` into components: basis divisions, then squarefree parts, then linear factors.

    Whatever survives and is neither linear, of degree <= 3, nor in the
    basis is returned with status ``unverified``.
    """
    rest = form.require_nonzero().primitive_part()
    out: List[Component] = []
    if basis is not None:
        for b, status in basis.items():
            if b.degree > rest.degree:
                continue
            e = 0
            while rest.degree >= b.degree:
                q = try_divide(rest, b)
                if q is None:
                    break
                rest, e = q, e + 1
            if e:
                out.append(Component(b, e, status))
            if rest.degree == 0:
                break
    if rest.degree > 0:
        for g, e in squarefree_decomposition(rest):
            lins, leftover = linear_factors(g)
            for ell, k in lins:
                out.append(Component(ell, e * k, VERIFIED_LINEAR))
            if leftover.degree > 0:
                out.append(Component(leftover, e, classify(leftover)))
    return out


def divisor_of_form(form: HomogeneousForm, basis: Optional[FactorBasis] = None) -> Divisor:
    return Divisor(factorize(form, basis), form.ring)


def pullback_once(f: SelfMap, D: Divisor, basis: Optional[FactorBasis] = None) -> Divisor:
    parts: List[Component] = []
    for c in D.components:
        pulled = compose(c.form, f.components)
        for piece in factorize(pulled, basis):
            parts.append(Component(piece.form, piece.multiplicity * c.multiplicity, piece.status))
    out = Divisor(parts, D.ring)
    if out.degree != f.degree * D.degree:
        raise DegreeMismatch(f"pullback degree {out.degree} != {f.degree} * {D.degree}")
    if basis is not None:
        for comp in out.components:
            if comp.status != UNVERIFIED:
                basis.add(comp.form, comp.status)
    return out


def pullback(f: SelfMap, D: Divisor, n: int, basis: Optional[FactorBasis] = None) -> Divisor:
    """``(f^(n))^* D`` computed as ``n`` single-step pullbacks.

    The basis is extended in place with every verified component found.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if basis is None:
        basis = FactorBasis()
    for comp in D.components:
        if comp.status != UNVERIFIED:
            basis.add(comp.form, comp.status)
    current = D
    for _ in range(n):
        current = pullback_once(f, current, basis)
    if current.degree != f.degree ** n * D.degree:
        raise DegreeMismatch("pullback violated the degree law")
    return current


@dataclass
class SelectionReport:
    chosen: Tuple[int, ...]
    candidates: List[Tuple[int, ...]]
    forms: List[HomogeneousForm]
    intersection: Optional[IntersectionReport] = None

    @property
    def max_cardinality(self) -> int:
        return len(self.chosen)

    @property
    def ambiguous(self) -> bool:
        return len(self.candidates) > 1

    def alternatives(self) -> List[List[str]]:
        return [[str(self.forms[i]) for i in cand] for cand in self.candidates if cand != self.chosen]

    def to_json(self) -> dict:
        return {
            "chosen": [str(self.forms[i]) for i in self.chosen],
            "max_cardinality": self.max_cardinality,
            "candidates": [[str(self.forms[i]) for i in cand] for cand in self.candidates],
            "ambiguous": self.ambiguous,
        }


def reduced_pi_part(D: Divisor, N: Optional[int] = None, seed: int = DEFAULT_SEED) -> Tuple[Divisor, SelectionReport]:
    """Multiplicity-one sum over a largest properly intersecting set of components.

    Largest means maximum cardinality; ties go to the larger total degree
    and then to the canonical order of the forms.  All maximum-cardinality
    candidates are listed in the report.
    """
    if D.has_unverified():
        bad = [str(c.form) for c in D.components if c.status == UNVERIFIED]
        raise UnverifiedComponent(f"irreducibility of {', '.join(bad)} is not verified")
    if N is None:
        N = D.ring.dim
    comps = D.components
    forms = [c.form for c in comps]
    reports: Dict[Tuple[int, ...], IntersectionReport] = {}
    for size in range(len(comps), 0, -1):
        found = []
        for subset in itertools.combinations(range(len(comps)), size):
            rep = properly_intersect([forms[i] for i in subset], N, [comps[i].status for i in subset], seed=seed)
            if rep.proper:
                found.append(subset)
                reports[subset] = rep
        if found:
            best = min(found, key=lambda s: (-sum(forms[i].degree for i in s), [forms[i].sort_key() for i in s]))
            reduced = Divisor([Component(forms[i], 1, comps[i].status) for i in best], D.ring)
            return reduced, SelectionReport(best, found, forms, reports[best])
    return Divisor([], D.ring), SelectionReport((), [], forms)


# -- text syntax ------------------------------------------------------------

def _split_top_level(text: str, sep: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_divisor(text: str, ring: Ring, basis: Optional[FactorBasis] = None) -> Divisor:
    """``(z)^1 + (x+y)^2``; user components are factored and asserted irreducible when opaque."""
    body = text.strip()
    if not body:
        raise ParseError("empty divisor")
    comps: List[Component] = []
    for piece in _split_top_level(body, "+"):
        piece = piece.strip()
        m = re.fullmatch(r"\((?P<expr>.*)\)\s*(?:\^\s*(?P<mult>\d+))?", piece)
        if not m:
            raise ParseError(f"divisor term must look like (expr)^k, got {piece!r}")
        form = ring.parse(m.group("expr"))
        mult = int(m.group("mult") or 1)
        for c in factorize(form, basis):
            status = c.status
            if status == UNVERIFIED and c.form == form.primitive_part():
                status = ASSERTED
            comps.append(Component(c.form, c.multiplicity * mult, status))
    return Divisor(comps, ring)
