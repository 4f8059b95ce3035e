"""Regular self-maps of P^N: morphism certificates, iteration, orbits."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from math import comb
from typing import List, Optional, Sequence, Tuple

from .errors import ArityMismatch, ComputationError, DegreeMismatch, NotCertified, OverflowGuard, SizeBudgetExceeded
from .forms import HomogeneousForm, Ring, compose, evaluate, gcd
from .intersect import EmptinessResult, empty_common_zero
from .projective import ProjPoint, normalize

DEFAULT_BIT_BUDGET = 1 << 20
DEFAULT_TERM_BUDGET = 2_000_000


class DegreeOneWarning(UserWarning):
    """Dynamical degree 1: the orbit theorem needs degree > 1."""


@dataclass(frozen=True)
class MorphismCertificate:
    certified: bool
    degree_bound: int
    rank: int
    target_dim: int

    def to_json(self) -> dict:
        return {
            "certified": self.certified,
            "macaulay_degree": self.degree_bound,
            "rank": self.rank,
            "target_dim": self.target_dim,
        }


@dataclass(frozen=True)
class SelfMap:
    """``[F_0 : ... : F_N]`` with forms of a common degree and no common factor."""

    components: Tuple[HomogeneousForm, ...]
    certificate: Optional[MorphismCertificate] = field(default=None, compare=False)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ArityMismatch("a self-map needs components")
        ring = comps[0].ring
        if len(comps) != ring.num_vars:
            raise ArityMismatch(f"P^{ring.dim} needs {ring.num_vars} components, got {len(comps)}")
        for c in comps:
            c.require_nonzero()
            if c.ring != ring:
                raise DegreeMismatch("components live in different rings")
        if len({c.degree for c in comps}) != 1:
            raise DegreeMismatch(f"component degrees differ: {[c.degree for c in comps]}")
        if comps[0].degree < 1:
            raise DegreeMismatch("components must have positive degree")
        g = comps[0]
        for c in comps[1:]:
            g = gcd(g, c)
            if g.degree == 0:
                break
        if g.degree > 0:
            raise ComputationError(f"components share the factor {g}; remove it first")

    @classmethod
    def parse(cls, ring: Ring, exprs: Sequence[str]) -> "SelfMap":
        return cls(tuple(ring.parse(e) for e in exprs))

    @property
    def ring(self) -> Ring:
        return self.components[0].ring

    @property
    def degree(self) -> int:
        return self.components[0].degree

    @property
    def is_certified(self) -> bool:
        return self.certificate is not None and self.certificate.certified

    def certify(self) -> "SelfMap":
        """Return a copy carrying a morphism certificate, or raise :class:`NotCertified`."""
        cert = check_morphism(self)
        if not cert.certified:
            raise NotCertified(
                f"Macaulay map at degree {cert.degree_bound} has rank {cert.rank} < {cert.target_dim}: "
                "the components have a common zero"
            )
        return replace(self, certificate=cert)

    def __call__(self, x: ProjPoint) -> ProjPoint:
        return apply(self, x)

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.components) + "]"


def identity_map(ring: Ring) -> SelfMap:
    return SelfMap(tuple(ring.gens()))


def check_morphism(f: SelfMap) -> MorphismCertificate:
    """Certify that the components have no common zero over the algebraic closure.

    On failure the certificate records the Macaulay degree at which
    surjectivity failed; no witness point is produced.
    """
    res: EmptinessResult = empty_common_zero(list(f.components), f.ring.dim)
    return MorphismCertificate(res.empty, res.degree_bound, res.rank, res.target_dim)


def predicted_terms(nvars: int, degree: int) -> int:
    return comb(degree + nvars - 1, nvars - 1)


def iterate_symbolic(f: SelfMap, n: int, term_budget: int = DEFAULT_TERM_BUDGET) -> SelfMap:
    """Components of ``f^(n) = f o f^(n-1)`` by substitution."""
    if n < 1:
        raise ValueError("iterate index must be >= 1")
    nvars = f.ring.num_vars
    if predicted_terms(nvars, f.degree ** n) * nvars > term_budget:
        raise OverflowGuard(
            f"iterate {n} has components of degree {f.degree ** n}; "
            f"up to {predicted_terms(nvars, f.degree ** n)} terms each exceeds the budget {term_budget}"
        )
    current = f
    for _ in range(n - 1):
        # f o current: substitute current's components into f's
        current = SelfMap(tuple(compose(c, current.components) for c in f.components),
                          certificate=f.certificate)
    return current


def apply(f: SelfMap, x: ProjPoint) -> ProjPoint:
    vals = [evaluate(c, x.coords) for c in f.components]
    if not any(vals):
        raise ComputationError(f"all components vanish at {x}: not a morphism there")
    return normalize(vals)


@dataclass
class Orbit:
    """Forward orbit ``[x0, f(x0), ..., f^K(x0)]`` with cycle bookkeeping."""

    points: List[ProjPoint]
    repeat_at: Optional[int] = None   # first k with points[k] seen earlier
    repeat_of: Optional[int] = None   # the earlier index

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, k):
        return self.points[k]

    @property
    def cycle_length(self) -> Optional[int]:
        if self.repeat_at is None:
            return None
        return self.repeat_at - self.repeat_of


def orbit(f: SelfMap, x0: ProjPoint, K: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> Orbit:
    """Pointwise orbit with renormalization at every step.

    Once a point repeats the remaining points are filled in from the cycle
    instead of being recomputed.
    """
    if not f.is_certified:
        raise NotCertified("orbit() requires a certified morphism; call f.certify()")
    if K < 0:
        raise ValueError("K must be nonnegative")
    seen = {x0: 0}
    pts = [x0]
    out = Orbit(pts)
    for k in range(1, K + 1):
        if out.repeat_at is not None:
            pts.append(pts[out.repeat_of + (k - out.repeat_of) % out.cycle_length])
            continue
        x = apply(f, pts[-1])
        bits = max(abs(c).bit_length() for c in x.coords)
        if bits > bit_budget:
            raise SizeBudgetExceeded(f"orbit point {k} has {bits}-bit coordinates (budget {bit_budget})")
        pts.append(x)
        if x in seen:
            out.repeat_at, out.repeat_of = k, seen[x]
        else:
            seen[x] = k
    return out


def dynamical_degree(f: SelfMap) -> int:
    """On P^N a morphism pulls O(1) back to O(d), so the dynamical degree is d."""
    if not f.is_certified:
        raise NotCertified("dynamical degree needs a certified morphism")
    if f.degree == 1:
        warnings.warn("dynamical degree is 1; the orbit theorem requires degree > 1", DegreeOneWarning, stacklevel=2)
    return f.degree
