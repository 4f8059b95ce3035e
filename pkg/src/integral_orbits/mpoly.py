"""Low-level sparse polynomial arithmetic over the integers.

A polynomial is a plain ``dict`` mapping exponent tuples (all of the same
length) to nonzero ``int`` coefficients.  The functions here never mutate
their arguments.  :mod:`integral_orbits.forms` wraps them into the
immutable :class:`~integral_orbits.forms.HomogeneousForm` type.

The GCD is the classical recursive one: view a polynomial as univariate in
its last active variable with coefficients in the remaining ones, split off
the content, and run a subresultant remainder sequence on the primitive
parts.
"""
from __future__ import annotations

from math import gcd as igcd
from typing import Dict, List, Optional, Tuple

Exp = Tuple[int, ...]
Poly = Dict[Exp, int]


def const(c: int, nvars: int) -> Poly:
    return {(0,) * nvars: c} if c else {}


def monomial(exp: Exp, c: int = 1) -> Poly:
    return {tuple(exp): c} if c else {}


def add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def neg(a: Poly) -> Poly:
    return {e: -c for e, c in a.items()}


def sub(a: Poly, b: Poly) -> Poly:
    return add(a, neg(b))


def scale(a: Poly, c: int) -> Poly:
    if c == 0:
        return {}
    return {e: c * v for e, v in a.items()}


_SHIFT = 24
_MASK = (1 << _SHIFT) - 1


def _pack(e: Exp) -> int:
    v = 0
    for k in e:
        v = (v << _SHIFT) | k
    return v


def _unpack(v: int, n: int) -> Exp:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = v & _MASK
        v >>= _SHIFT
    return tuple(out)


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    n = len(next(iter(a)))
    pb = [(_pack(e), c) for e, c in b.items()]
    acc: Dict[int, int] = {}
    get = acc.get
    for ea, ca in a.items():
        va = _pack(ea)
        for vb, cb in pb:
            k = va + vb
            acc[k] = get(k, 0) + ca * cb
    return {_unpack(k, n): c for k, c in acc.items() if c}


def power(a: Poly, k: int, nvars: int) -> Poly:
    result = const(1, nvars)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def mul_monomial(a: Poly, exp: Exp) -> Poly:
    return {tuple(x + y for x, y in zip(e, exp)): c for e, c in a.items()}


def is_constant(a: Poly) -> bool:
    return all(not any(e) for e in a)


def total_degree(a: Poly) -> int:
    return max((sum(e) for e in a), default=-1)


def content(a: Poly) -> int:
    g = 0
    for c in a.values():
        g = igcd(g, c)
        if g == 1:
            break
    return g


def lex_leading(a: Poly) -> Exp:
    return max(a)


def primitive(a: Poly) -> Tuple[int, Poly]:
    """Return ``(c, p)`` with ``a == c*p``, ``p`` primitive with positive lex-leading coefficient."""
    if not a:
        return 0, {}
    c = content(a)
    if a[lex_leading(a)] < 0:
        c = -c
    return c, {e: v // c for e, v in a.items()}


def derivative(a: Poly, k: int) -> Poly:
    out: Poly = {}
    for e, c in a.items():
        if e[k]:
            f = list(e)
            f[k] -= 1
            out[tuple(f)] = c * e[k]
    return out


def evaluate(a: Poly, point) -> int:
    total = 0
    for e, c in a.items():
        t = c
        for x, k in zip(point, e):
            if k:
                t *= x ** k
        total += t
    return total


def min_exponents(a: Poly) -> Exp:
    it = iter(a)
    m = list(next(it))
    for e in it:
        for i, k in enumerate(e):
            if k < m[i]:
                m[i] = k
    return tuple(m)


def shift_down(a: Poly, exp: Exp) -> Poly:
    return {tuple(x - y for x, y in zip(e, exp)): c for e, c in a.items()}


def divexact(a: Poly, b: Poly) -> Optional[Poly]:
    """Exact division over the integers; ``None`` when ``b`` does not divide ``a``.

    Lexicographic multivariate division.  With ``b`` primitive, divisibility
    over the integers and over the rationals coincide (Gauss's lemma).
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lb = max(b)
    cb = b[lb]
    if len(b) == 1:
        out = {}
        for e, c in a.items():
            if c % cb or any(x < y for x, y in zip(e, lb)):
                return None
            out[tuple(x - y for x, y in zip(e, lb))] = c // cb
        return out
    rest = [(e, c) for e, c in b.items() if e != lb]
    r = dict(a)
    q: Poly = {}
    while r:
        lr = max(r)
        cr = r[lr]
        if cr % cb:
            return None
        qe = tuple(x - y for x, y in zip(lr, lb))
        if min(qe) < 0:
            return None
        qc = cr // cb
        q[qe] = qc
        del r[lr]
        for e, c in rest:
            t = tuple(x + y for x, y in zip(e, qe))
            s = r.get(t, 0) - qc * c
            if s:
                r[t] = s
            else:
                r.pop(t, None)
    return q


# -- univariate view --------------------------------------------------------

def active_vars(a: Poly) -> List[int]:
    if not a:
        return []
    n = len(next(iter(a)))
    return [k for k in range(n) if any(e[k] for e in a)]


def to_univariate(a: Poly, k: int) -> List[Poly]:
    """Dense coefficient list in variable ``k`` (index = power)."""
    deg = max(e[k] for e in a)
    coeffs: List[Poly] = [{} for _ in range(deg + 1)]
    for e, c in a.items():
        f = list(e)
        f[k] = 0
        coeffs[e[k]][tuple(f)] = c
    return coeffs


def from_univariate(coeffs: List[Poly], k: int) -> Poly:
    out: Poly = {}
    for i, p in enumerate(coeffs):
        for e, c in p.items():
            f = list(e)
            f[k] = i
            out[tuple(f)] = c
    return out


def _udeg(u: List[Poly]) -> int:
    d = len(u) - 1
    while d >= 0 and not u[d]:
        d -= 1
    return d


def _utrim(u: List[Poly]) -> List[Poly]:
    return u[: _udeg(u) + 1]


def _uprem(a: List[Poly], b: List[Poly]) -> List[Poly]:
    """Pseudo-remainder of ``a`` by ``b`` (coefficients are polynomials)."""
    r = list(a)
    db = _udeg(b)
    lb = b[db]
    dr = _udeg(r)
    steps = dr - db + 1
    while dr >= db and dr >= 0:
        lr = r[dr]
        shift = dr - db
        r = [mul(c, lb) for c in r]
        for i in range(db + 1):
            if b[i]:
                r[i + shift] = sub(r[i + shift], mul(lr, b[i]))
        steps -= 1
        dr = _udeg(r)
    r = _utrim(r)
    if steps > 0:
        f = {}
        for _ in range(steps):
            f = mul(f, lb) if f else lb
        r = [mul(c, f) for c in r]
    return r


def _udivexact_coeffs(u: List[Poly], d: Poly) -> List[Poly]:
    out = []
    for c in u:
        q = divexact(c, d)
        if q is None:
            raise ArithmeticError("subresultant step produced a non-exact division")
        out.append(q)
    return out


def _coeff_gcd(u: List[Poly]) -> Poly:
    g: Poly = {}
    for c in u:
        if c:
            g = gcd(g, c) if g else primitive(c)[1]
            if is_constant(g):
                return const(1, len(next(iter(g))))
    return g


def _normalize_sign(a: Poly) -> Poly:
    return neg(a) if a and a[max(a)] < 0 else a


def _power(a: Poly, k: int) -> Poly:
    out: Optional[Poly] = None
    for _ in range(k):
        out = a if out is None else mul(out, a)
    return out if out is not None else {}


def _subresultant_gcd(a: List[Poly], b: List[Poly], nvars: int) -> List[Poly]:
    """GCD of two primitive univariate polynomials via the subresultant PRS."""
    if _udeg(a) < _udeg(b):
        a, b = b, a
    one = const(1, nvars)
    g = one
    h = one
    while True:
        delta = _udeg(a) - _udeg(b)
        r = _uprem(a, b)
        if not r:
            break
        if _udeg(r) == 0:
            return [one]
        denom = mul(g, _power(h, delta)) if delta else g
        a, b = b, _udivexact_coeffs(r, denom)
        g = a[_udeg(a)]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            num = _power(g, delta)
            hd = _power(h, delta - 1)
            q = divexact(num, hd)
            if q is None:
                raise ArithmeticError("subresultant h-update is not exact")
            h = q
    cont = _coeff_gcd(b)
    return _udivexact_coeffs(b, cont)


def gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor, primitive with positive lex-leading coefficient.

    ``gcd(0, 0)`` is ``{}``; a nonzero constant GCD is returned as ``1``.
    """
    if not a:
        return _normalize_sign(primitive(b)[1]) if b else {}
    if not b:
        return primitive(a)[1]
    nvars = len(next(iter(a)))
    # common monomial factor
    ma, mb = min_exponents(a), min_exponents(b)
    mono = tuple(min(x, y) for x, y in zip(ma, mb))
    a = shift_down(a, ma)
    b = shift_down(b, mb)
    if _homogeneous(a) and _homogeneous(b):
        g = _gcd_homogeneous(a, b, nvars)
    else:
        g = _gcd_rec(primitive(a)[1], primitive(b)[1], nvars)
    return mul_monomial(g, mono)


def _homogeneous(a: Poly) -> bool:
    return len({sum(e) for e in a}) == 1


def _gcd_homogeneous(a: Poly, b: Poly, nvars: int) -> Poly:
    # Neither a nor b has a monomial factor here, so setting one variable to 1
    # is a bijection on the remaining factors; homogenize the affine GCD.
    common = [k for k in active_vars(a) if k in active_vars(b)]
    if not common:
        return const(1, nvars)
    j = common[0]

    def deh(p: Poly) -> Poly:
        out: Poly = {}
        for e, c in p.items():
            f = e[:j] + (0,) + e[j + 1:]
            out[f] = out.get(f, 0) + c
        return {e: c for e, c in out.items() if c}

    da, db = primitive(deh(a))[1], primitive(deh(b))[1]
    g = _heu_gcd(da, db, nvars)
    if g is None:
        g = _gcd_rec(da, db, nvars)
    d = total_degree(g)
    hom = {e[:j] + (d - sum(e),) + e[j + 1:]: c for e, c in g.items()}
    return primitive(hom)[1]


def _gcd_rec(a: Poly, b: Poly, nvars: int) -> Poly:
    if is_constant(a) or is_constant(b):
        return const(1, nvars)
    if a == b:
        return a
    va, vb = active_vars(a), active_vars(b)
    common = [k for k in va if k in vb]
    if not common:
        # a and b involve disjoint variable sets: only contents can be shared,
        # and both are primitive.
        return const(1, nvars)
    q = divexact(a, b)
    if q is not None:
        return b
    q = divexact(b, a)
    if q is not None:
        return a
    k = min(common, key=lambda v: (max(max(e[v] for e in a), max(e[v] for e in b)), -v))
    ua, ub = to_univariate(a, k), to_univariate(b, k)
    ca, cb = _coeff_gcd(ua), _coeff_gcd(ub)
    pa, pb = _udivexact_coeffs(ua, ca), _udivexact_coeffs(ub, cb)
    c = _gcd_rec(ca, cb, nvars)
    if _udeg(pa) == 0 or _udeg(pb) == 0:
        g = [const(1, nvars)]
    else:
        g = _subresultant_gcd(pa, pb, nvars)
    out = mul(from_univariate(g, k), c)
    return primitive(out)[1]


# -- heuristic GCD ------------------------------------------------------------

def _max_norm(a: Poly) -> int:
    return max(abs(c) for c in a.values())


def _eval_var(a: Poly, k: int, xi: int) -> Poly:
    out: Poly = {}
    for e, c in a.items():
        f = e[:k] + (0,) + e[k + 1:]
        out[f] = out.get(f, 0) + c * xi ** e[k]
    return {e: c for e, c in out.items() if c}


def _interpolate(h: Poly, k: int, xi: int) -> Poly:
    """Inverse of evaluation at ``x_k = xi`` using symmetric xi-adic digits."""
    out: Poly = {}
    half = xi // 2
    for e, c in h.items():
        i = 0
        while c:
            d = c % xi
            if d > half:
                d -= xi
            if d:
                out[e[:k] + (i,) + e[k + 1:]] = d
            c = (c - d) // xi
            i += 1
    return out


def _heu_gcd(a: Poly, b: Poly, nvars: int) -> Optional[Poly]:
    """Heuristic GCD by evaluation/interpolation; ``None`` when it gives up.

    A returned value is always correct: it is checked to divide both inputs.
    Inputs must be primitive.
    """
    if is_constant(a) or is_constant(b):
        return const(1, nvars)
    va, vb = active_vars(a), active_vars(b)
    k = max(set(va) | set(vb))
    na, nb = _max_norm(a), _max_norm(b)
    # xi >= 2*min(|a|, |b|) + 2 makes a candidate that divides both the GCD
    xi = max(2 * min(na, nb) + 29, 2 * min(na // abs(a[max(a)]), nb // abs(b[max(b)])) + 2)
    for _ in range(6):
        ea, eb = _eval_var(a, k, xi), _eval_var(b, k, xi)
        if ea and eb:
            if not active_vars(ea) and not active_vars(eb):
                h = const(igcd(next(iter(ea.values())), next(iter(eb.values()))), nvars)
            else:
                inner = _heu_gcd(primitive(ea)[1], primitive(eb)[1], nvars)
                h = None if inner is None else scale(inner, igcd(content(ea), content(eb)))
            if h is not None:
                cand = primitive(_interpolate(h, k, xi))[1]
                if cand and divexact(a, cand) is not None and divexact(b, cand) is not None:
                    return cand
        xi = xi * 73794 * _isqrt(_isqrt(xi)) // 27011
    return None


def _isqrt(n: int) -> int:
    from math import isqrt

    return isqrt(max(n, 0))
