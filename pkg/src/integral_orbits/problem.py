"""Line-oriented problem files.

::

    # Example
    ring P2 vars x,y,z
    map f = [y^4 + z^4, x^3(x+y+z), y z^3]
    divisor D = (z)^1
    basis = { x, y, z, x+y+z }
    point x0 = [1 : 1 : 1]
    places S = {inf}
    param n = 2

Names must be declared before they are used and a file has one ring.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .divisor import Divisor, FactorBasis, parse_divisor
from .errors import OrbitError, ParseError
from .forms import HomogeneousForm, Ring
from .parsing import parse_point_literal, parse_rational
from .projective import PlaceSet, ProjPoint, normalize
from .selfmap import SelfMap

_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_RING = re.compile(r"ring\s+P(\d+)\s+vars\s+(.+)")
_MAP = re.compile(rf"map\s+({_NAME})\s*=\s*\[(.*)\]")
_DIVISOR = re.compile(rf"divisor\s+({_NAME})\s*=\s*(.+)")
_BASIS = re.compile(r"basis\s*=\s*\{(.*)\}")
_POINT = re.compile(rf"point\s+({_NAME})\s*=\s*(\[.*\])")
_PLACES = re.compile(rf"places\s+({_NAME})\s*=\s*(\{{.*\}})")
_PARAM = re.compile(rf"param\s+({_NAME})\s*=\s*(\S+)")


def _split_commas(text: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


@dataclass
class ProblemFile:
    ring: Optional[Ring] = None
    maps: Dict[str, SelfMap] = field(default_factory=dict)
    divisors: Dict[str, Divisor] = field(default_factory=dict)
    basis: FactorBasis = field(default_factory=FactorBasis)
    basis_forms: List[HomogeneousForm] = field(default_factory=list)
    points: Dict[str, ProjPoint] = field(default_factory=dict)
    places: Dict[str, PlaceSet] = field(default_factory=dict)
    params: Dict[str, str] = field(default_factory=dict)

    def _first(self, table: dict, what: str):
        if not table:
            raise ParseError(f"the problem file declares no {what}")
        return next(iter(table.values()))

    @property
    def map(self) -> SelfMap:
        return self._first(self.maps, "map")

    @property
    def divisor(self) -> Divisor:
        return self._first(self.divisors, "divisor")

    @property
    def point(self) -> ProjPoint:
        return self._first(self.points, "point")

    @property
    def place_set(self) -> PlaceSet:
        return self._first(self.places, "place set")

    def param(self, name: str, default=None, kind=str):
        if name not in self.params:
            return default
        raw = self.params[name]
        if kind is Fraction:
            return parse_rational(raw)
        try:
            return kind(raw)
        except ValueError as exc:
            raise ParseError(f"param {name} = {raw!r} is not a valid {kind.__name__}") from exc


def parse_problem(text: str) -> ProblemFile:
    prob = ProblemFile()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            _statement(prob, line)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        except OrbitError as exc:
            raise type(exc)(f"line {lineno}: {exc}") from exc
    return prob


def _need_ring(prob: ProblemFile) -> Ring:
    if prob.ring is None:
        raise ParseError("declare the ring first")
    return prob.ring


def _statement(prob: ProblemFile, line: str) -> None:
    m = _RING.fullmatch(line)
    if m:
        if prob.ring is not None:
            raise ParseError("a problem file has a single ring")
        names = tuple(v.strip() for v in m.group(2).split(","))
        if len(names) != int(m.group(1)) + 1:
            raise ParseError(f"P{m.group(1)} needs {int(m.group(1)) + 1} variables, got {len(names)}")
        try:
            prob.ring = Ring(names)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        return
    m = _MAP.fullmatch(line)
    if m:
        ring = _need_ring(prob)
        prob.maps[m.group(1)] = SelfMap.parse(ring, _split_commas(m.group(2)))
        return
    m = _BASIS.fullmatch(line)
    if m:
        ring = _need_ring(prob)
        for expr in _split_commas(m.group(1)):
            if expr:
                form = ring.parse(expr)
                prob.basis_forms.append(form)
                try:
                    prob.basis.add(form)
                except ValueError as exc:
                    raise ParseError(str(exc)) from exc
        return
    m = _DIVISOR.fullmatch(line)
    if m:
        ring = _need_ring(prob)
        body = m.group(2).strip()
        prob.divisors[m.group(1)] = Divisor([], ring) if body == "0" else parse_divisor(body, ring, prob.basis)
        return
    m = _POINT.fullmatch(line)
    if m:
        ring = _need_ring(prob)
        coords = parse_point_literal(m.group(2))
        if len(coords) != ring.num_vars:
            raise ParseError(f"point needs {ring.num_vars} coordinates")
        prob.points[m.group(1)] = normalize(coords)
        return
    m = _PLACES.fullmatch(line)
    if m:
        prob.places[m.group(1)] = PlaceSet.parse(m.group(2))
        return
    m = _PARAM.fullmatch(line)
    if m:
        prob.params[m.group(1)] = m.group(2)
        return
    raise ParseError(f"cannot parse {line!r}")


def load_problem(path: str) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())
