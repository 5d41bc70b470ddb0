"""Floer chain and cochain complexes built from orbit and count data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .complexes import ChainComplex, GradedBasis, dual
from .errors import ShapeError, UnknownOrbitError
from .graded import Degree
from .report import CheckItem, Report


@dataclass(frozen=True)
class Orbit:
    """A generator with an integer grading lift."""

    name: str
    mu: int


@dataclass(frozen=True)
class FloerData:
    """Half-dimension, grading moduli, orbits, and one-dimensional counts.

    ``m1`` is stored as a sorted tuple of ``((source, target), count)``
    pairs so the whole record is hashable; use :meth:`make` to build one
    from a plain mapping.
    """

    n: int
    N0: int
    N1: int
    orbits: tuple
    m1: tuple = ()

    @classmethod
    def make(cls, n: int, N0: int, N1: int, orbits: Sequence[Orbit],
             m1: Mapping | Sequence = ()) -> "FloerData":
        if isinstance(m1, Mapping):
            items = m1.items()
        else:
            items = m1
        cleaned = tuple(sorted(((a, b), int(c)) for (a, b), c in items if c))
        data = cls(n=n, N0=N0, N1=N1, orbits=tuple(orbits), m1=cleaned)
        names = [o.name for o in data.orbits]
        if len(set(names)) != len(names):
            raise ShapeError("duplicate orbit names")
        return data

    @property
    def modulus(self) -> int:
        return 2 * self.N0

    @property
    def names(self):
        return tuple(o.name for o in self.orbits)

    def mu(self, name: str) -> int:
        for o in self.orbits:
            if o.name == name:
                return o.mu
        raise UnknownOrbitError(name)

    def has_orbit(self, name: str) -> bool:
        return any(o.name == name for o in self.orbits)

    def m1_map(self):
        return dict(self.m1)

    def m1_count(self, source: str, target: str) -> int:
        for (a, b), c in self.m1:
            if a == source and b == target:
                return c
        return 0


def pairing(data: FloerData, alpha: str, beta: str) -> int:
    """<alpha, beta> = 1 if the orbits coincide, else 0."""
    if not data.has_orbit(alpha):
        raise UnknownOrbitError(alpha)
    if not data.has_orbit(beta):
        raise UnknownOrbitError(beta)
    return 1 if alpha == beta else 0


def congruent(a: int, b: int, modulus: int) -> bool:
    return (a - b) % modulus == 0 if modulus else a == b


def validate_data(data: FloerData, strict: bool = False) -> Report:
    """Degree congruences, the square-zero convolution, and name checks."""
    report = Report()
    names = [o.name for o in data.orbits]
    report.add(CheckItem(
        "orbit-names-unique", len(set(names)) == len(names),
        witness=None if len(set(names)) == len(names) else
        next(n for n in names if names.count(n) > 1)))

    divis_ok = True
    if data.N0 > 0 and data.N1 > 0:
        divis_ok = data.N0 % data.N1 == 0
    report.add(CheckItem("chern-moduli-compatible", divis_ok,
                         witness=None if divis_ok else "N1=%d does not divide N0=%d" % (data.N1, data.N0)))

    known = set(names)
    for (a, b), c in data.m1:
        if a not in known or b not in known:
            report.add(CheckItem("m1-orbits-known", False, witness="%s->%s" % (a, b)))
            return report
    report.add(CheckItem("m1-orbits-known", True))

    # Every nonzero count drops the grading by exactly 1 modulo 2*N0.
    for (a, b), c in data.m1:
        ok = congruent(data.mu(a) - data.mu(b), 1, data.modulus)
        if not ok:
            report.add(CheckItem(
                "degree-congruence", False, witness="m1 %s->%s" % (a, b),
                level="error" if strict else "warning"))
    if not any(i.name == "degree-congruence" for i in report.items):
        report.add(CheckItem("degree-congruence", True))

    # Convolution: sum_o m1(a, o) m1(o, b) = 0 for all pairs.
    counts = data.m1_map()
    bad = None
    for a in names:
        for b in names:
            total = sum(counts.get((a, o), 0) * counts.get((o, b), 0) for o in names)
            if total != 0:
                bad = (a, b)
                break
        if bad:
            break
    report.add(CheckItem("square-zero-convolution", bad is None,
                         witness=None if bad is None else "(%s, %s)" % bad))

    report.add(CheckItem(
        "contractible-orbit-hypothesis", True, level="note",
        witness="table identities assume the stored orbits bound; not checkable from counts"))
    return report


def build_cf(data: FloerData, validate: bool = True) -> ChainComplex:
    """Chain complex on the orbits: d a = sum_b (-1)^{mu(b)} m1(a, b) b."""
    if validate:
        rep = validate_data(data, strict=False)
        if not rep.ok:
            raise ShapeError("invalid data: %s" % rep.first_failure())
    entries = tuple((o.name, Degree(o.mu, data.modulus)) for o in data.orbits)
    diff = {}
    for (a, b), c in data.m1:
        sign = -1 if data.mu(b) % 2 else 1
        key = (b, a)
        diff[key] = diff.get(key, 0) + sign * c
    return ChainComplex(GradedBasis(entries), diff, check=False)


def build_cf_dual(data: FloerData, validate: bool = True) -> ChainComplex:
    """Cochain complex as a chain complex: degree -mu, d* a = sum_b m1(b, a) b."""
    if validate:
        rep = validate_data(data, strict=False)
        if not rep.ok:
            raise ShapeError("invalid data: %s" % rep.first_failure())
    entries = tuple((o.name, Degree(-o.mu, data.modulus)) for o in data.orbits)
    diff = {}
    for (b, a), c in data.m1:
        key = (b, a)
        diff[key] = diff.get(key, 0) + c
    return ChainComplex(GradedBasis(entries), diff, check=False)
