"""Ground-truth generator for flat even-dimensional tori.

Critical points of ``f(theta) = sum_i a_i cos(theta_i)`` on the d-torus are
the sign patterns with each coordinate at the maximum (``M``) or minimum
(``m``) of its circle factor, graded by the number of ``M`` letters.  The
one-dimensional flow counts cancel in pairs, so the differential vanishes
and the grading is over the full integers.

Count tables come from flow stars: one internal vertex per circle factor
with one semi-infinite gradient edge per puncture, each edge carrying its
own small phase shift.  An edge imposes a point condition on the vertex
(stable set of a maximum, unstable set of a minimum) or an arc condition
(the complement of the opposite critical point).  An entry is populated
exactly when every factor carries exactly one point condition and the
vertex misses all excluded points; the enumeration brackets the critical
intervals on a uniform grid, so the resulting integer tables are
independent of the grid density.

Orientation convention (one global choice, validated downstream against
the gluing relations and the simplicial oracle): each populated entry
contributes +-1, the sign being a graded comparison of the point-condition
frames.  Writing S(x) for the set of factors where the orbit x has an
``M``, the slot families use

* outgoing arity <= 1 (diagonal, pants, unit, top, triple pants, and the
  two-output-free slot (0,0,k)): the permutation sign sorting the chain
  frames in reverse edge order, concat(S(a_k), ..., S(a_1));
* slot (0,2,0): the sign sorting concat(S(b_2), S(b_1));
* slot (0,2,1): the product of four frame comparisons listed in
  ``_intersection_sign``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import GenericityError, ShapeError
from .floer import FloerData, Orbit
from .graded import permutation_sign
from .products import (SLOT_CUP, SLOT_DIAGONAL, SLOT_FLAT, SLOT_INTERSECTION,
                       SLOT_SHARP, SLOT_TOP, SLOT_TORUS, SLOT_TRIPLE,
                       SLOT_UNIT, ThetaBundle)
from .tables import CountTable, SlotKey

DEFAULT_SAMPLES = 1 << 12

GENERATED_SLOTS = (
    (SLOT_DIAGONAL, "diagonal"),
    (SLOT_CUP, "pants"),
    (SLOT_INTERSECTION, "copants"),
    (SLOT_SHARP, "sharp"),
    (SLOT_FLAT, "flat"),
    (SLOT_UNIT, "unit"),
    (SLOT_TOP, "top"),
    (SLOT_TRIPLE, "pants3"),
)


@dataclass(frozen=True)
class TorusModel:
    d: int
    amplitudes: tuple

    @classmethod
    def make(cls, d: int, amplitudes=None) -> "TorusModel":
        if d <= 0 or d % 2 != 0:
            raise ShapeError("torus dimension must be even and positive")
        if amplitudes is None:
            amplitudes = tuple(float(k + 2) for k in range(d))
        amplitudes = tuple(float(a) for a in amplitudes)
        if len(amplitudes) != d:
            raise ShapeError("need one amplitude per factor")
        if any(a <= 0 for a in amplitudes):
            raise GenericityError("amplitudes must be positive")
        if len(set(amplitudes)) != d:
            raise GenericityError("amplitudes must be distinct")
        return cls(d=d, amplitudes=amplitudes)


@dataclass(frozen=True)
class CriticalPoint:
    pattern: tuple  # one of 'm'/'M' per factor

    @property
    def name(self) -> str:
        return "".join(self.pattern)

    @property
    def index(self) -> int:
        return sum(1 for c in self.pattern if c == "M")


def critical_points(model: TorusModel):
    return [CriticalPoint(p) for p in
            itertools.product("mM", repeat=model.d)]


# -- circle-factor flow structure ---------------------------------------------

def _edge_phase(edge: int) -> float:
    # Small distinct nonzero shifts, spacing far above any grid step used.
    # The denominator keeps 3 | numerator impossible, so neither the shift
    # nor its antipode ever lands on a power-of-two grid node.
    return 2.0 * math.pi * (3 * edge + 4) / 768.0


def _critical_intervals(amplitude: float, phase: float, samples: int):
    """Grid intervals bracketing the max and min of a*cos(theta - phase).

    Scans the sampled derivative for sign changes; exactly two roots, one
    of each type, classified by the second derivative's sign.
    """
    step = 2.0 * math.pi / samples
    maxima = []
    minima = []
    prev = -amplitude * math.sin(0.0 - phase)
    for k in range(1, samples + 1):
        theta = k * step
        cur = -amplitude * math.sin(theta - phase)
        if prev == 0.0 or cur == 0.0:
            raise GenericityError("critical point on a grid node; perturb amplitudes")
        if (prev > 0) != (cur > 0):
            mid = (k - 0.5) * step
            if -amplitude * math.cos(mid - phase) < 0:
                maxima.append(k - 1)
            else:
                minima.append(k - 1)
        prev = cur
    if len(maxima) != 1 or len(minima) != 1:
        raise GenericityError("expected one maximum and one minimum per circle")
    return maxima[0], minima[0]


def circle_flow_line_count(amplitude: float, samples: int = DEFAULT_SAMPLES) -> int:
    """Signed count of gradient lines from the maximum to the minimum.

    The two open arcs between the critical points each carry one line;
    their orientation signs are opposite, so the signed count is zero.
    """
    phase = _edge_phase(0)
    hi, lo = _critical_intervals(amplitude, phase, samples)
    arcs = 2 if hi != lo else 0
    if arcs != 2:
        raise GenericityError("degenerate circle flow")
    return (+1) + (-1)


def _circle_star_support(k_minus: int, k_plus: int, amplitude: float,
                         samples: int):
    """Balanced letter patterns ``(minus_letters, plus_letters)`` for one factor.

    A minus edge to ``m`` and a plus edge to ``M`` are point conditions;
    the opposite letters are arc conditions excluding one point.  Exactly
    one point condition must hold, and the vertex must avoid every
    excluded interval.
    """
    edges = k_minus + k_plus
    spots = [_critical_intervals(amplitude, _edge_phase(e), samples)
             for e in range(edges)]
    support = []
    for letters in itertools.product("mM", repeat=edges):
        minus = letters[:k_minus]
        plus = letters[k_minus:]
        points = []
        arcs = []
        for e in range(edges):
            hi, lo = spots[e]
            if e < k_minus:
                # Unstable sets: {lo} for the minimum, circle minus lo for the maximum.
                (points if letters[e] == "m" else arcs).append(lo)
            else:
                # Stable sets: {hi} for the maximum, circle minus hi for the minimum.
                (points if letters[e] == "M" else arcs).append(hi)
        if len(points) != 1:
            continue
        vertex = points[0]
        if any(vertex == ex for ex in arcs):
            raise GenericityError(
                "flow-star vertex meets an excluded point; perturb amplitudes")
        support.append((minus, plus))
    return support


# -- orientation convention -----------------------------------------------------

def _m_set(name: str):
    return [i for i, c in enumerate(name) if c == "M"]


def _shuffle(blocks) -> int:
    seq = [i for block in blocks for i in block]
    if len(set(seq)) != len(seq):
        return 0
    return permutation_sign(seq)


def _chain_frame_sign(minus_names, plus_names) -> int:
    return _shuffle([_m_set(p) for p in reversed(plus_names)])


def _pd_sharp_sign(minus_names, plus_names) -> int:
    b1, b2 = minus_names
    return _shuffle([_m_set(b2), _m_set(b1)])


def _opposite(name: str):
    return [i for i, c in enumerate(name) if c == "m"]


def _closure_sign(point_set, d: int) -> int:
    comp = [i for i in range(d) if i not in set(point_set)]
    return _shuffle([sorted(point_set), comp])


def _intersection_sign(minus_names, plus_names) -> int:
    d = len(minus_names[0])
    p1 = _opposite(minus_names[0])
    p2 = _opposite(minus_names[1])
    both = sorted(set(p1) | set(p2))
    return (_shuffle([p2, p1]) * _closure_sign(both, d)
            * _closure_sign(p2, d) * _closure_sign(p1, d))


def _entry_sign(slot: SlotKey, minus_names, plus_names) -> int:
    if slot == SLOT_SHARP:
        return _pd_sharp_sign(minus_names, plus_names)
    if slot == SLOT_INTERSECTION:
        return _intersection_sign(minus_names, plus_names)
    return _chain_frame_sign(minus_names, plus_names)


# -- data and table generation ---------------------------------------------------

def generate_data(model: TorusModel, samples: int = DEFAULT_SAMPLES) -> FloerData:
    orbits = [Orbit(c.name, c.index) for c in critical_points(model)]
    m1 = {}
    for src in critical_points(model):
        for i in range(model.d):
            if src.pattern[i] != "M":
                continue
            tgt = list(src.pattern)
            tgt[i] = "m"
            count = circle_flow_line_count(model.amplitudes[i], samples)
            if count:
                m1[(src.name, "".join(tgt))] = count
    return FloerData.make(n=model.d // 2, N0=0, N1=0, orbits=orbits, m1=m1)


def _slot_table(model: TorusModel, slot: SlotKey, label: str,
                samples: int) -> CountTable:
    km, kp = slot.k_minus, slot.k_plus
    supports = [_circle_star_support(km, kp, model.amplitudes[i], samples)
                for i in range(model.d)]
    entries = {}
    for combo in itertools.product(*supports):
        minus_names = tuple("".join(combo[i][0][r] for i in range(model.d))
                            for r in range(km))
        plus_names = tuple("".join(combo[i][1][r] for i in range(model.d))
                           for r in range(kp))
        sign = _entry_sign(slot, minus_names, plus_names)
        if sign:
            entries[(minus_names, plus_names)] = sign
    return CountTable.make(slot, q=0, label=label, entries=entries)


def generate_theta_tables(model: TorusModel,
                          samples: int = DEFAULT_SAMPLES) -> ThetaBundle:
    tables = [_slot_table(model, slot, label, samples)
              for slot, label in GENERATED_SLOTS]
    # Genus-one slot: the trace of the diagonal, which vanishes for tori.
    tables.append(CountTable.make(SLOT_TORUS, q=0, label="torus", entries={}))
    return ThetaBundle.from_tables(tables)


def declared_gluings():
    """Label-level gluing configurations the generated bundle satisfies."""
    return (
        {"left": "pants", "right": "unit", "i": 2, "j": 1, "result": "diagonal"},
        {"left": "flat", "right": "sharp", "i": 2, "j": 2, "result": "diagonal"},
        {"left": "pants", "right": "pants", "i": 2, "j": 1, "result": "pants3"},
        {"left": "pants", "right": "pants", "i": 1, "j": 1, "result": "pants3"},
    )


def declared_self_gluings():
    return ({"source": "diagonal", "i": 1, "j": 1, "result": "torus"},)
