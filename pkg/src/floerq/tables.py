"""Count tables, the tensor elements they generate, and the contraction
calculus with its gluing identities.

A table records integer counts indexed by a tuple of "incoming" orbit
names (cochain side) and a tuple of "outgoing" names (chain side) for a
surface slot ``(g, k-, k+)`` and a parameter-cube dimension ``q``.  The
element of a table lives in the tensor complex
``dual(CF)^{(x) k-} (x) CF^{(x) k+}`` and carries the normalization sign
``(-1)^{q(q-1)/2}``.

``diamond`` contracts a chain factor of one element against a cochain
factor of another and reorders the survivors; ``box`` self-contracts.  In
both, the sign is the graded sign of the permutation from the natural
left-to-right factor order to the survivor order with the two contracted
slots appended last (chain copy first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .complexes import ChainComplex, point_complex, tensor_many
from .errors import CompositionError, ShapeError, UnknownOrbitError
from .floer import FloerData, build_cf, build_cf_dual, congruent
from .graded import graded_sign
from .report import CheckItem, Report


@dataclass(frozen=True)
class SlotKey:
    g: int
    k_minus: int
    k_plus: int

    def __post_init__(self):
        if self.g < 0 or self.k_minus < 0 or self.k_plus < 0:
            raise ShapeError("slot key entries must be non-negative")

    def __str__(self):
        return "(%d,%d,%d)" % (self.g, self.k_minus, self.k_plus)


@dataclass(frozen=True)
class CountTable:
    """Sparse counts for one slot; absent entries are zero.

    ``faces`` maps ``(nu, side)`` with ``nu`` in 1..q and ``side`` in
    {0, 1} to the label of a dimension ``q - 1`` table.
    """

    key: SlotKey
    q: int = 0
    label: str = ""
    entries: tuple = ()  # tuple of ((minus_names, plus_names), count)
    faces: tuple = ()    # tuple of ((nu, side), label)

    @classmethod
    def make(cls, key: SlotKey, q: int = 0, label: str = "",
             entries: Mapping | Sequence = (), faces: Mapping | Sequence = ()):
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = entries
        cleaned = []
        for (minus, plus), c in items:
            if len(minus) != key.k_minus or len(plus) != key.k_plus:
                raise ShapeError(
                    "entry arity %d/%d does not match slot %s"
                    % (len(minus), len(plus), key))
            if c:
                cleaned.append(((tuple(minus), tuple(plus)), int(c)))
        cleaned.sort()
        f = faces.items() if isinstance(faces, Mapping) else faces
        return cls(key=key, q=q, label=label, entries=tuple(cleaned),
                   faces=tuple(sorted(f)))

    def entry_map(self):
        return dict(self.entries)

    def face_map(self):
        return dict(self.faces)

    def count(self, minus, plus) -> int:
        return self.entry_map().get((tuple(minus), tuple(plus)), 0)


@dataclass
class TensorElement:
    """Integer combination of orbit-tuple pairs of fixed arity."""

    k_minus: int
    k_plus: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: int(v) for k, v in self.terms.items() if v}
        for (minus, plus) in self.terms:
            if len(minus) != self.k_minus or len(plus) != self.k_plus:
                raise ShapeError("term arity does not match element arity")

    @classmethod
    def zero(cls, k_minus: int, k_plus: int) -> "TensorElement":
        return cls(k_minus, k_plus, {})

    def copy(self) -> "TensorElement":
        return TensorElement(self.k_minus, self.k_plus, dict(self.terms))

    def add_term(self, minus, plus, coeff: int) -> None:
        key = (tuple(minus), tuple(plus))
        v = self.terms.get(key, 0) + coeff
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def scaled(self, c: int) -> "TensorElement":
        return TensorElement(self.k_minus, self.k_plus,
                             {k: c * v for k, v in self.terms.items()})

    def plus(self, other: "TensorElement") -> "TensorElement":
        if (self.k_minus, self.k_plus) != (other.k_minus, other.k_plus):
            raise ShapeError("arity mismatch in sum")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TensorElement(self.k_minus, self.k_plus, out)

    def minus_elt(self, other: "TensorElement") -> "TensorElement":
        return self.plus(other.scaled(-1))

    def is_zero(self) -> bool:
        return not self.terms

    def scalar(self) -> int:
        """Value of an arity (0, 0) element."""
        if (self.k_minus, self.k_plus) != (0, 0):
            raise ShapeError("not a scalar element")
        return self.terms.get(((), ()), 0)

    def __eq__(self, other):
        return (isinstance(other, TensorElement)
                and (self.k_minus, self.k_plus) == (other.k_minus, other.k_plus)
                and self.terms == other.terms)

    def sorted_terms(self):
        return sorted(self.terms.items())


def element_of_vector(vec: Mapping, k_minus: int, k_plus: int) -> TensorElement:
    out = TensorElement.zero(k_minus, k_plus)
    for label, v in vec.items():
        out.add_term(label[:k_minus], label[k_minus:], v)
    return out


def vector_of_element(x: TensorElement):
    return {m + p: v for (m, p), v in x.terms.items()}


def tensor_complex(data: FloerData, k_minus: int, k_plus: int,
                   data_plus: FloerData | None = None) -> ChainComplex:
    """``dual(CF)^{(x) k-} (x) CF^{(x) k+}`` with flat orbit-name tuples."""
    dplus = data_plus if data_plus is not None else data
    factors = ([build_cf_dual(data, validate=False)] * k_minus
               + [build_cf(dplus, validate=False)] * k_plus)
    if not factors:
        return point_complex(data.modulus)
    return tensor_many(factors)


def element_differential(x: TensorElement, data: FloerData,
                         data_plus: FloerData | None = None) -> TensorElement:
    if x.k_minus + x.k_plus == 0:
        return TensorElement.zero(0, 0)
    cx = tensor_complex(data, x.k_minus, x.k_plus, data_plus)
    out = cx.apply_diff(vector_of_element(x))
    return element_of_vector(out, x.k_minus, x.k_plus)


# -- table -> element --------------------------------------------------------

def table_element(t: CountTable, data: FloerData,
                  data_plus: FloerData | None = None) -> TensorElement:
    """Signed tensor element of a table: ``(-1)^{q(q-1)/2}`` times the counts."""
    dplus = data_plus if data_plus is not None else data
    sign = -1 if (t.q * (t.q - 1) // 2) % 2 else 1
    out = TensorElement.zero(t.key.k_minus, t.key.k_plus)
    for (minus, plus), c in t.entries:
        for name in minus:
            if not data.has_orbit(name):
                raise UnknownOrbitError(name)
        for name in plus:
            if not dplus.has_orbit(name):
                raise UnknownOrbitError(name)
        out.add_term(minus, plus, sign * c)
    return out


# -- contraction operations ---------------------------------------------------

def _parities(data, names):
    return [data.mu(n) % 2 for n in names]


def _contraction_sign(source_parities, target_positions):
    """Graded sign of the permutation sending source order to target order.

    ``target_positions`` lists, for each target slot, the 1-based source
    position placed there.
    """
    return graded_sign(tuple(target_positions), source_parities)


def diamond(x: TensorElement, y: TensorElement, i: int | None = None,
            j: int = 1, *, data: FloerData,
            y_plus_data: FloerData | None = None) -> TensorElement:
    """Contract the i-th chain factor of ``x`` against the j-th cochain
    factor of ``y``; defaults pair the last chain factor with the first
    cochain factor.

    ``data`` grades ``x`` and the cochain side of ``y``; ``y_plus_data``
    (defaulting to ``data``) grades the chain factors of ``y``, which is
    all the generality the continuation maps need.
    """
    if i is None:
        i = x.k_plus
    if not (1 <= i <= x.k_plus):
        raise ShapeError("chain index %d out of range 1..%d" % (i, x.k_plus))
    if not (1 <= j <= y.k_minus):
        raise ShapeError("cochain index %d out of range 1..%d" % (j, y.k_minus))

    dmid = y_plus_data if y_plus_data is not None else data
    out = TensorElement.zero(x.k_minus + y.k_minus - 1, x.k_plus - 1 + y.k_plus)
    if x.is_zero() or y.is_zero():
        return out
    kx_m, kx_p = x.k_minus, x.k_plus
    ky_m, ky_p = y.k_minus, y.k_plus
    n_tokens = kx_m + kx_p + ky_m + ky_p

    # Source positions (1-based): x.minus, x.plus, y.minus, y.plus.
    pos_x_minus = list(range(1, kx_m + 1))
    pos_x_plus = list(range(kx_m + 1, kx_m + kx_p + 1))
    pos_y_minus = list(range(kx_m + kx_p + 1, kx_m + kx_p + ky_m + 1))
    pos_y_plus = list(range(kx_m + kx_p + ky_m + 1, n_tokens + 1))
    target = (pos_y_minus[:j - 1] + pos_x_minus + pos_y_minus[j:]
              + pos_x_plus[:i - 1] + pos_y_plus + pos_x_plus[i:]
              + [pos_x_plus[i - 1], pos_y_minus[j - 1]])

    for (mx, px), vx in x.terms.items():
        cplus = px[i - 1]
        for (my, py), vy in y.terms.items():
            if my[j - 1] != cplus:
                continue
            parities = (_parities(data, mx) + _parities(data, px)
                        + _parities(data, my) + _parities(dmid, py))
            sign = _contraction_sign(parities, target)
            new_minus = my[:j - 1] + mx + my[j:]
            new_plus = px[:i - 1] + py + px[i:]
            out.add_term(new_minus, new_plus, sign * vx * vy)
    return out


def box(x: TensorElement, i: int = 1, j: int = 1, *, data: FloerData) -> TensorElement:
    """Self-contraction of the i-th chain factor against the j-th cochain factor."""
    if not (1 <= i <= x.k_plus):
        raise ShapeError("chain index %d out of range 1..%d" % (i, x.k_plus))
    if not (1 <= j <= x.k_minus):
        raise ShapeError("cochain index %d out of range 1..%d" % (j, x.k_minus))
    km, kp = x.k_minus, x.k_plus
    out = TensorElement.zero(km - 1, kp - 1)
    pos_minus = list(range(1, km + 1))
    pos_plus = list(range(km + 1, km + kp + 1))
    target = (pos_minus[:j - 1] + pos_minus[j:]
              + pos_plus[:i - 1] + pos_plus[i:]
              + [pos_plus[i - 1], pos_minus[j - 1]])
    for (m, p), v in x.terms.items():
        if m[j - 1] != p[i - 1]:
            continue
        parities = _parities(data, m) + _parities(data, p)
        sign = _contraction_sign(parities, target)
        out.add_term(m[:j - 1] + m[j:], p[:i - 1] + p[i:], sign * v)
    return out


def act_permutation(rho_minus, rho_plus, x: TensorElement, *,
                    data: FloerData) -> TensorElement:
    """Reorder cochain and chain factors independently with the graded sign."""
    rho_minus = tuple(rho_minus)
    rho_plus = tuple(rho_plus)
    if len(rho_minus) != x.k_minus or len(rho_plus) != x.k_plus:
        raise ShapeError("permutation arities do not match element")
    combined = rho_minus + tuple(r + x.k_minus for r in rho_plus)
    out = TensorElement.zero(x.k_minus, x.k_plus)
    for (m, p), v in x.terms.items():
        parities = _parities(data, m) + _parities(data, p)
        sign = graded_sign(combined, parities)
        nm = tuple(m[r - 1] for r in rho_minus)
        np_ = tuple(p[r - 1] for r in rho_plus)
        out.add_term(nm, np_, sign * v)
    return out


def act_on_table(rho_minus, rho_plus, t: CountTable, *, data: FloerData) -> CountTable:
    """Table of the permuted element; satisfies act(element) = element(act)."""
    if t.faces:
        raise ShapeError("permuting tables with faces is not supported")
    el = act_permutation(rho_minus, rho_plus, table_element(t, data), data=data)
    sign = -1 if (t.q * (t.q - 1) // 2) % 2 else 1
    entries = {k: sign * v for k, v in el.terms.items()}
    return CountTable.make(t.key, q=t.q, label=t.label + "-permuted",
                           entries=entries)


# -- verification -------------------------------------------------------------

def _required_shift(t: CountTable, data: FloerData) -> int:
    return t.q + 2 * data.n * (1 - t.key.g - t.key.k_minus)


def check_table(t: CountTable, data: FloerData, strict: bool = False,
                tables: Mapping | None = None) -> Report:
    """Degree congruence on every entry and face availability for q > 0."""
    report = Report()
    modulus = 2 * data.N0 if t.key.g == 0 else 2 * data.N1
    shift = _required_shift(t, data)
    bad = None
    for (minus, plus), c in t.entries:
        try:
            total = (sum(data.mu(p) for p in plus)
                     - sum(data.mu(m) for m in minus))
        except UnknownOrbitError as e:
            report.add(CheckItem("entry-orbits-known", False, witness=str(e)))
            return report
        if not congruent(total, shift, modulus):
            bad = (minus, plus)
            break
    report.add(CheckItem(
        "degree-congruence", bad is None,
        witness=None if bad is None else "%s|%s" % (list(bad[0]), list(bad[1])),
        level="error" if strict or bad is None else "warning"))

    if t.q > 0:
        fm = t.face_map()
        missing = [(nu, side) for nu in range(1, t.q + 1) for side in (0, 1)
                   if (nu, side) not in fm]
        report.add(CheckItem("faces-present", not missing,
                             witness=str(missing[0]) if missing else None))
        if tables is not None and not missing:
            bad_face = None
            for key, label in fm.items():
                ft = tables.get(label)
                if ft is None or ft.key != t.key or ft.q != t.q - 1:
                    bad_face = (key, label)
                    break
            report.add(CheckItem("faces-compatible", bad_face is None,
                                 witness=str(bad_face) if bad_face else None))
    return report


def check_cycle(t: CountTable, data: FloerData,
                tables: Mapping | None = None) -> Report:
    """The element of a closed table is a cycle; with faces, the element
    differential matches the alternating face sum
    ``sum_nu (-1)^{nu+1} (Q(face^1_nu) - Q(face^0_nu))``.
    """
    report = Report()
    el = table_element(t, data)
    d_el = element_differential(el, data)
    if t.q == 0:
        ok = d_el.is_zero()
        wit = None if ok else str(d_el.sorted_terms()[0][0])
        report.add(CheckItem("cycle", ok, witness=wit))
        return report
    fm = t.face_map()
    missing = [(nu, side) for nu in range(1, t.q + 1) for side in (0, 1)
               if (nu, side) not in fm]
    if missing or tables is None:
        report.add(CheckItem("faces-present", False,
                             witness=str(missing[0]) if missing else "no table registry"))
        return report
    boundary = TensorElement.zero(t.key.k_minus, t.key.k_plus)
    for nu in range(1, t.q + 1):
        sign = -1 if (nu + 1) % 2 else 1
        f1 = table_element(tables[fm[(nu, 1)]], data)
        f0 = table_element(tables[fm[(nu, 0)]], data)
        boundary = boundary.plus(f1.minus_elt(f0).scaled(sign))
    defect = d_el.minus_elt(boundary)
    ok = defect.is_zero()
    report.add(CheckItem("boundary-relation", ok,
                         witness=None if ok else str(defect.sorted_terms()[0][0])))
    return report


def check_gluing(t1: CountTable, t2: CountTable, t3: CountTable,
                 i: int, j: int, data: FloerData) -> Report:
    """Exact integer identity: element(t3) equals element(t1) contracted
    into element(t2) at (i, j); the q1*q2 sign is carried by the element
    normalizations.
    """
    report = Report()
    k1, k2, k3 = t1.key, t2.key, t3.key
    composes = (k1.k_plus >= 1 and k2.k_minus >= 1
                and k3.g == k1.g + k2.g
                and k3.k_minus == k1.k_minus + k2.k_minus - 1
                and k3.k_plus == k1.k_plus + k2.k_plus - 1
                and t3.q == t1.q + t2.q
                and 1 <= i <= k1.k_plus and 1 <= j <= k2.k_minus)
    if not composes:
        raise CompositionError(
            "slots %s (x)_%d%d %s -> %s do not compose" % (k1, i, j, k2, k3))
    glued = diamond(table_element(t1, data), table_element(t2, data),
                    i, j, data=data)
    defect = glued.minus_elt(table_element(t3, data))
    ok = defect.is_zero()
    report.add(CheckItem(
        "gluing %s<>%s->%s at (%d,%d)" % (t1.label or k1, t2.label or k2,
                                          t3.label or k3, i, j),
        ok, witness=None if ok else str(defect.sorted_terms()[0])))
    return report


def check_self_gluing(t_in: CountTable, t_out: CountTable,
                      i: int, j: int, data: FloerData) -> Report:
    report = Report()
    ki, ko = t_in.key, t_out.key
    composes = (ko.g == ki.g + 1 and ko.k_minus == ki.k_minus - 1
                and ko.k_plus == ki.k_plus - 1 and t_in.q == t_out.q
                and 1 <= i <= ki.k_plus and 1 <= j <= ki.k_minus)
    if not composes:
        raise CompositionError("slots %s -> %s do not self-compose" % (ki, ko))
    traced = box(table_element(t_in, data), i, j, data=data)
    defect = traced.minus_elt(table_element(t_out, data))
    ok = defect.is_zero()
    report.add(CheckItem(
        "self-gluing %s->%s at (%d,%d)" % (t_in.label or ki, t_out.label or ko, i, j),
        ok, witness=None if ok else str(defect.sorted_terms()[0])))
    return report
