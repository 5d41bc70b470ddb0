"""Products and secondary operations on Floer (co)homology, computed from
count tables: unit and top classes, cup, intersection, cap, the mutually
inverse duality maps, the Euler trace, Massey products, and continuation
maps between data sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import intlinalg
from .complexes import ChainComplex, homology_basis
from .errors import (CompositionError, HypothesisError, MissingTableError,
                     ShapeError, UnknownOrbitError)
from .floer import FloerData, build_cf, build_cf_dual
from .report import CheckItem, Report
from .tables import (CountTable, SlotKey, TensorElement, box, check_cycle,
                     check_gluing, check_self_gluing, check_table, diamond,
                     element_differential, element_of_vector, table_element,
                     vector_of_element)

SLOT_DIAGONAL = SlotKey(0, 1, 1)
SLOT_CUP = SlotKey(0, 1, 2)
SLOT_INTERSECTION = SlotKey(0, 2, 1)
SLOT_SHARP = SlotKey(0, 2, 0)
SLOT_FLAT = SlotKey(0, 0, 2)
SLOT_UNIT = SlotKey(0, 1, 0)
SLOT_TOP = SlotKey(0, 0, 1)
SLOT_TRIPLE = SlotKey(0, 1, 3)
SLOT_TORUS = SlotKey(1, 0, 0)


@dataclass
class ThetaBundle:
    """Count tables indexed by slot, plus any extra labelled tables."""

    by_slot: dict
    all_tables: dict = field(default_factory=dict)

    @classmethod
    def from_tables(cls, tables: Sequence[CountTable]) -> "ThetaBundle":
        by_slot = {}
        all_tables = {}
        for t in tables:
            if t.label:
                all_tables[t.label] = t
            if t.q == 0 and t.key not in by_slot:
                by_slot[t.key] = t
        return cls(by_slot=by_slot, all_tables=all_tables)

    def get(self, slot: SlotKey) -> CountTable:
        if slot not in self.by_slot:
            raise MissingTableError("no table for slot %s" % slot)
        return self.by_slot[slot]

    def has(self, slot: SlotKey) -> bool:
        return slot in self.by_slot


@dataclass
class CocycleElement:
    """A cochain (arity (1,0)) or chain (arity (0,1)) with its degree."""

    element: TensorElement
    degree: int
    closed: bool = True

    @property
    def side(self) -> str:
        if (self.element.k_minus, self.element.k_plus) == (1, 0):
            return "cochain"
        if (self.element.k_minus, self.element.k_plus) == (0, 1):
            return "chain"
        raise ShapeError("not a rank-one element")

    def names(self):
        if self.side == "cochain":
            return {m[0]: v for (m, _), v in self.element.terms.items()}
        return {p[0]: v for (_, p), v in self.element.terms.items()}


def _rank_one(data: FloerData, side: str, coeffs: Mapping) -> CocycleElement:
    terms = {}
    degree = None
    for name, v in coeffs.items():
        if not data.has_orbit(name):
            raise UnknownOrbitError(name)
        mu = data.mu(name)
        if degree is None:
            degree = mu
        else:
            same = (mu - degree) % data.modulus == 0 if data.modulus else mu == degree
            if not same:
                raise ShapeError("element is not degree-homogeneous")
        key = ((name,), ()) if side == "cochain" else ((), (name,))
        terms[key] = terms.get(key, 0) + int(v)
    el = TensorElement(1, 0, terms) if side == "cochain" else TensorElement(0, 1, terms)
    closed = element_differential(el, data).is_zero()
    return CocycleElement(el, degree if degree is not None else 0, closed)


def cochain(data: FloerData, coeffs) -> CocycleElement:
    if isinstance(coeffs, str):
        coeffs = {coeffs: 1}
    return _rank_one(data, "cochain", coeffs)


def chain(data: FloerData, coeffs) -> CocycleElement:
    if isinstance(coeffs, str):
        coeffs = {coeffs: 1}
    return _rank_one(data, "chain", coeffs)


def _as_cocycle(el: TensorElement, degree: int, data: FloerData) -> CocycleElement:
    closed = element_differential(el, data).is_zero()
    return CocycleElement(el, degree, closed)


# -- basic classes ------------------------------------------------------------

def identity_element(data: FloerData) -> TensorElement:
    """The diagonal element; contraction with it is the identity."""
    return TensorElement(1, 1, {((o.name,), (o.name,)): 1 for o in data.orbits})


def unit(theta: ThetaBundle, data: FloerData) -> CocycleElement:
    el = table_element(theta.get(SLOT_UNIT), data)
    return _as_cocycle(el, 0, data)


def top_class(theta: ThetaBundle, data: FloerData) -> CocycleElement:
    el = table_element(theta.get(SLOT_TOP), data)
    return _as_cocycle(el, 2 * data.n, data)


def euler(data: FloerData, theta: ThetaBundle | None = None) -> int:
    """Sum of (-1)^mu over the orbits; equals the trace of the diagonal."""
    total = sum(-1 if o.mu % 2 else 1 for o in data.orbits)
    if theta is not None and theta.has(SLOT_TORUS):
        declared = table_element(theta.get(SLOT_TORUS), data).scalar()
        if declared != total:
            raise ShapeError(
                "declared genus-one count %d differs from trace %d" % (declared, total))
    return total


# -- products -----------------------------------------------------------------

def _require_cochain(x: CocycleElement, what: str):
    if x.side != "cochain":
        raise ShapeError("%s expects a cochain" % what)
    if not x.closed:
        raise HypothesisError("%s expects a closed cochain" % what)


def _require_chain(x: CocycleElement, what: str):
    if x.side != "chain":
        raise ShapeError("%s expects a chain" % what)
    if not x.closed:
        raise HypothesisError("%s expects a closed chain" % what)


def cup(a: CocycleElement, b: CocycleElement, theta: ThetaBundle,
        data: FloerData) -> CocycleElement:
    """(pants <> a) <> b; degree adds."""
    _require_cochain(a, "cup")
    _require_cochain(b, "cup")
    t = table_element(theta.get(SLOT_CUP), data)
    el = diamond(diamond(t, a.element, data=data), b.element, data=data)
    return _as_cocycle(el, a.degree + b.degree, data)


def intersection(x: CocycleElement, y: CocycleElement, theta: ThetaBundle,
                 data: FloerData) -> CocycleElement:
    """x <> (y <> co-pants); degree drops by the manifold dimension."""
    _require_chain(x, "intersection")
    _require_chain(y, "intersection")
    t = table_element(theta.get(SLOT_INTERSECTION), data)
    el = diamond(x.element, diamond(y.element, t, data=data), data=data)
    return _as_cocycle(el, x.degree + y.degree - 2 * data.n, data)


def cap(x: CocycleElement, a: CocycleElement, theta: ThetaBundle,
        data: FloerData) -> CocycleElement:
    """x <> pants <> a."""
    _require_chain(x, "cap")
    _require_cochain(a, "cap")
    t = table_element(theta.get(SLOT_CUP), data)
    el = diamond(diamond(x.element, t, data=data), a.element, data=data)
    return _as_cocycle(el, x.degree - a.degree, data)


def pd_sharp(x: CocycleElement, theta: ThetaBundle, data: FloerData) -> CocycleElement:
    _require_chain(x, "pd_sharp")
    t = table_element(theta.get(SLOT_SHARP), data)
    el = diamond(x.element, t, data=data)
    return _as_cocycle(el, 2 * data.n - x.degree, data)


def pd_flat(a: CocycleElement, theta: ThetaBundle, data: FloerData) -> CocycleElement:
    _require_cochain(a, "pd_flat")
    t = table_element(theta.get(SLOT_FLAT), data)
    el = diamond(t, a.element, data=data)
    return _as_cocycle(el, 2 * data.n - a.degree, data)


# -- homology-level comparison ------------------------------------------------

def _dense_differential(cx: ChainComplex):
    labels = list(cx.labels)
    idx = {l: i for i, l in enumerate(labels)}
    mat = [[0] * len(labels) for _ in labels]
    for (t, s), v in cx.diff.items():
        mat[idx[t]][idx[s]] = v
    return mat, labels


def boundary_witness(cx: ChainComplex, vec: Mapping):
    """Some y with d y = vec, or None if vec is not a boundary."""
    mat, labels = _dense_differential(cx)
    b = [vec.get(l, 0) for l in labels]
    y = intlinalg.solve_integer(mat, b)
    if y is None:
        return None
    return {labels[i]: y[i] for i in range(len(labels)) if y[i]}


def rank_one_complex(data: FloerData, side: str) -> ChainComplex:
    return build_cf_dual(data, validate=False) if side == "cochain" \
        else build_cf(data, validate=False)


def compare_elements(x: CocycleElement, y: CocycleElement, data: FloerData):
    """'exact', 'coboundary', or None for two closed rank-one elements."""
    if x.side != y.side:
        raise ShapeError("cannot compare a chain with a cochain")
    diff_el = x.element.minus_elt(y.element)
    if diff_el.is_zero():
        return "exact"
    cx = rank_one_complex(data, x.side)
    vec = vector_of_element(diff_el)
    vec = {k[0]: v for k, v in vec.items()}
    return "coboundary" if boundary_witness(cx, vec) is not None else None


def is_trivial_class(x: CocycleElement, data: FloerData) -> bool:
    """Whether a closed element is a (co)boundary."""
    if x.element.is_zero():
        return True
    cx = rank_one_complex(data, x.side)
    return boundary_witness(cx, x.names()) is not None


def classes_equal(x: CocycleElement, y: CocycleElement, data: FloerData) -> bool:
    return compare_elements(x, y, data) is not None


# -- Massey products ----------------------------------------------------------

@dataclass
class MasseyResult:
    representative: CocycleElement
    indeterminacy: list
    trivial_mod_indeterminacy: bool
    report: Report


def _cocycle_basis(cx: ChainComplex, cls):
    srcs = cx.labels_in_class(cls)
    if not srcs:
        return []
    mat, _, _ = cx.matrix_from_class(cls)
    kern = intlinalg.kernel_basis(mat, n_cols=len(srcs))
    return [{srcs[i]: col[i] for i in range(len(srcs)) if col[i]} for col in kern]


def massey(a: CocycleElement, b: CocycleElement, c: CocycleElement,
           theta: ThetaBundle, zeta: CocycleElement | None,
           xi: CocycleElement | None, lambda_table: CountTable | None,
           data: FloerData, tables: Mapping | None = None) -> MasseyResult:
    """Triple product representative with its indeterminacy subgroup.

    Requires cup(a, b) = d(zeta) and cup(b, c) = d(xi), and a homotopy
    table whose two faces are the two pants self-compositions.  A missing
    ``lambda_table`` stands for the zero homotopy, valid when the two
    glued tables coincide.
    """
    report = Report()
    for name, el in (("a", a), ("b", b), ("c", c)):
        _require_cochain(el, "massey argument %s" % name)
    pants = theta.get(SLOT_CUP)
    t = table_element(pants, data)

    zeta_el = zeta.element if zeta is not None else TensorElement.zero(1, 0)
    xi_el = xi.element if xi is not None else TensorElement.zero(1, 0)

    ab = cup(a, b, theta, data)
    d_zeta = element_differential(zeta_el, data)
    ok_ab = ab.element.minus_elt(d_zeta).is_zero()
    report.add(CheckItem("cup(a,b) = d(zeta)", ok_ab,
                         witness=None if ok_ab else str(ab.element.minus_elt(d_zeta).sorted_terms()[0][0])))
    bc = cup(b, c, theta, data)
    d_xi = element_differential(xi_el, data)
    ok_bc = bc.element.minus_elt(d_xi).is_zero()
    report.add(CheckItem("cup(b,c) = d(xi)", ok_bc,
                         witness=None if ok_bc else str(bc.element.minus_elt(d_xi).sorted_terms()[0][0])))

    glued_11 = diamond(t, t, 1, 1, data=data)
    glued_21 = diamond(t, t, 2, 1, data=data)
    if lambda_table is None:
        gap = glued_11.minus_elt(glued_21)
        ok_l = gap.is_zero()
        report.add(CheckItem("zero homotopy valid (gluings agree)", ok_l,
                             witness=None if ok_l else str(gap.sorted_terms()[0][0])))
        lam_el = TensorElement.zero(1, 3)
    else:
        ok_shape = (lambda_table.key == SLOT_TRIPLE and lambda_table.q == 1)
        report.add(CheckItem("homotopy table shape", ok_shape))
        lam_el = table_element(lambda_table, data) if ok_shape else TensorElement.zero(1, 3)
        fm = lambda_table.face_map()
        ok_faces = (1, 0) in fm and (1, 1) in fm and tables is not None \
            and fm[(1, 0)] in tables and fm[(1, 1)] in tables
        report.add(CheckItem("homotopy faces resolvable", ok_faces))
        if ok_faces:
            f1 = table_element(tables[fm[(1, 1)]], data)
            f0 = table_element(tables[fm[(1, 0)]], data)
            ok_f1 = f1.minus_elt(glued_11).is_zero()
            ok_f0 = f0.minus_elt(glued_21).is_zero()
            report.add(CheckItem("face(1,1) is the (1,1)-gluing", ok_f1))
            report.add(CheckItem("face(1,0) is the (2,1)-gluing", ok_f0))
            d_lam = element_differential(lam_el, data)
            bd = f1.minus_elt(f0)
            ok_b = d_lam.minus_elt(bd).is_zero()
            report.add(CheckItem("homotopy boundary relation", ok_b))
    if not report.ok:
        raise HypothesisError("massey hypotheses fail", witness=report.first_failure())

    term1 = diamond(diamond(diamond(lam_el, a.element, data=data),
                            b.element, data=data), c.element, data=data)
    term2 = diamond(diamond(t, zeta_el, data=data), c.element, data=data)
    sign = -1 if a.degree % 2 else 1
    term3 = diamond(diamond(t, a.element, data=data), xi_el, data=data)
    rep_el = term1.plus(term2).minus_elt(term3.scaled(sign))
    degree = a.degree + b.degree + c.degree - 1
    rep = _as_cocycle(rep_el, degree, data)
    report.add(CheckItem("representative closed", rep.closed))

    # Indeterminacy subgroup a u HF + HF u c in the representative's degree.
    cx = rank_one_complex(data, "cochain")
    cls_total = -degree % data.modulus if data.modulus else -degree
    gens = []
    for side_tag, h_deg in (("left", degree - a.degree), ("right", degree - c.degree)):
        cls = -h_deg % data.modulus if data.modulus else -h_deg
        for vec in _cocycle_basis(cx, cls):
            h = CocycleElement(TensorElement(1, 0, {((n,), ()): v for n, v in vec.items()}),
                               h_deg, True)
            prod = cup(a, h, theta, data) if side_tag == "left" else cup(h, c, theta, data)
            if not prod.element.is_zero():
                gens.append(prod)
    # Also quotient by coboundaries into this degree.
    up_cls = (cls_total + 1) % data.modulus if data.modulus else cls_total + 1
    bmat, tgts, _ = cx.matrix_from_class(up_cls)
    boundary_cols = []
    for jcol in range(len(bmat[0]) if bmat and bmat[0] else 0):
        boundary_cols.append({tgts[irow]: bmat[irow][jcol]
                              for irow in range(len(tgts)) if bmat[irow][jcol]})

    labels = cx.labels_in_class(cls_total)
    idx = {l: k for k, l in enumerate(labels)}
    cols = []
    for g in gens:
        col = [0] * len(labels)
        for n, v in g.names().items():
            col[idx[n]] = v
        cols.append(col)
    for bvec in boundary_cols:
        col = [0] * len(labels)
        for n, v in bvec.items():
            col[idx[n]] = v
        cols.append(col)
    target = [0] * len(labels)
    for n, v in rep.names().items():
        target[idx[n]] = v
    if labels:
        mat = [[cols[j][i] for j in range(len(cols))] for i in range(len(labels))]
        sol = intlinalg.solve_integer(mat, target) if cols else (
            None if any(target) else [])
        trivial = sol is not None
    else:
        trivial = True
    indeterminacy = [g.names() for g in gens]
    return MasseyResult(rep, indeterminacy, trivial, report)


# -- continuation maps --------------------------------------------------------

def continuation_element(pair_table: CountTable, data: FloerData,
                         data2: FloerData) -> TensorElement:
    if pair_table.key != SLOT_DIAGONAL or pair_table.q != 0:
        raise CompositionError("continuation tables live in slot %s" % SLOT_DIAGONAL)
    if data.modulus != data2.modulus:
        raise ShapeError("continuation requires equal grading moduli")
    el = table_element(pair_table, data, data_plus=data2)
    d_el = _pair_differential(el, data, data2)
    if not d_el.is_zero():
        raise HypothesisError("continuation table is not a chain map",
                              witness=str(d_el.sorted_terms()[0][0]))
    return el


def _pair_differential(el: TensorElement, data: FloerData, data2: FloerData):
    return element_differential(el, data, data_plus=data2)


def continuation(x: CocycleElement, pair_table: CountTable,
                 data: FloerData, data2: FloerData) -> CocycleElement:
    """x -> x <> element(pair_table), landing over ``data2``."""
    _require_chain(x, "continuation")
    el = continuation_element(pair_table, data, data2)
    out = diamond(x.element, el, data=data, y_plus_data=data2)
    closed = element_differential(out, data2).is_zero()
    return CocycleElement(out, x.degree, closed)


def compose_continuations(t_ab: CountTable, t_bc: CountTable,
                          data_a: FloerData, data_b: FloerData,
                          data_c: FloerData) -> CountTable:
    """Table of the composed continuation map; plain integer convolution."""
    ea = continuation_element(t_ab, data_a, data_b)
    eb = continuation_element(t_bc, data_b, data_c)
    entries = {}
    for (ma, pa), va in ea.terms.items():
        for (mb, pb), vb in eb.terms.items():
            if pa[0] != mb[0]:
                continue
            key = (ma, pb)
            entries[key] = entries.get(key, 0) + va * vb
    return CountTable.make(SLOT_DIAGONAL, q=0,
                           label="%s*%s" % (t_ab.label, t_bc.label),
                           entries=entries)


# -- bundle validation ---------------------------------------------------------

CANONICAL_GLUINGS = (
    # (left slot, right slot, i, j, result slot)
    (SLOT_CUP, SLOT_UNIT, 2, 1, SLOT_DIAGONAL),
    (SLOT_FLAT, SLOT_SHARP, 2, 2, SLOT_DIAGONAL),
    (SLOT_CUP, SLOT_CUP, 2, 1, SLOT_TRIPLE),
    (SLOT_CUP, SLOT_CUP, 1, 1, SLOT_TRIPLE),
)


def validate_bundle(theta: ThetaBundle, data: FloerData,
                    strict: bool = False) -> Report:
    report = Report()
    for slot, t in sorted(theta.by_slot.items(), key=lambda kv: str(kv[0])):
        report.extend(check_table(t, data, strict=strict,
                                  tables=theta.all_tables),
                      prefix="table %s " % (t.label or slot))
        report.extend(check_cycle(t, data, tables=theta.all_tables),
                      prefix="table %s " % (t.label or slot))
    for left, right, i, j, result in CANONICAL_GLUINGS:
        if theta.has(left) and theta.has(right) and theta.has(result):
            report.extend(check_gluing(theta.get(left), theta.get(right),
                                       theta.get(result), i, j, data))
    if theta.has(SLOT_DIAGONAL) and theta.has(SLOT_TORUS):
        report.extend(check_self_gluing(theta.get(SLOT_DIAGONAL),
                                        theta.get(SLOT_TORUS), 1, 1, data))
    return report
