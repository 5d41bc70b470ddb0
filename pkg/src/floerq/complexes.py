"""Graded free chain complexes over the integers.

A complex stores an ordered basis of labelled generators with degrees and a
sparse differential ``diff[(target, source)] = coefficient``.  Tensor
products follow the Koszul rule ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``
and duals the rule ``d f = (-1)^|f| (f o d)``, which together make the
contraction pairing a chain map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import intlinalg
from .errors import GradingError, NotAComplexError, ShapeError
from .graded import Degree, check_permutation, graded_sign


@dataclass(frozen=True)
class GradedBasis:
    """Ordered labelled generators with degrees; labels are unique."""

    entries: tuple  # tuple of (label, Degree)

    def __post_init__(self):
        labels = [l for l, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise ShapeError("duplicate basis labels")
        moduli = {d.modulus for _, d in self.entries}
        if len(moduli) > 1:
            raise GradingError("mixed grading moduli in one basis: %s" % moduli)

    @property
    def labels(self):
        return tuple(l for l, _ in self.entries)

    @property
    def modulus(self) -> int:
        return self.entries[0][1].modulus if self.entries else 0

    def degree(self, label) -> Degree:
        for l, d in self.entries:
            if l == label:
                return d
        raise ShapeError("unknown basis label %r" % (label,))


class ChainComplex:
    """Free Z-complex with degree -1 differential and d^2 = 0."""

    def __init__(self, basis: GradedBasis, diff: Mapping, check: bool = True):
        self.basis = basis
        self._degree = dict(basis.entries)
        self.diff = {k: int(v) for k, v in diff.items() if v}
        if check:
            self._validate()

    def _validate(self):
        for (tgt, src), _ in self.diff.items():
            if tgt not in self._degree or src not in self._degree:
                raise ShapeError("differential entry on unknown label (%r, %r)" % (tgt, src))
            if self._degree[tgt] != self._degree[src].shifted(-1):
                raise GradingError(
                    "entry (%r, %r) does not drop degree by 1" % (tgt, src)
                )
        sq = self.compose_sparse(self.diff, self.diff)
        if sq:
            key = next(iter(sq))
            raise NotAComplexError("d^2 != 0 at %r" % (key,))

    # -- basic accessors ---------------------------------------------------
    @property
    def labels(self):
        return self.basis.labels

    @property
    def modulus(self) -> int:
        return self.basis.modulus

    def degree(self, label) -> Degree:
        return self._degree[label]

    def differential_of(self, label):
        """Column of the differential as {target: coefficient}."""
        return {t: v for (t, s), v in self.diff.items() if s == label}

    def apply_diff(self, vector: Mapping):
        out = {}
        for (tgt, src), v in self.diff.items():
            c = vector.get(src)
            if c:
                out[tgt] = out.get(tgt, 0) + v * c
        return {k: v for k, v in out.items() if v}

    @staticmethod
    def compose_sparse(f: Mapping, g: Mapping):
        """Sparse product (f o g) of basis-indexed matrices."""
        by_src = {}
        for (tgt, src), v in f.items():
            by_src.setdefault(src, []).append((tgt, v))
        out = {}
        for (mid, src), v in g.items():
            for tgt, w in by_src.get(mid, ()):
                key = (tgt, src)
                out[key] = out.get(key, 0) + w * v
        return {k: v for k, v in out.items() if v}

    def d_squared_is_zero(self) -> bool:
        return not self.compose_sparse(self.diff, self.diff)

    # -- degreewise matrices -----------------------------------------------
    def degree_classes(self):
        return sorted({d.normalized() for _, d in self.basis.entries})

    def labels_in_class(self, cls):
        return [l for l, d in self.basis.entries if d.normalized() == cls]

    def _class_of(self, label):
        return self._degree[label].normalized()

    def matrix_from_class(self, cls):
        """Dense matrix of d restricted to sources of class ``cls``."""
        srcs = self.labels_in_class(cls)
        tgt_cls = Degree(cls - 1, self.modulus).normalized()
        tgts = self.labels_in_class(tgt_cls)
        idx = {l: i for i, l in enumerate(tgts)}
        mat = [[0] * len(srcs) for _ in tgts]
        for j, s in enumerate(srcs):
            for t, v in self.differential_of(s).items():
                mat[idx[t]][j] = v
        return mat, tgts, srcs


def complex_from_generators(gens: Sequence, diff: Mapping, modulus: int = 0,
                            check: bool = True) -> ChainComplex:
    """Build a complex from ``(label, lift)`` pairs and a sparse differential."""
    basis = GradedBasis(tuple((l, Degree(d, modulus)) for l, d in gens))
    return ChainComplex(basis, diff, check=check)


POINT_LABEL = "*"


def point_complex(modulus: int = 0) -> ChainComplex:
    """The unit for tensor: a single generator in degree 0, zero differential."""
    return complex_from_generators([(POINT_LABEL, 0)], {}, modulus)


# -- tensor products -------------------------------------------------------

def tensor(c1: ChainComplex, c2: ChainComplex) -> ChainComplex:
    """Binary tensor product; labels are pairs ``(l1, l2)``."""
    if c1.modulus != c2.modulus:
        raise GradingError(
            "tensor factors have moduli %d and %d" % (c1.modulus, c2.modulus)
        )
    entries = []
    for l1, d1 in c1.basis.entries:
        for l2, d2 in c2.basis.entries:
            entries.append(((l1, l2), Degree(d1.lift + d2.lift, d1.modulus)))
    diff = {}
    for (t, s), v in c1.diff.items():
        for l2 in c2.labels:
            diff[((t, l2), (s, l2))] = v
    for l1, d1 in c1.basis.entries:
        sign = -1 if d1.parity else 1
        for (t, s), v in c2.diff.items():
            key = ((l1, t), (l1, s))
            diff[key] = diff.get(key, 0) + sign * v
    return ChainComplex(GradedBasis(tuple(entries)), diff, check=False)


def tensor_many(factors: Sequence[ChainComplex]) -> ChainComplex:
    """k-fold tensor with flat tuple labels ``(l1, ..., lk)``."""
    if not factors:
        raise ShapeError("empty tensor product")
    moduli = {c.modulus for c in factors}
    if len(moduli) > 1:
        raise GradingError("mixed moduli in tensor product: %s" % moduli)
    modulus = moduli.pop()

    labels = [()]
    for c in factors:
        labels = [t + (l,) for t in labels for l in c.labels]
    entries = []
    for t in labels:
        lift = sum(factors[i].degree(t[i]).lift for i in range(len(factors)))
        entries.append((t, Degree(lift, modulus)))
    diff = {}
    for t in labels:
        sign = 1
        for i, c in enumerate(factors):
            col = c.differential_of(t[i])
            for tgt_i, v in col.items():
                tgt = t[:i] + (tgt_i,) + t[i + 1:]
                key = (tgt, t)
                diff[key] = diff.get(key, 0) + sign * v
            sign *= -1 if c.degree(t[i]).parity else 1
    return ChainComplex(GradedBasis(tuple(entries)), diff, check=False)


# -- duals -----------------------------------------------------------------

def dual(c: ChainComplex) -> ChainComplex:
    """Dual complex: same labels, degrees negated, signed transpose.

    The sign is by source parity, which is what makes the contraction
    pairing a chain map.  Applying ``dual`` twice negates the
    differential under the naive label identification; the canonical
    comparison is :func:`double_dual_identification`.
    """
    entries = tuple((l, d.negated()) for l, d in c.basis.entries)
    diff = {}
    for (tgt, src), v in c.diff.items():
        sign = -1 if c.degree(tgt).parity else 1
        diff[(src, tgt)] = sign * v
    return ChainComplex(GradedBasis(entries), diff, check=False)


def double_dual_identification(c: ChainComplex):
    """The canonical chain iso C -> dual(dual(C)) as a sparse matrix.

    Sends a generator of degree q to (-1)^q times itself; with the
    source-parity sign convention this is the unique diagonal +-1 map
    commuting with the differentials.
    """
    return {(l, l): (-1 if d.parity else 1) for l, d in c.basis.entries}


# -- elements, contraction, permutation action ------------------------------

def contract(x: Mapping, f: Mapping) -> int:
    """Pairing <x, f> = sum over common labels; <b, b^> = 1."""
    if len(x) > len(f):
        x, f = f, x
    return sum(v * f[k] for k, v in x.items() if k in f)


def permute_factors(rho, x: Mapping, factors: Sequence[ChainComplex]):
    """Reorder tensor factors of an element with the graded sign.

    ``x`` maps flat label tuples to coefficients; entry ``t`` becomes
    ``reorder(rho, t)`` scaled by the graded sign of ``rho`` on the
    degrees of ``t``.
    """
    rho = check_permutation(rho)
    if len(rho) != len(factors):
        raise ShapeError("permutation on %d letters for %d factors" % (len(rho), len(factors)))
    out = {}
    for t, v in x.items():
        if len(t) != len(factors):
            raise ShapeError("tuple %r does not match %d factors" % (t, len(factors)))
        degs = [factors[i].degree(t[i]) for i in range(len(t))]
        sign = graded_sign(rho, degs)
        nt = tuple(t[r - 1] for r in rho)
        out[nt] = out.get(nt, 0) + sign * v
    return {k: v for k, v in out.items() if v}


# -- chain map check ---------------------------------------------------------

def is_chain_map(f: Mapping, c1: ChainComplex, c2: ChainComplex):
    """Check d2 o f = (-1)^s f o d1 for a degree-homogeneous map ``f``.

    Returns ``(True, None)`` or ``(False, witness_source_label)``.
    """
    shift = None
    for (tgt, src), v in f.items():
        if not v:
            continue
        s = c2.degree(tgt).lift - c1.degree(src).lift
        if shift is None:
            shift = s
            continue
        same = (s - shift) % c1.modulus == 0 if c1.modulus else s == shift
        if not same:
            raise GradingError("map is not degree-homogeneous")
    if shift is None:
        shift = 0
    sign = -1 if shift % 2 else 1
    lhs = ChainComplex.compose_sparse(c2.diff, f)
    rhs = ChainComplex.compose_sparse(f, c1.diff)
    defect = dict(lhs)
    for k, v in rhs.items():
        defect[k] = defect.get(k, 0) - sign * v
    defect = {k: v for k, v in defect.items() if v}
    if not defect:
        return True, None
    (tgt, src) = next(iter(sorted(defect, key=repr)))
    return False, src


# -- homology ----------------------------------------------------------------

def homology(c: ChainComplex, mod2: bool = False):
    """Per-degree-class homology ``{class: (free_rank, [torsion...])}``.

    Torsion coefficients are the invariant factors > 1 of the incoming
    differential, in divisibility order.  With ``mod2`` set, returns
    ``{class: rank}`` over GF(2) instead (debug aid, never the default).
    """
    if not c.d_squared_is_zero():
        raise NotAComplexError("d^2 != 0")
    out = {}
    for cls in c.degree_classes():
        n = len(c.labels_in_class(cls))
        a_mat, _, _ = c.matrix_from_class(cls)  # out of this class
        up = Degree(cls + 1, c.modulus).normalized()
        b_mat, tgts, _ = c.matrix_from_class(up)  # into this class
        if mod2:
            ra = intlinalg.rank_mod2(a_mat) if a_mat else 0
            rb = intlinalg.rank_mod2(b_mat) if b_mat else 0
            out[cls] = n - ra - rb
            continue
        ra = intlinalg.integer_rank(a_mat) if a_mat else 0
        factors = intlinalg.invariant_factors(b_mat) if b_mat else []
        rb = len(factors)
        torsion = [d for d in factors if d > 1]
        out[cls] = (n - ra - rb, torsion)
    return out


def homology_basis(c: ChainComplex, cls):
    """Cycle representatives of a basis of the free part of H in class ``cls``.

    Returns a list of ``{label: coeff}`` vectors.  Representatives are
    kernel vectors chosen, via Smith form of the incoming boundary matrix
    expressed in kernel coordinates, to span a complement of the image.
    """
    srcs = c.labels_in_class(cls)
    if not srcs:
        return []
    a_mat, _, _ = c.matrix_from_class(cls)
    kern = intlinalg.kernel_basis(a_mat, n_cols=len(srcs))
    if not kern:
        return []
    up = Degree(cls + 1, c.modulus).normalized()
    b_mat, _, up_srcs = c.matrix_from_class(up)
    # Express the image inside kernel coordinates: solve K y = b_col.
    k_mat = [[kern[j][i] for j in range(len(kern))] for i in range(len(srcs))]
    img_cols = []
    for j in range(len(up_srcs)):
        col = [b_mat[i][j] for i in range(len(srcs))]
        y = intlinalg.solve_integer(k_mat, col)
        if y is None:
            raise NotAComplexError("image not contained in kernel")
        img_cols.append(y)
    nk = len(kern)
    if img_cols:
        rows = [[img_cols[j][i] for j in range(len(img_cols))] for i in range(nk)]
        diag, left, _ = intlinalg.smith_normal_form(rows)
        rank = len([d for d in diag if d])
        # Image spans the first ``rank`` columns of left^-1 (up to factors);
        # the remaining columns of left^-1 give a complement.
        inv = _unimodular_inverse(left)
        free_coords = [[inv[i][j] for i in range(nk)] for j in range(rank, nk)]
    else:
        free_coords = [[1 if i == j else 0 for i in range(nk)] for j in range(nk)]
    reps = []
    for coeffs in free_coords:
        vec = {}
        for j, cf in enumerate(coeffs):
            if cf:
                for i, l in enumerate(srcs):
                    if kern[j][i]:
                        vec[l] = vec.get(l, 0) + cf * kern[j][i]
        reps.append({k: v for k, v in vec.items() if v})
    return reps


def _unimodular_inverse(u):
    n = len(u)
    cols = []
    for i in range(n):
        e = [1 if k == i else 0 for k in range(n)]
        x = intlinalg.solve_integer(u, e)
        if x is None:
            raise ShapeError("matrix is not invertible over Z")
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]
