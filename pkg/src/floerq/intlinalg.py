"""Exact linear algebra over the integers.

Dense matrices are lists of rows of Python ints, so all arithmetic is
arbitrary precision.  Everything here is elementary: Smith normal form with
unimodular transforms, rational rank by fraction-free elimination, integer
kernels, and solving A x = b over the integers.
"""

from __future__ import annotations

from fractions import Fraction


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    if not a or not b:
        return []
    n = len(b)
    cols = len(b[0])
    out = []
    for row in a:
        acc = [0] * cols
        for k, v in enumerate(row):
            if v:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        acc[j] += v * brow[j]
        out.append(acc)
    return out


def mat_vec(a, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def smith_normal_form(a):
    """Return ``(diag, left, right)`` with ``left @ a @ right`` diagonal.

    ``diag`` is the list of diagonal entries, non-negative and in
    divisibility order; ``left`` and ``right`` are unimodular.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    h = [list(row) for row in a]
    left = identity_matrix(m)
    right = identity_matrix(n)

    def swap_rows(i, j):
        h[i], h[j] = h[j], h[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in h:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row[dst] += c * row[src]
        hs, hd = h[src], h[dst]
        for k in range(n):
            hd[k] += c * hs[k]
        ls, ld = left[src], left[dst]
        for k in range(m):
            ld[k] += c * ls[k]

    def add_col(src, dst, c):
        for row in h:
            row[dst] += c * row[src]
        for row in right:
            row[dst] += c * row[src]

    def pivot_at(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = h[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        return best

    t = 0
    while t < min(m, n):
        best = pivot_at(t)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        # Clear row and column t; restart if a reduction leaves a remainder
        # smaller than the pivot.
        dirty = False
        for i in range(t + 1, m):
            if h[i][t]:
                q = h[i][t] // h[t][t]
                add_row(t, i, -q)
                if h[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if h[t][j]:
                q = h[t][j] // h[t][t]
                add_col(t, j, -q)
                if h[t][j]:
                    dirty = True
        if dirty:
            continue
        t += 1

    # Non-negative diagonal.
    for i in range(min(m, n)):
        if h[i][i] < 0:
            for k in range(n):
                h[i][k] = -h[i][k]
            for k in range(m):
                left[i][k] = -left[i][k]

    # Enforce the divisibility chain d_i | d_{i+1}.
    r = min(m, n)
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a_, b_ = h[i][i], h[i + 1][i + 1]
            if a_ and b_ and b_ % a_ != 0:
                add_col(i + 1, i, 1)
                # Re-diagonalize the 2x2 block with general pivoting.
                _rediagonalize(h, left, right, i, m, n)
                changed = True
            elif a_ == 0 and b_ != 0:
                swap_rows(i, i + 1)
                swap_cols(i, i + 1)
                changed = True
    diag = [h[i][i] for i in range(r)]
    return diag, left, right


def _rediagonalize(h, left, right, t, m, n):
    # Local elimination restricted to rows/cols >= t, as in the main loop.
    def swap_rows(i, j):
        h[i], h[j] = h[j], h[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in h:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        hs, hd = h[src], h[dst]
        for k in range(n):
            hd[k] += c * hs[k]
        ls, ld = left[src], left[dst]
        for k in range(m):
            ld[k] += c * ls[k]

    def add_col(src, dst, c):
        for row in h:
            row[dst] += c * row[src]
        for row in right:
            row[dst] += c * row[src]

    tt = t
    while tt < min(m, n):
        best = None
        for i in range(tt, m):
            for j in range(tt, n):
                v = h[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        if i != tt:
            swap_rows(tt, i)
        if j != tt:
            swap_cols(tt, j)
        dirty = False
        for i in range(tt + 1, m):
            if h[i][tt]:
                q = h[i][tt] // h[tt][tt]
                add_row(tt, i, -q)
                if h[i][tt]:
                    dirty = True
        for j in range(tt + 1, n):
            if h[tt][j]:
                q = h[tt][j] // h[tt][tt]
                add_col(tt, j, -q)
                if h[tt][j]:
                    dirty = True
        if dirty:
            continue
        if h[tt][tt] < 0:
            for k in range(n):
                h[tt][k] = -h[tt][k]
            for k in range(m):
                left[tt][k] = -left[tt][k]
        tt += 1


def invariant_factors(a):
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    diag, _, _ = smith_normal_form(a)
    return [d for d in diag if d != 0]


def integer_rank(a):
    return len(invariant_factors(a))


def rational_rank(a):
    """Rank over Q by straightforward fraction elimination (independent of SNF)."""
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [[Fraction(v) for v in row] for row in a]
    rank = 0
    col = 0
    while rank < m and col < n:
        pivot = next((i for i in range(rank, m) if rows[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for i in range(rank + 1, m):
            if rows[i][col] != 0:
                f = rows[i][col] / pv
                rows[i] = [rows[i][j] - f * rows[rank][j] for j in range(n)]
        rank += 1
        col += 1
    return rank


def rank_mod2(a):
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [sum((v & 1) << j for j, v in enumerate(row)) for row in a]
    rank = 0
    for col in range(n):
        mask = 1 << col
        pivot = next((i for i in range(rank, m) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(m):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def kernel_basis(a, n_cols=None):
    """Basis of the integer kernel of ``a`` (columns as lists)."""
    if not a:
        n = n_cols or 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    diag, _, right = smith_normal_form(a)
    n = len(a[0])
    rank = len([d for d in diag if d != 0])
    return [[right[i][j] for i in range(n)] for j in range(rank, n)]


def solve_integer(a, b):
    """One integer solution x of A x = b, or ``None`` if there is none."""
    m = len(a)
    if m == 0:
        return []
    n = len(a[0])
    if n == 0:
        return [] if all(v == 0 for v in b) else None
    diag, left, right = smith_normal_form(a)
    z = mat_vec(left, b)
    y = [0] * n
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if z[i] != 0:
                return None
        else:
            if z[i] % d != 0:
                return None
            if i < n:
                y[i] = z[i] // d
    return mat_vec(right, y)
