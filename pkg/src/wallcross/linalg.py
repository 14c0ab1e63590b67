"""Exact linear algebra over Q and Z.

Everything here works on plain lists/tuples of ints or fractions.Fraction.
Matrices are lists of rows.  All routines are exact; no floating point.

Provided:
  * rational Gaussian elimination (rank, solve, nullspace),
  * integer Hermite and Smith normal forms with transformation matrices,
  * lattice-image membership and integer kernels,
  * strict/non-strict linear feasibility by Fourier-Motzkin elimination
    with strictness tracking.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Mat = list[list[Fraction]]


# ---------------------------------------------------------------------------
# rationals


def frac(x) -> Fraction:
    """Coerce ints, Fractions, or 'p/q' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fracvec(v: Iterable) -> Vec:
    return tuple(frac(x) for x in v)


def format_frac(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dot(a: Sequence, b: Sequence) -> Fraction:
    if len(a) != len(b):
        raise ValueError("length mismatch in dot product")
    return sum((frac(x) * frac(y) for x, y in zip(a, b)), Fraction(0))


# ---------------------------------------------------------------------------
# rational Gaussian elimination


def _copy_mat(rows: Sequence[Sequence]) -> Mat:
    return [[frac(x) for x in row] for row in rows]


def rank(rows: Sequence[Sequence]) -> int:
    m = _copy_mat(rows)
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def solve(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Vec | None, list[Vec]]:
    """Solve A x = b over Q.

    Returns (particular solution or None, nullspace basis).  The nullspace
    basis is returned even when the system is inconsistent.
    """
    a = _copy_mat(rows)
    b = [frac(x) for x in rhs]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        b[r], b[piv] = b[piv], b[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        b[r] = b[r] * inv
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                b[i] = b[i] - f * b[r]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    consistent = all(b[i] == 0 for i in range(r, nrows))
    free = [c for c in range(ncols) if c not in pivots]
    null: list[Vec] = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -a[i][fcol]
        null.append(tuple(v))
    if not consistent:
        return None, null
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = b[i]
    return tuple(x), null


def invert(rows: Sequence[Sequence]) -> Mat:
    """Exact inverse of a square rational matrix."""
    n = len(rows)
    a = _copy_mat(rows)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv[c], inv[piv] = inv[piv], inv[c]
        f = 1 / a[c][c]
        a[c] = [x * f for x in a[c]]
        inv[c] = [x * f for x in inv[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
                inv[i] = [x - f * y for x, y in zip(inv[i], inv[c])]
    return inv


# ---------------------------------------------------------------------------
# integer normal forms


def _int_mat(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        r = []
        for x in row:
            f = frac(x)
            if f.denominator != 1:
                raise ValueError("integer matrix expected")
            r.append(f.numerator)
        out.append(r)
    return out


def hermite_form(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form.

    Returns (H, U) with U unimodular, U @ M = H, H in row echelon form with
    nonnegative pivots and reduced entries above each pivot.
    """
    h = _int_mat(rows)
    n = len(h)
    ncols = len(h[0]) if h else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    r = 0
    for c in range(ncols):
        # gcd-reduce column c below row r
        while True:
            nz = [i for i in range(r, n) if h[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][c]))
            h[r], h[piv] = h[piv], h[r]
            u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, n):
                if h[i][c] != 0:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if r < n and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
            if r == n:
                break
    return h, u


def smith_form(
    rows: Sequence[Sequence],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form with transforms: returns (U, D, V), U @ M @ V = D.

    D is diagonal with d_1 | d_2 | ... ; U, V unimodular.
    """
    d = _int_mat(rows)
    nr = len(d)
    nc = len(d[0]) if d else 0
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def col_op(j, k, q):  # col_k -= q * col_j
        for row in d:
            row[k] -= q * row[j]
        for row in v:
            row[k] -= q * row[j]

    def col_swap(j, k):
        for row in d:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def row_op(i, k, q):  # row_k -= q * row_i
        d[k] = [x - q * y for x, y in zip(d[k], d[i])]
        u[k] = [x - q * y for x, y in zip(u[k], u[i])]

    def row_swap(i, k):
        d[i], d[k] = d[k], d[i]
        u[i], u[k] = u[k], u[i]

    t = 0
    while t < min(nr, nc):
        # find a nonzero pivot in the remaining block
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if d[i][j] != 0:
                    if piv is None or abs(d[i][j]) < abs(d[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])
        while True:
            # clear column t
            again = False
            for i in range(t + 1, nr):
                if d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    row_op(t, i, q)
                    if d[i][t] != 0:
                        row_swap(t, i)
                        again = True
            for j in range(t + 1, nc):
                if d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    col_op(t, j, q)
                    if d[t][j] != 0:
                        col_swap(t, j)
                        again = True
            if not again:
                break
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    # enforce divisibility d_i | d_{i+1} with explicit 2x2 unimodular blocks:
    # P @ diag(a, b) @ Q = diag(gcd, lcm) where xa + yb = gcd,
    # P = [[x, y], [-b/g, a/g]], Q = [[1, -yb/g], [1, xa/g]].
    k = min(nr, nc)

    def apply_rows_2x2(p, i, j):
        d[i], d[j] = (
            [p[0][0] * a + p[0][1] * b for a, b in zip(d[i], d[j])],
            [p[1][0] * a + p[1][1] * b for a, b in zip(d[i], d[j])],
        )
        u[i], u[j] = (
            [p[0][0] * a + p[0][1] * b for a, b in zip(u[i], u[j])],
            [p[1][0] * a + p[1][1] * b for a, b in zip(u[i], u[j])],
        )

    def apply_cols_2x2(q, i, j):
        for row in d:
            row[i], row[j] = (
                row[i] * q[0][0] + row[j] * q[1][0],
                row[i] * q[0][1] + row[j] * q[1][1],
            )
        for row in v:
            row[i], row[j] = (
                row[i] * q[0][0] + row[j] * q[1][0],
                row[i] * q[0][1] + row[j] * q[1][1],
            )

    changed = True
    while changed:
        changed = False
        for i in range(k - 1):
            a, b = d[i][i], d[i + 1][i + 1]
            if a != 0 and b != 0 and b % a != 0:
                g = gcd(a, b)
                x, y = _bezout(a, b)
                p = [[x, y], [-(b // g), a // g]]
                q = [[1, -(y * b) // g], [1, (x * a) // g]]
                apply_rows_2x2(p, i, i + 1)
                apply_cols_2x2(q, i, i + 1)
                for j in (i, i + 1):
                    if d[j][j] < 0:
                        d[j] = [-t_ for t_ in d[j]]
                        u[j] = [-t_ for t_ in u[j]]
                changed = True
            elif a == 0 and b != 0:
                row_swap(i, i + 1)
                col_swap(i, i + 1)
                changed = True
    return u, d, v


def _bezout(a: int, b: int) -> tuple[int, int]:
    """x, y with x*a + y*b = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def smith_diagonal(rows: Sequence[Sequence]) -> list[int]:
    _, d, _ = smith_form(rows)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i] != 0]


def in_image(rows: Sequence[Sequence], target: Sequence) -> bool:
    """Is the integer vector `target` in the Z-span of the matrix columns?"""
    m = _int_mat(rows)
    nr = len(m)
    v = _int_mat([list(target)])[0]
    if len(v) != nr:
        raise ValueError("dimension mismatch")
    u, d, _ = smith_form(m)
    y = [sum(u[i][j] * v[j] for j in range(nr)) for i in range(nr)]
    nc = len(m[0]) if m else 0
    k = min(nr, nc)
    for i in range(nr):
        di = d[i][i] if i < k else 0
        if di == 0:
            if y[i] != 0:
                return False
        elif y[i] % di != 0:
            return False
    return True


def integer_kernel(rows: Sequence[Sequence]) -> list[list[int]]:
    """Basis of {x in Z^n : M x = 0} for an integer matrix M."""
    m = _int_mat(rows)
    nr = len(m)
    nc = len(m[0]) if m else 0
    u, d, v = smith_form(m)
    k = min(nr, nc)
    rk = sum(1 for i in range(k) if d[i][i] != 0)
    return [[v[i][j] for i in range(nc)] for j in range(rk, nc)]


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    ints = [frac(x) for x in vec]
    den = 1
    for f in ints:
        den = den * f.denominator // gcd(den, f.denominator)
    nums = [int(f * den) for f in ints]
    g = 0
    for x in nums:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in nums)


# ---------------------------------------------------------------------------
# linear feasibility (Fourier-Motzkin with strictness tracking)


class Infeasible(Exception):
    pass


def _eliminate_equalities(
    eqs: list[tuple[list[Fraction], Fraction]],
    ineqs: list[tuple[list[Fraction], Fraction, bool]],
    nvars: int,
) -> tuple[list[tuple[list[Fraction], Fraction, bool]], bool]:
    """Substitute equalities away.  Returns (inequalities, consistent)."""
    eqs = [(list(c), r) for c, r in eqs]
    ineqs = [(list(c), r, s) for c, r, s in ineqs]
    remaining: list[tuple[list[Fraction], Fraction]] = eqs
    while True:
        pick = None
        for idx, (c, _r) in enumerate(remaining):
            j = next((k for k in range(nvars) if c[k] != 0), None)
            if j is not None:
                pick = (idx, j)
                break
        if pick is None:
            break
        idx, j = pick
        c0, r0 = remaining.pop(idx)
        inv = 1 / c0[j]
        c0 = [x * inv for x in c0]
        r0 = r0 * inv
        # substitute x_j using c0 . x = r0 into all other constraints
        for t in range(len(remaining)):
            c, r = remaining[t]
            f = c[j]
            if f:
                remaining[t] = ([a - f * b for a, b in zip(c, c0)], r - f * r0)
        for t in range(len(ineqs)):
            c, r, s = ineqs[t]
            f = c[j]
            if f:
                ineqs[t] = ([a - f * b for a, b in zip(c, c0)], r - f * r0, s)
    for c, r in remaining:
        if all(x == 0 for x in c) and r != 0:
            return ineqs, False
    return ineqs, True


def feasible(
    equalities: Sequence[tuple[Sequence, object]],
    inequalities: Sequence[tuple[Sequence, object, bool]],
    nvars: int,
) -> bool:
    """Decide rational feasibility of {A x = b, C x >= d (or > d)}.

    `inequalities` entries are (coeffs, rhs, strict); strict=True means >.
    """
    eqs = [([frac(x) for x in c], frac(r)) for c, r in equalities]
    ins = [([frac(x) for x in c], frac(r), bool(s)) for c, r, s in inequalities]
    ins, ok = _eliminate_equalities(eqs, ins, nvars)
    if not ok:
        return False
    # Fourier-Motzkin on the remaining variables
    for j in range(nvars):
        lower = []  # c[j] > 0 : x_j >= (r - rest)/c[j]
        upper = []  # c[j] < 0
        keep = []
        for c, r, s in ins:
            if c[j] > 0:
                lower.append((c, r, s))
            elif c[j] < 0:
                upper.append((c, r, s))
            else:
                keep.append((c, r, s))
        new = keep
        for cl, rl, sl in lower:
            for cu, ru, su in upper:
                # combine: cl.x >= rl (coeff a > 0), cu.x >= ru (coeff -b < 0)
                a = cl[j]
                b = -cu[j]
                c2 = [b * x + a * y for x, y in zip(cl, cu)]
                r2 = b * rl + a * ru
                new.append((c2, r2, sl or su))
        ins = new
    for c, r, s in ins:
        # all coefficients are zero now
        if s:
            if not (0 > r):
                return False
        else:
            if not (0 >= r):
                return False
    return True


def strict_positive_combination(vectors: Sequence[Sequence], target: Sequence) -> bool:
    """Is target = sum a_i vectors[i] solvable with all a_i > 0?"""
    return _combination(vectors, target, strict=True)


def nonnegative_combination(vectors: Sequence[Sequence], target: Sequence) -> bool:
    """Is target = sum a_i vectors[i] solvable with all a_i >= 0?"""
    return _combination(vectors, target, strict=False)


def _combination(vectors: Sequence[Sequence], target: Sequence, strict: bool) -> bool:
    n = len(vectors)
    if n == 0:
        # the empty combination is the zero vector
        return all(frac(x) == 0 for x in target)
    dim = len(target)
    eqs = []
    for j in range(dim):
        coeffs = [frac(vectors[i][j]) for i in range(n)]
        eqs.append((coeffs, frac(target[j])))
    ineqs = []
    for i in range(n):
        c = [Fraction(0)] * n
        c[i] = Fraction(1)
        ineqs.append((c, Fraction(0), strict))
    return feasible(eqs, ineqs, n)
