"""Small dense linear algebra over exact rationals, with float fallbacks.

Exact mode is the point: nullspace dimensions and table comparisons must not
depend on a tolerance. Rational input therefore goes through fraction-free
(Bareiss) elimination on integer-cleared rows; only genuinely floating input
is handed to numpy.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DegeneratePlaneError, InputError
from .scalars import TOLERANCE, Scalar, is_exact, sqrt_scalar


def all_exact(values) -> bool:
    return all(is_exact(x) for x in values)


def _flatten(rows):
    return [x for row in rows for x in row]


# --- exact elimination ------------------------------------------------------


def _integer_rows(rows: Sequence[Sequence[Scalar]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (nullspace-preserving)."""
    out = []
    for row in rows:
        fracs = [Fraction(x) for x in row]
        scale = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
        out.append([int(f * scale) for f in fracs])
    return out


def _bareiss_echelon(mat: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (matrix, pivot columns)."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                # Bareiss two-step update; the division by the previous pivot
                # is exact over the integers.
                mat[i][j] = (mat[i][j] * mat[r][c] - mat[r][j] * mat[i][c]) // prev
            mat[i][c] = 0
        prev = mat[r][c]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def _primitive(vec: list[Fraction]) -> list[Fraction]:
    """Scale to coprime integers with positive leading entry."""
    scale = math.lcm(*(f.denominator for f in vec))
    ints = [int(f * scale) for f in vec]
    g = math.gcd(*(abs(x) for x in ints))
    if g:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


def nullspace_exact(rows: Sequence[Sequence[Scalar]], ncols: int) -> list[list[Fraction]]:
    mat = _integer_rows(rows)
    if not mat:
        mat = [[0] * ncols]
    echelon, pivots = _bareiss_echelon(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x: list[Fraction] = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        # Back-substitute pivot variables from the bottom up.
        for r in reversed(range(len(pivots))):
            c = pivots[r]
            s = sum((Fraction(echelon[r][j]) * x[j] for j in range(c + 1, ncols)),
                    Fraction(0))
            x[c] = -s / Fraction(echelon[r][c])
        basis.append(_primitive(x))
    return basis


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int) -> list[list[Scalar]]:
    """Basis of {x : A x = 0}. Exact rows use Bareiss, floats use SVD."""
    if all_exact(_flatten(rows)):
        return nullspace_exact(rows, ncols)
    a = np.array([[float(x) for x in row] for row in rows], dtype=float)
    if a.size == 0:
        a = np.zeros((1, ncols))
    _, s, vt = np.linalg.svd(a)
    tol = max(a.shape) * (s[0] if len(s) else 0.0) * 1e-12 + TOLERANCE
    null_rows = [vt[i] for i in range(vt.shape[0]) if i >= len(s) or s[i] <= tol]
    out = []
    for row in null_rows:
        lead = next((x for x in row if abs(x) > TOLERANCE), 1.0)
        out.append([float(x) / math.copysign(1.0, lead) for x in row])
    return out


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    flat = _flatten(rows)
    if not flat:
        return 0
    if all_exact(flat):
        _, pivots = _bareiss_echelon(_integer_rows(rows))
        return len(pivots)
    a = np.array([[float(x) for x in row] for row in rows], dtype=float)
    return int(np.linalg.matrix_rank(a, tol=TOLERANCE))


def solve_many(matrix: Sequence[Sequence[Scalar]],
               rhs_list: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Solve A x = b for each b in rhs_list; one elimination, many columns."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise InputError("solve_many needs a square matrix")
    if all_exact(_flatten(matrix)) and all_exact(_flatten(rhs_list)):
        aug = [[Fraction(matrix[i][j]) for j in range(n)]
               + [Fraction(b[i]) for b in rhs_list] for i in range(n)]
        width = n + len(rhs_list)
        for c in range(n):
            pivot_row = next((i for i in range(c, n) if aug[i][c] != 0), None)
            if pivot_row is None:
                raise InputError("singular matrix in exact solve")
            aug[c], aug[pivot_row] = aug[pivot_row], aug[c]
            inv = 1 / aug[c][c]
            aug[c] = [x * inv for x in aug[c]]
            for i in range(n):
                if i != c and aug[i][c] != 0:
                    f = aug[i][c]
                    aug[i] = [aug[i][j] - f * aug[c][j] for j in range(width)]
        return [[aug[i][n + k] for i in range(n)] for k in range(len(rhs_list))]
    a = np.array([[float(x) for x in row] for row in matrix], dtype=float)
    b = np.array([[float(x) for x in rhs] for rhs in rhs_list], dtype=float).T
    try:
        sol = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise InputError(f"singular matrix in solve: {exc}") from None
    return [list(sol[:, k]) for k in range(sol.shape[1])]


# --- metric helpers ---------------------------------------------------------


def inner(gram: Sequence[Sequence[Scalar]], u: Sequence[Scalar],
          v: Sequence[Scalar]) -> Scalar:
    n = len(gram)
    total: Scalar = 0
    for i in range(n):
        ui = u[i]
        if is_exact(ui) and ui == 0:
            continue
        row = gram[i]
        total = total + ui * sum(row[j] * v[j] for j in range(n))
    return total


def determinant(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    n = len(matrix)
    if all_exact(_flatten(matrix)):
        m = [[Fraction(x) for x in row] for row in matrix]
        det = Fraction(1)
        for c in range(n):
            pivot_row = next((i for i in range(c, n) if m[i][c] != 0), None)
            if pivot_row is None:
                return Fraction(0)
            if pivot_row != c:
                m[c], m[pivot_row] = m[pivot_row], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] * inv
                    m[i] = [m[i][j] - f * m[c][j] for j in range(n)]
        return det
    return float(np.linalg.det(np.array([[float(x) for x in row] for row in matrix])))


def is_positive_definite(gram: Sequence[Sequence[Scalar]]) -> bool:
    """Sylvester minors in exact mode, eigenvalue signs in floating mode."""
    n = len(gram)
    if all_exact(_flatten(gram)):
        for k in range(1, n + 1):
            minor = [[gram[i][j] for j in range(k)] for i in range(k)]
            if determinant(minor) <= 0:
                return False
        return True
    a = np.array([[float(x) for x in row] for row in gram], dtype=float)
    return bool(np.linalg.eigvalsh(a).min() > TOLERANCE)


def gram_schmidt(gram: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Orthogonalize the standard basis against the metric, no normalization.

    Square roots are deliberately deferred: downstream sectional curvature
    needs only ratios, so rational metrics stay rational throughout.
    """
    n = len(gram)
    basis: list[list[Scalar]] = []
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        b: list[Scalar] = e
        for prev in basis:
            coeff = inner(gram, b, prev) / inner(gram, prev, prev)
            b = [b[j] - coeff * prev[j] for j in range(n)]
        basis.append(b)
    return basis


def orthonormal_pair(gram: Sequence[Sequence[Scalar]], u: Sequence[Scalar],
                     v: Sequence[Scalar]) -> tuple[list[Scalar], list[Scalar]]:
    """Orthonormal (u_hat, v_hat) spanning the same plane, pole ray preserved.

    Stays exact when both norms are perfect rational squares, else floats.
    """
    uu = inner(gram, u, u)
    if is_exact(uu) and uu == 0:
        raise DegeneratePlaneError("zero vector cannot span a plane")
    nu = sqrt_scalar(uu)
    u_hat = [x / nu for x in u]
    coeff = inner(gram, u, v) / uu
    w = [v[j] - coeff * u[j] for j in range(len(v))]
    ww = inner(gram, w, w)
    if is_exact(ww) and ww == 0:
        raise DegeneratePlaneError("spanning vectors are linearly dependent")
    nw = sqrt_scalar(ww)
    return u_hat, [x / nw for x in w]
