"""Levi-Civita connection and curvature of a left-invariant metric.

All tensors live on the Lie algebra: for left-invariant fields the Koszul
formula loses its derivative terms and reads

    2 g(nabla_U V, W) = g([U,V], W) - g([V,W], U) + g([W,U], V).

Curvature convention: R(U,V)W = nabla_U nabla_V W - nabla_V nabla_U W
- nabla_[U,V] W. Sectional curvature of span{u, v} is
g(R(v,u)u, v) / (g(u,u) g(v,v) - g(u,v)^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import LieAlgebra, MetricTensor, Vector, as_vector
from .errors import (DegeneratePlaneError, DimensionMismatchError, InputError,
                     PreconditionError)
from .scalars import Scalar, approx_equal, is_exact_zero, is_zero, scalar_to_json


class Connection:
    """Christoffel table gamma[i][j] = coefficients of nabla_{e_i} e_j."""

    def __init__(self, alg: LieAlgebra, metric: MetricTensor, gamma):
        self.algebra = alg
        self.metric = metric
        self.gamma = tuple(tuple(tuple(row) for row in block) for block in gamma)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def nabla(self, i: int, j: int) -> Vector:
        return Vector(self.gamma[i][j])

    def derivative(self, u, v) -> Vector:
        """nabla_u v for left-invariant u, v (bilinear over scalars)."""
        u = as_vector(u, self.dim)
        v = as_vector(v, self.dim)
        out = [Fraction(0)] * self.dim
        for i in range(self.dim):
            if is_exact_zero(u[i]):
                continue
            for j in range(self.dim):
                if is_exact_zero(v[j]):
                    continue
                row = self.gamma[i][j]
                for k in range(self.dim):
                    if row[k] != 0:
                        out[k] = out[k] + u[i] * v[j] * row[k]
        return Vector(out)

    def torsion(self, i: int, j: int) -> Vector:
        """nabla_i e_j - nabla_j e_i - [e_i, e_j]; zero for Levi-Civita."""
        return self.nabla(i, j) - self.nabla(j, i) - self.algebra.bracket_basis(i, j)

    def compatibility_residual(self, i: int, j: int, k: int) -> Scalar:
        """g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k); zero iff metric parallel."""
        ej = Vector.basis(self.dim, j)
        ek = Vector.basis(self.dim, k)
        return self.metric.inner(self.nabla(i, j), ek) + self.metric.inner(ej, self.nabla(i, k))


def levi_civita(alg: LieAlgebra, metric: MetricTensor) -> Connection:
    """Solve the Koszul system for every basis pair.

    The right-hand side is assembled from structure constants; one Gram
    elimination serves all dim^2 pairs. Exact input stays exact.
    """
    if metric.dim != alg.dim:
        raise DimensionMismatchError("metric dimension differs from algebra")
    if not metric.is_positive_definite():
        raise InputError("metric must be positive definite")
    n = alg.dim
    g = metric.gram
    c = alg.structure

    def lowered_bracket(a: int, b: int, k: int) -> Scalar:
        return sum(c[a][b][m] * g[m][k] for m in range(n))

    half = Fraction(1, 2)
    rhs_list = []
    for i in range(n):
        for j in range(n):
            rhs_list.append([
                half * (lowered_bracket(i, j, k)
                        - lowered_bracket(j, k, i)
                        + lowered_bracket(k, i, j))
                for k in range(n)
            ])
    solutions = linalg.solve_many(g, rhs_list)
    gamma = [[solutions[i * n + j] for j in range(n)] for i in range(n)]
    return Connection(alg, metric, gamma)


class CurvatureTensor:
    """Dense table r[i][j][k][l]: R(e_i, e_j) e_k = sum_l r[i][j][k][l] e_l."""

    def __init__(self, conn: Connection, table):
        self.connection = conn
        self.table = tuple(tuple(tuple(tuple(row) for row in block) for block in plane)
                           for plane in table)

    @property
    def algebra(self) -> LieAlgebra:
        return self.connection.algebra

    @property
    def metric(self) -> MetricTensor:
        return self.connection.metric

    @property
    def dim(self) -> int:
        return self.connection.dim

    def basis_value(self, i: int, j: int, k: int) -> Vector:
        return Vector(self.table[i][j][k])

    def lowered(self, i: int, j: int, k: int, l: int) -> Scalar:
        """g(R(e_i, e_j) e_k, e_l)."""
        el = Vector.basis(self.dim, l)
        return self.metric.inner(self.basis_value(i, j, k), el)


def riemann_tensor(conn: Connection) -> CurvatureTensor:
    """Contract the connection into the full curvature table."""
    n = conn.dim
    gamma = conn.gamma
    c = conn.algebra.structure
    table = [[[[Fraction(0)] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                row = table[i][j][k]
                for m in range(n):
                    gjk = gamma[j][k][m]
                    gik = gamma[i][k][m]
                    cij = c[i][j][m]
                    for l in range(n):
                        acc = row[l]
                        if gjk != 0:
                            acc = acc + gjk * gamma[i][m][l]
                        if gik != 0:
                            acc = acc - gik * gamma[j][m][l]
                        if cij != 0:
                            acc = acc - cij * gamma[m][k][l]
                        row[l] = acc
    return CurvatureTensor(conn, table)


def curvature_apply(rt: CurvatureTensor, u, v, w) -> Vector:
    """R(u, v)w by trilinear contraction of the dense table."""
    n = rt.dim
    u = as_vector(u, n)
    v = as_vector(v, n)
    w = as_vector(w, n)
    out = [Fraction(0)] * n
    for i in range(n):
        if is_exact_zero(u[i]):
            continue
        for j in range(n):
            if is_exact_zero(v[j]):
                continue
            uv = u[i] * v[j]
            for k in range(n):
                if is_exact_zero(w[k]):
                    continue
                row = rt.table[i][j][k]
                for l in range(n):
                    if row[l] != 0:
                        out[l] = out[l] + uv * w[k] * row[l]
    return Vector(out)


def sectional(rt: CurvatureTensor, metric: MetricTensor, u, v) -> tuple[Scalar, Scalar]:
    """Sectional curvature of span{u, v}.

    Returns (numerator, value): the numerator g(R(v,u)u, v) matches the
    printed per-case K(U,V) polynomials (which assume an orthonormal pair),
    the value divides by the Gram determinant and is plane-invariant.
    """
    n = rt.dim
    u = as_vector(u, n)
    v = as_vector(v, n)
    numerator = metric.inner(curvature_apply(rt, v, u, u), v)
    den = metric.inner(u, u) * metric.inner(v, v) - metric.inner(u, v) ** 2
    if is_zero(den):
        raise DegeneratePlaneError("sectional curvature needs independent spanning vectors")
    return numerator, numerator / den


@dataclass
class PlaneInvarianceReport:
    value: Scalar
    value_transformed: Scalar

    @property
    def passed(self) -> bool:
        return approx_equal(self.value, self.value_transformed)

    def to_dict(self, precision: int = 12) -> dict:
        return {"value": scalar_to_json(self.value, precision),
                "value_transformed": scalar_to_json(self.value_transformed, precision),
                "passed": self.passed}


def sectional_plane_invariance_check(rt: CurvatureTensor, metric: MetricTensor,
                                     u, v, transform) -> PlaneInvarianceReport:
    """Recompute sectional curvature after an invertible 2x2 change of span.

    transform = (a, b, c, d) maps the pair to (a u + b v, c u + d v).
    """
    a, b, c, d = transform
    if is_zero(a * d - b * c):
        raise PreconditionError("plane transform must be invertible (det != 0)")
    n = rt.dim
    u = as_vector(u, n)
    v = as_vector(v, n)
    u2 = u.scale(a) + v.scale(b)
    v2 = u.scale(c) + v.scale(d)
    _, value = sectional(rt, metric, u, v)
    _, value2 = sectional(rt, metric, u2, v2)
    return PlaneInvarianceReport(value, value2)


def scalar_curvature(rt: CurvatureTensor, metric: MetricTensor) -> Scalar:
    """Sum of sectional curvatures over ordered orthonormal basis pairs.

    The basis is Gram-Schmidt orthogonalized without normalization (exact for
    rational metrics); each plane is then normalized by its Gram determinant,
    which is all the sum needs. Ordered pairs j != k count each plane twice.
    """
    ortho = linalg.gram_schmidt(metric.gram)
    n = rt.dim
    total: Scalar = Fraction(0)
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            bj = Vector(ortho[j])
            bk = Vector(ortho[k])
            _, value = sectional(rt, metric, bj, bk)
            total = total + value
    return total
