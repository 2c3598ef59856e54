"""Randers metrics F = sqrt(g(y,y)) + g(Q,y) built from parallel drifts.

A left-invariant drift Q with nabla Q = 0 and g(Q,Q) < 1 gives a Berwald-type
Randers metric whose Chern connection coincides with the Levi-Civita
connection of g; flag curvature is then computed from the Riemannian
curvature tensor with all inner products taken in the fundamental tensor

    g_y(u, v) = g(u,v) + g(Q,u) g(Q,v)
                - g(Q,y) g(y,u) g(y,v) / g(y,y)^(3/2)
                + ( g(Q,u) g(y,v) + g(Q,y) g(u,v) + g(Q,v) g(y,u) ) / sqrt(g(y,y)).

Exact zeros short-circuit the square-root terms, so the drift = 0 limit
degenerates to g exactly, not merely within tolerance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import MetricTensor, Vector, as_vector
from .errors import (DegeneratePlaneError, InputError, NonBerwaldError,
                     NormBoundError, UndefinedAtOriginError)
from .riemann import Connection, CurvatureTensor, curvature_apply
from .scalars import (Scalar, is_exact_zero, is_zero, scalar_to_json,
                      sqrt_scalar)


@dataclass
class RandersMetric:
    """A validated Randers structure; build through build_randers."""

    base: MetricTensor
    drift: Vector
    berwald: bool
    drift_norm_sq: Scalar

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def drift_norm(self) -> Scalar:
        return sqrt_scalar(self.drift_norm_sq)

    @property
    def is_riemannian(self) -> bool:
        return self.drift.is_zero()


@dataclass
class Flag:
    """A flag: pole direction y and a transverse edge spanning the plane."""

    pole: Vector
    edge: Vector


def parallel_fields(conn: Connection) -> list[Vector]:
    """Basis of left-invariant fields Q with nabla_U Q = 0 for all U.

    The condition is the dim^2 x dim linear system
    sum_j gamma[i][j][k] Q_j = 0; the nullspace is computed exactly in
    rational mode, so 'dimension 0 vs 1' never hinges on a tolerance.
    """
    n = conn.dim
    rows = []
    for i in range(n):
        for k in range(n):
            rows.append([conn.gamma[i][j][k] for j in range(n)])
    return [Vector(b) for b in linalg.nullspace(rows, n)]


def build_randers(metric: MetricTensor, drift, conn: Connection) -> RandersMetric:
    """Validate the drift and record whether the metric is Berwald type.

    Errors only on the hard precondition g(Q,Q) < 1; a non-parallel drift is
    a legitimate Randers metric (berwald=False), it just has no flag
    curvature here. Zero drift is allowed: the q -> 0 limit is useful.
    """
    drift = as_vector(drift, metric.dim)
    norm_sq = metric.norm_sq(drift)
    if not norm_sq < 1:
        raise NormBoundError(
            f"drift must satisfy g(Q,Q) < 1 strictly, got g(Q,Q) = {norm_sq}")
    n = metric.dim
    berwald = all(conn.derivative(Vector.basis(n, i), drift).is_zero()
                  for i in range(n))
    return RandersMetric(base=metric, drift=drift, berwald=berwald,
                         drift_norm_sq=norm_sq)


def randers_norm(rm: RandersMetric, y) -> Scalar:
    """F(y) = sqrt(g(y,y)) + g(Q,y); positive for y != 0 since ||Q|| < 1."""
    y = as_vector(y, rm.dim)
    return sqrt_scalar(rm.base.norm_sq(y)) + rm.base.inner(rm.drift, y)


def g_y(rm: RandersMetric, ybar, u, v) -> Scalar:
    """Fundamental tensor g_y(u, v) of F at the nonzero reference vector ybar.

    Closed form of (1/2) d^2/ds dt F^2(ybar + s u + t v) at s = t = 0. Terms
    whose exact coefficient vanishes are skipped so no irrational square root
    contaminates an exact result.
    """
    n = rm.dim
    ybar = as_vector(ybar, n)
    u = as_vector(u, n)
    v = as_vector(v, n)
    g = rm.base
    gyy = g.norm_sq(ybar)
    if is_zero(gyy):
        raise UndefinedAtOriginError("fundamental tensor is undefined at y = 0")
    q = rm.drift
    guv = g.inner(u, v)
    gqu = g.inner(q, u)
    gqv = g.inner(q, v)
    gqy = g.inner(q, ybar)
    gyu = g.inner(ybar, u)
    gyv = g.inner(ybar, v)
    total = guv + gqu * gqv
    t3 = gqy * gyv * gyu
    t4 = gqu * gyv + gqy * guv + gqv * gyu
    if is_exact_zero(t3) and is_exact_zero(t4):
        return total
    root = sqrt_scalar(gyy)
    if not is_exact_zero(t3):
        total = total - t3 / (gyy * root)
    if not is_exact_zero(t4):
        total = total + t4 / root
    return total


def g_y_hessian_oracle(rm: RandersMetric, ybar, u, v, h: float = 1e-4) -> float:
    """Finite-difference check value for g_y: central mixed second difference
    of (1/2) F^2 along u and v around ybar. Always floating."""
    n = rm.dim
    ybar = as_vector(ybar, n)
    u = as_vector(u, n)
    v = as_vector(v, n)

    def f_sq(point: Vector) -> float:
        return float(randers_norm(rm, point)) ** 2

    def shifted(su: float, tv: float) -> Vector:
        return Vector(float(ybar[i]) + su * float(u[i]) + tv * float(v[i])
                      for i in range(n))

    mixed = (f_sq(shifted(h, h)) - f_sq(shifted(h, -h))
             - f_sq(shifted(-h, h)) + f_sq(shifted(-h, -h))) / (4.0 * h * h)
    return 0.5 * mixed


def flag_curvature(rm: RandersMetric, rt: CurvatureTensor, flag: Flag) -> Scalar:
    """Flag curvature K(P, y) = g_y(R(e,y)y, e) / (g_y(y,y) g_y(e,e) - g_y(y,e)^2)
    for pole y and edge e.

    Only supported for Berwald type (parallel drift), where the curvature of
    the Chern connection is the Riemannian tensor of g.
    """
    if not rm.berwald:
        raise NonBerwaldError(
            "flag curvature requires a parallel drift (Berwald type); "
            "this Randers metric has nabla Q != 0")
    if rt.dim != rm.dim:
        raise InputError("curvature tensor dimension differs from Randers metric")
    pole = as_vector(flag.pole, rm.dim)
    edge = as_vector(flag.edge, rm.dim)
    g = rm.base
    if is_zero(g.norm_sq(pole)):
        raise UndefinedAtOriginError("flag pole must be nonzero")
    plane_det = g.norm_sq(pole) * g.norm_sq(edge) - g.inner(pole, edge) ** 2
    if is_zero(plane_det):
        raise DegeneratePlaneError("flag pole and edge are linearly dependent")
    rvyy = curvature_apply(rt, edge, pole, pole)
    num = g_y(rm, pole, rvyy, edge)
    den = (g_y(rm, pole, pole, pole) * g_y(rm, pole, edge, edge)
           - g_y(rm, pole, pole, edge) ** 2)
    return num / den


@dataclass
class PositivityReport:
    """Sampled positive-definiteness check of the fundamental tensor."""

    samples: int
    failures: list = field(default_factory=list)  # offending ybar vectors

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self, precision: int = 12) -> dict:
        return {
            "samples": self.samples,
            "passed": self.passed,
            "failures": [[scalar_to_json(x, precision) for x in y] for y in self.failures],
        }


def check_finsler_positivity(rm: RandersMetric, samples: int = 100,
                             seed: int = 0) -> PositivityReport:
    """Sample nonzero rational reference vectors and test [g_y(e_i, e_j)] > 0.

    Deterministic for a given seed. With g(Q,Q) < 1 this must always pass;
    the check exists to catch violated preconditions and future regressions.
    """
    rng = random.Random(seed)
    n = rm.dim
    report = PositivityReport(samples=samples)
    basis = [Vector.basis(n, i) for i in range(n)]
    for _ in range(samples):
        while True:
            ybar = Vector(Fraction(rng.randint(-40, 40), rng.randint(1, 12))
                          for _ in range(n))
            if not ybar.is_zero():
                break
        matrix = [[g_y(rm, ybar, basis[i], basis[j]) for j in range(n)]
                  for i in range(n)]
        if not linalg.is_positive_definite(matrix):
            report.failures.append(ybar)
    return report
