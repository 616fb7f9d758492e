"""Numeric jets of a metric: g, its first and mixed second derivatives.

Every curvature formula downstream consumes a :class:`MetricJet` — the values
at one point of

    g_{k lbar},   d_i g_{k lbar},   dbar_j g_{k lbar},   d_i dbar_j g_{k lbar}

plus the inverse metric.  The symbolic derivative tables are built once per
spec and cached on it; evaluation is vectorized over batches of points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .dsl import MetricSpec

__all__ = ["MetricJet", "FactorJet", "MetricError", "metric_jet", "metric_jets", "factor_jet"]

HERMITIAN_TOL = 1e-10


class MetricError(ValueError):
    """Metric is not Hermitian/positive definite at an evaluation point."""


@dataclass(frozen=True)
class MetricJet:
    """Pointwise data of a metric.

    dg[i, k, l] = d_i g_{k lbar}; dbar_g[j, k, l] = dbar_j g_{k lbar};
    ddbar_g[i, j, k, l] = d_i dbar_j g_{k lbar}.  Hermitianity gives
    dbar_g[j, k, l] = conj(dg[j, l, k]).
    """

    point: np.ndarray
    g: np.ndarray
    dg: np.ndarray
    dbar_g: np.ndarray
    ddbar_g: np.ndarray
    g_inv: np.ndarray

    @property
    def n(self) -> int:
        return self.g.shape[0]


@dataclass(frozen=True)
class FactorJet:
    """Pointwise data of a scalar factor F: value, gradients, mixed Hessian."""

    point: np.ndarray
    value: float
    grad: np.ndarray       # d_k F
    grad_bar: np.ndarray   # dbar_k F
    hess: np.ndarray       # hess[k, l] = d_k dbar_l F


class _Tables:
    """Symbolic derivative tables of a spec's entries, built once."""

    def __init__(self, spec: MetricSpec):
        n = spec.n
        E = spec.entries
        self.n = n
        self.g = [[E[k][l] for l in range(n)] for k in range(n)]
        self.dg = [
            [[ex.wirtinger_diff(E[k][l], "holo", i + 1) for l in range(n)] for k in range(n)]
            for i in range(n)
        ]
        self.dbg = [
            [[ex.wirtinger_diff(E[k][l], "anti", j + 1) for l in range(n)] for k in range(n)]
            for j in range(n)
        ]
        self.ddg = [
            [
                [[ex.wirtinger_diff(self.dg[i][k][l], "anti", j + 1) for l in range(n)] for k in range(n)]
                for j in range(n)
            ]
            for i in range(n)
        ]


def _tables(spec: MetricSpec) -> _Tables:
    # idempotent lazy cache; MetricSpec is immutable by convention
    if spec._tables is None:
        spec._tables = _Tables(spec)
    return spec._tables


def _eval_table(table, pts, shape):
    """Evaluate a nested list of Expr over (m, n) points -> (m, *shape)."""
    m = pts.shape[0]
    out = np.empty((m,) + shape, dtype=complex)
    for idx in np.ndindex(shape):
        node = table
        for i in idx:
            node = node[i]
        out[(slice(None),) + idx] = ex.evaluate(node, pts)
    return out


def metric_jets(spec: MetricSpec, points) -> list:
    """Jets of spec at a batch of points, shape (m, n).

    One vectorized pass per table entry; raises MetricError when any point
    fails the Hermitian (1e-10) or positive-definiteness check.
    """
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[1] != spec.n:
        raise ValueError(f"points have {pts.shape[1]} coordinates, metric has n={spec.n}")
    t = _tables(spec)
    n = spec.n
    g = _eval_table(t.g, pts, (n, n))
    herm = np.max(np.abs(g - np.conj(np.swapaxes(g, 1, 2))), axis=(1, 2))
    bad = np.argmax(herm)
    if herm[bad] >= HERMITIAN_TOL:
        raise MetricError(
            f"metric is not Hermitian at {pts[bad]} (residual {herm[bad]:.3e})"
        )
    g = 0.5 * (g + np.conj(np.swapaxes(g, 1, 2)))
    eig = np.linalg.eigvalsh(g)
    if np.any(eig <= 0):
        bad = int(np.argmin(eig[:, 0]))
        raise MetricError(
            f"metric is not positive definite at {pts[bad]} (min eigenvalue {eig[bad, 0]:.3e})"
        )
    dg = _eval_table(t.dg, pts, (n, n, n))
    dbg = _eval_table(t.dbg, pts, (n, n, n))
    ddg = _eval_table(t.ddg, pts, (n, n, n, n))
    g_inv = np.linalg.inv(g)
    resid = np.max(np.abs(np.einsum("mij,mjk->mik", g_inv, g) - np.eye(n)))
    if resid > 1e-12 * max(1.0, float(np.max(np.abs(g_inv)))):
        raise MetricError(f"inverse-metric residual {resid:.3e} exceeds tolerance")
    return [
        MetricJet(pts[m], g[m], dg[m], dbg[m], ddg[m], g_inv[m])
        for m in range(pts.shape[0])
    ]


def metric_jet(spec: MetricSpec, p) -> MetricJet:
    """Jet of spec at a single point of C^n."""
    return metric_jets(spec, np.asarray(p, dtype=complex)[None, :])[0]


def factor_jet(F: ex.Expr, p, n: int) -> FactorJet:
    """Jet of a real-valued scalar factor F at p (value, gradients, mixed Hessian)."""
    pt = np.asarray(p, dtype=complex)
    val = complex(ex.evaluate(F, pt))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"conformal factor is not real at {pt} (Im = {val.imag:.3e})")
    dF = [ex.wirtinger_diff(F, "holo", k + 1) for k in range(n)]
    grad = np.array([ex.evaluate(d, pt) for d in dF])
    grad_bar = np.array([ex.evaluate(ex.wirtinger_diff(F, "anti", k + 1), pt) for k in range(n)])
    hess = np.array(
        [[ex.evaluate(ex.wirtinger_diff(dF[k], "anti", l + 1), pt) for l in range(n)] for k in range(n)]
    )
    return FactorJet(pt, val.real, grad, grad_bar, hess)
