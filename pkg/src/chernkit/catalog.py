"""Built-in metrics with expected values and deterministic samplers.

Each entry is defined by a DSL text file shipped with the package (so the
parser path is exercised end to end) plus a table of expected scalar/tensor
values with a provenance note for each.  Samplers are pure functions of
(count, seed).

Families, for n in 1..4: euclidean-n (flat), fubini-study-n (H = +2 space
form), complex-hyperbolic-n (H = -2 space form), hopf-n (g = delta/|z|^2,
non-Kahler for n >= 2); plus adm-product-surface (hyperbolic x spherical
factors, H = -1/+1 on the axes) and isosceles-hopf-surface (the hopf-2
metric, which descends to the equal-|a_i| quotient).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .dsl import MetricSpec, parse_metric

__all__ = ["CatalogEntry", "ExpectedValue", "builtin", "names", "sample_points"]

_FAMILIES = ("euclidean", "fubini-study", "complex-hyperbolic", "hopf")
_DIMS = (1, 2, 3, 4)


@dataclass(frozen=True)
class ExpectedValue:
    value: object
    provenance: str


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    spec: MetricSpec
    expected: dict
    kahler: bool
    notes: str = ""


def names() -> list:
    """All built-in metric names."""
    out = [f"{fam}-{n}" for fam in _FAMILIES for n in _DIMS]
    out += ["adm-product-surface", "isosceles-hopf-surface"]
    return out


def _space_form_expected(n: int, h: float) -> dict:
    sign = "+" if h > 0 else "-"
    prov = (
        f"Kahler potential {sign}log(1 {sign} |z|^2) differentiated at the origin; "
        "constant over the domain by homogeneity of the model"
    )
    return {
        "u": ExpectedValue(n * (n + 1) * h / 2, prov),
        "v": ExpectedValue(n * (n + 1) * h / 2, prov),
        "eta_norm2": ExpectedValue(0.0, "Kahler metrics are torsion-free"),
        "hsc": ExpectedValue(h, prov),
    }


def _hopf_expected(n: int) -> dict:
    prov = "hand differentiation of delta_ij/|z|^2 and unitary-frame traces"
    return {
        "u": ExpectedValue(float(n * n - n), prov),
        "v": ExpectedValue(float(n - 1), prov),
        "eta_norm2": ExpectedValue(float((n - 1) ** 2), "eta_i = (1-n) zbar_i/|z|^2 by hand"),
    }


def _expected_for(name: str) -> tuple:
    """(expected table, kahler flag, notes) for a catalog name."""
    fam, _, tail = name.rpartition("-")
    if name.startswith("euclidean-"):
        zero = ExpectedValue(0.0, "flat metric, all derivatives vanish")
        return (
            {"u": zero, "v": zero, "eta_norm2": zero, "hsc": zero},
            True,
            "flat model",
        )
    if name.startswith("fubini-study-"):
        return _space_form_expected(int(tail), 2.0), True, "space form, H = +2"
    if name.startswith("complex-hyperbolic-"):
        return _space_form_expected(int(tail), -2.0), True, "space form, H = -2"
    if name.startswith("hopf-"):
        n = int(tail)
        note = "flat for n = 1" if n == 1 else "non-Kahler; mixed curvature vanishes for n*alpha + beta = 0"
        return _hopf_expected(n), n == 1, note
    if name == "adm-product-surface":
        prov = "product of constant-curvature factors; curvature computed factorwise by hand"
        return (
            {
                "u": ExpectedValue(0.0, prov),
                "v": ExpectedValue(0.0, prov),
                "eta_norm2": ExpectedValue(0.0, "Kahler product metric"),
                "hsc_axis1": ExpectedValue(-1.0, prov),
                "hsc_axis2": ExpectedValue(1.0, prov),
                "rho1_unitary": ExpectedValue((-1.0, 1.0), prov),
            },
            True,
            "Kahler product, H = -1 and +1 on the factor directions",
        )
    if name == "isosceles-hopf-surface":
        table = _hopf_expected(2)
        return (
            table,
            False,
            "hopf-2 metric descends to the equal-modulus quotient; "
            "mixed curvature vanishes identically for 2*alpha + beta = 0",
        )
    raise ValueError(f"unknown catalog metric {name!r}")


@lru_cache(maxsize=None)
def builtin(name: str) -> CatalogEntry:
    """Look up a built-in entry by name; raises ValueError for unknown names."""
    if name not in names():
        raise ValueError(f"unknown catalog metric {name!r} (see `catalog list`)")
    source = (resources.files(__package__) / "metrics" / f"{name}.metric").read_text()
    spec = parse_metric(source, name=name)
    expected, kahler, notes = _expected_for(name)
    return CatalogEntry(name=name, spec=spec, expected=expected, kahler=kahler, notes=notes)


def sample_points(entry: CatalogEntry, count: int, seed: int) -> np.ndarray:
    """Deterministic (count, n) sample of the entry's domain."""
    if count < 1:
        raise ValueError("need at least one point")
    rng = np.random.default_rng(seed)
    return entry.spec.domain.sample(entry.spec.n, count, rng)
