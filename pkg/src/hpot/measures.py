"""Boundary data and atomic measures, with their integrability gates.

Boundary data is either a finite atom list on R^{n-1} or one of three
radial closed-form families:

* ``power_growth(s)``      f(y') = (1 + |y'|^2)^(s/2)
* ``gaussian_bump(c, sigma)``  f(y') = c * exp(-|y'|^2 / (2 sigma^2))
* ``indicator_ball(R)``    f(y') = 1 for |y'| <= R, else 0

Measures on the half-space are finite atomic.  The two gates checked here
are the weighted-mass conditions that the Dirichlet and Green potentials
require before evaluation is allowed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, SchemaError
from .kernels import KernelConfig
from .quadrature import panel_nodes, refined_breakpoints, unit_sphere_area

BOUNDARY_CONDITION = "boundary_integrability"
MEASURE_CONDITION = "measure_integrability"

_FAMILY_IDS = ("power_growth", "gaussian_bump", "indicator_ball")


@dataclass(frozen=True)
class ConditionReport:
    value: float
    condition: str
    satisfied: bool

    def to_json_dict(self):
        return {
            "condition": self.condition,
            "satisfied": self.satisfied,
            "value": None if math.isinf(self.value) else self.value,
        }


class AtomicMeasure:
    """Finite positive atomic measure: points (N, dimension) and masses (N,)."""

    def __init__(self, dimension: int, points, masses):
        if int(dimension) != dimension or dimension < 1:
            raise DomainError(f"bad measure dimension {dimension}")
        self.dimension = int(dimension)
        pts = np.asarray(points, dtype=float).reshape(-1, self.dimension)
        ms = np.atleast_1d(np.asarray(masses, dtype=float))
        if pts.shape[0] != ms.size:
            raise DomainError("measure points and masses differ in length")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(ms))):
            raise DomainError("measure entries must be finite")
        if np.any(ms <= 0.0):
            raise DomainError("measure masses must be positive")
        self.points = pts
        self.masses = ms
        self.points.flags.writeable = False
        self.masses.flags.writeable = False

    def __len__(self):
        return self.masses.size

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    @classmethod
    def empty(cls, dimension: int) -> "AtomicMeasure":
        return cls(dimension, np.zeros((0, dimension)), np.zeros(0))

    @classmethod
    def from_json_dict(cls, obj) -> "AtomicMeasure":
        dim = _expect_int(obj, "dimension")
        atoms = _expect_list(obj, "atoms")
        pts, ms = [], []
        for i, atom in enumerate(atoms):
            path = f"atoms[{i}]"
            if not isinstance(atom, dict):
                raise SchemaError("expected an object", path)
            pts.append(_expect_vector(atom, "point", dim, path))
            ms.append(_expect_number(atom, "mass", path))
            if ms[-1] <= 0:
                raise SchemaError("mass must be positive", f"{path}.mass")
        return cls(dim, np.array(pts).reshape(-1, dim), np.array(ms))

    def to_json_dict(self):
        return {
            "dimension": self.dimension,
            "atoms": [
                {"point": list(map(float, p)), "mass": float(m)}
                for p, m in zip(self.points, self.masses)
            ],
        }


class BoundaryData:
    """Boundary data on R^{dimension}: signed atoms or a radial family."""

    def __init__(self, dimension, kind, points=None, weights=None, family=None):
        if int(dimension) != dimension or dimension < 2:
            raise DomainError(f"bad boundary dimension {dimension}")
        self.dimension = int(dimension)
        self.kind = kind
        if kind == "atoms":
            pts = np.asarray(
                points if points is not None else np.zeros((0, self.dimension)),
                dtype=float,
            ).reshape(-1, self.dimension)
            ws = np.atleast_1d(
                np.asarray(weights if weights is not None else np.zeros(0), float)
            )
            if pts.shape[0] != ws.size:
                raise DomainError("boundary atoms and weights differ in length")
            if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(ws))):
                raise DomainError("boundary atoms must be finite")
            self.points, self.weights = pts, ws
            self.family_id, self.params = None, None
        elif kind == "family":
            fid, params = family
            if fid not in _FAMILY_IDS:
                raise DomainError(f"unknown boundary family {fid!r}")
            if fid == "gaussian_bump" and not params.get("sigma", 0) > 0:
                raise DomainError("gaussian_bump needs sigma > 0")
            if fid == "indicator_ball" and not params.get("R", 0) > 0:
                raise DomainError("indicator_ball needs R > 0")
            self.family_id = fid
            self.params = dict(params)
            self.points = np.zeros((0, self.dimension))
            self.weights = np.zeros(0)
        else:
            raise DomainError(f"unknown boundary data kind {kind!r}")

    # -- radial family helpers -------------------------------------------

    @classmethod
    def atoms(cls, dimension, points, weights) -> "BoundaryData":
        return cls(dimension, "atoms", points=points, weights=weights)

    @classmethod
    def power_growth(cls, dimension, s) -> "BoundaryData":
        return cls(dimension, "family", family=("power_growth", {"s": float(s)}))

    @classmethod
    def gaussian_bump(cls, dimension, c, sigma) -> "BoundaryData":
        return cls(
            dimension,
            "family",
            family=("gaussian_bump", {"c": float(c), "sigma": float(sigma)}),
        )

    @classmethod
    def indicator_ball(cls, dimension, radius) -> "BoundaryData":
        return cls(
            dimension, "family", family=("indicator_ball", {"R": float(radius)})
        )

    def radial(self) -> Callable[[np.ndarray], np.ndarray]:
        """|f| as a function of the boundary radius (families are radial)."""
        if self.kind != "family":
            raise DomainError("only family data has a radial profile")
        fid, p = self.family_id, self.params
        if fid == "power_growth":
            s = p["s"]
            return lambda r: (1.0 + np.asarray(r) ** 2) ** (0.5 * s)
        if fid == "gaussian_bump":
            c, sig = p["c"], p["sigma"]
            return lambda r: c * np.exp(-0.5 * (np.asarray(r) / sig) ** 2)
        radius = p["R"]
        return lambda r: np.where(np.asarray(r) <= radius, 1.0, 0.0)

    def radial_support(self):
        """Finite support radius, or None."""
        if self.kind == "family" and self.family_id == "indicator_ball":
            return self.params["R"]
        return None

    def radial_scale(self) -> float:
        if self.kind != "family":
            return 1.0
        if self.family_id == "gaussian_bump":
            return self.params["sigma"]
        if self.family_id == "indicator_ball":
            return self.params["R"]
        return 1.0

    def tail_integral_bound(self, R: float, power: float) -> float:
        """Upper bound for  int_R^inf |f(rho)| rho^power drho  (R >= 1).

        ``power`` is the net exponent after the kernel envelope and surface
        factor have been absorbed; callers pass values that make the
        integral convergent whenever the data passes its gate.
        """
        if self.kind != "family":
            raise DomainError("tail bounds are defined for family data")
        fid, p = self.family_id, self.params
        if fid == "indicator_ball":
            rt = p["R"]
            if R >= rt:
                return 0.0
            e = power + 1.0
            if abs(e) < 1e-12:
                return math.log(rt / R)
            return (rt**e - R**e) / e
        if fid == "gaussian_bump":
            c, sig = abs(p["c"]), p["sigma"]
            # |f| rho^power <= |c| R^power e^{-rho^2/2sig^2} for rho >= R >= 1, power<0
            return c * R**power * (sig**2 / R) * math.exp(-0.5 * (R / sig) ** 2)
        s = p["s"]
        e = s + power + 1.0
        if e >= 0.0:
            return math.inf
        c_env = 2.0 ** (0.5 * max(s, 0.0))
        return c_env * R**e / (-e)

    @classmethod
    def from_json_dict(cls, obj) -> "BoundaryData":
        dim = _expect_int(obj, "dimension")
        kind = _expect_str(obj, "kind")
        if kind == "atoms":
            atoms = _expect_list(obj, "atoms")
            pts, ws = [], []
            for i, atom in enumerate(atoms):
                path = f"atoms[{i}]"
                if not isinstance(atom, dict):
                    raise SchemaError("expected an object", path)
                pts.append(_expect_vector(atom, "point", dim, path))
                ws.append(_expect_number(atom, "mass", path))
            return cls.atoms(dim, np.array(pts).reshape(-1, dim), np.array(ws))
        if kind == "family":
            fam = obj.get("family")
            if not isinstance(fam, dict):
                raise SchemaError("missing object field", "family")
            fid = _expect_str(fam, "id", "family")
            params = fam.get("params")
            if not isinstance(params, dict):
                raise SchemaError("missing object field", "family.params")
            if fid not in _FAMILY_IDS:
                raise SchemaError(f"unknown family id {fid!r}", "family.id")
            try:
                return cls(dim, "family", family=(fid, params))
            except DomainError as exc:
                raise SchemaError(str(exc), "family.params") from exc
        raise SchemaError(f"kind must be 'atoms' or 'family', got {kind!r}", "kind")

    def to_json_dict(self):
        out = {"dimension": self.dimension, "kind": self.kind}
        if self.kind == "atoms":
            out["atoms"] = [
                {"point": list(map(float, p)), "mass": float(w)}
                for p, w in zip(self.points, self.weights)
            ]
        else:
            out["family"] = {"id": self.family_id, "params": dict(self.params)}
        return out


# ---------------------------------------------------------------------------
# JSON field helpers (structured errors carry the offending path)
# ---------------------------------------------------------------------------


def _expect_int(obj, key, prefix=""):
    path = f"{prefix}.{key}" if prefix else key
    v = obj.get(key) if isinstance(obj, dict) else None
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError("expected an integer", path)
    return v


def _expect_number(obj, key, prefix=""):
    path = f"{prefix}.{key}" if prefix else key
    v = obj.get(key) if isinstance(obj, dict) else None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError("expected a number", path)
    return float(v)


def _expect_str(obj, key, prefix=""):
    path = f"{prefix}.{key}" if prefix else key
    v = obj.get(key) if isinstance(obj, dict) else None
    if not isinstance(v, str):
        raise SchemaError("expected a string", path)
    return v


def _expect_list(obj, key, prefix=""):
    path = f"{prefix}.{key}" if prefix else key
    v = obj.get(key) if isinstance(obj, dict) else None
    if not isinstance(v, list):
        raise SchemaError("expected a list", path)
    return v


def _expect_vector(obj, key, length, prefix=""):
    path = f"{prefix}.{key}" if prefix else key
    v = obj.get(key) if isinstance(obj, dict) else None
    if not isinstance(v, list) or len(v) != length:
        raise SchemaError(f"expected a list of {length} numbers", path)
    for j, entry in enumerate(v):
        if isinstance(entry, bool) or not isinstance(entry, (int, float)):
            raise SchemaError("expected a number", f"{path}[{j}]")
    return [float(e) for e in v]


# ---------------------------------------------------------------------------
# integrability gates
# ---------------------------------------------------------------------------


def _radial_gate_integral(data: BoundaryData, cfg: KernelConfig) -> float:
    """A * int_0^inf |f(rho)| rho^(n-2) / (1 + rho^(n+m)) drho  in polar form,
    with the truncation radius grown until the analytic tail bound falls
    below 1e-12 of the accumulated integral."""
    n, m = cfg.n, cfg.m
    area = unit_sphere_area(n - 1)
    radial = data.radial()
    scale = data.radial_scale()
    support = data.radial_support()

    def chunk(lo, hi):
        bs = refined_breakpoints(lo, hi, base_scale=min(0.5, scale))
        nodes, w = panel_nodes(bs, 24)
        vals = np.abs(radial(nodes)) * nodes ** (n - 2) / (1.0 + nodes ** (n + m))
        return float(np.dot(w, vals))

    if support is not None:
        return area * chunk(0.0, support)

    rmax = max(2.0, 4.0 * scale)
    acc = chunk(0.0, rmax)
    for _ in range(60):
        # tail of the gate integrand: |f| rho^{-m-2} envelope beyond rmax
        tail = area * data.tail_integral_bound(rmax, float(-m - 2))
        if tail <= 1e-12 * max(acc, 1e-300):
            break
        acc += chunk(rmax, 2.0 * rmax)
        rmax *= 2.0
    return area * acc


def check_boundary_condition(data: BoundaryData, cfg: KernelConfig) -> ConditionReport:
    """Gate for Dirichlet data:  int |f(y')| / (1 + |y'|^(n+m)) dy' < inf.

    Atom lists always pass (finite sums); power growth passes exactly when
    the exponent s stays below m + 1 (the polar integrand decays like
    rho^(s-m-2) and needs decay faster than 1/rho)."""
    if data.dimension != cfg.n - 1:
        raise DomainError(
            f"boundary data dimension {data.dimension} does not match n-1={cfg.n - 1}"
        )
    if data.kind == "atoms":
        r = np.sqrt(np.sum(data.points**2, axis=-1))
        value = float(np.sum(np.abs(data.weights) / (1.0 + r ** (cfg.n + cfg.m))))
        return ConditionReport(value, BOUNDARY_CONDITION, True)
    if data.family_id == "power_growth" and data.params["s"] >= cfg.m + 1:
        return ConditionReport(math.inf, BOUNDARY_CONDITION, False)
    return ConditionReport(_radial_gate_integral(data, cfg), BOUNDARY_CONDITION, True)


def check_measure_condition(mu: AtomicMeasure, cfg: KernelConfig) -> ConditionReport:
    """Gate for Green-potential measures:
    int_H y_n / (1 + |y|^(n+m)) dmu(y) < inf (always finite for atoms)."""
    if mu.dimension != cfg.n:
        raise DomainError(
            f"measure dimension {mu.dimension} does not match n={cfg.n}"
        )
    if len(mu) and np.any(mu.points[:, -1] < 0.0):
        raise DomainError("measure atoms must lie in the closed half-space")
    if len(mu) == 0:
        return ConditionReport(0.0, MEASURE_CONDITION, True)
    r = np.sqrt(np.sum(mu.points**2, axis=-1))
    value = float(
        np.sum(mu.masses * mu.points[:, -1] / (1.0 + r ** (cfg.n + cfg.m)))
    )
    return ConditionReport(value, MEASURE_CONDITION, True)
