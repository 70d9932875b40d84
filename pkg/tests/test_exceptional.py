import math

import numpy as np
import pytest

from hpot.errors import DomainError
from hpot.exceptional import (
    CoveringResult,
    GrowthParams,
    MaximalQuery,
    exceptional_candidates,
    exceptional_membership,
    growth_ratio,
    growth_scan,
    maximal_function,
    scan_csv,
    shell_lattice,
    vitali_covering,
)
from hpot.kernels import KernelConfig
from hpot.measures import AtomicMeasure, BoundaryData
from hpot.potentials import dirichlet_field, eval_dirichlet


def brute_maximal(mu, beta, x, radii):
    """Independent oracle: scan an explicit radius grid."""
    x = np.asarray(x, float)
    d = np.linalg.norm(mu.points - x, axis=1)
    out = 0.0
    for r in radii:
        out = max(out, mu.masses[d <= r].sum() / r**beta)
    return out


def test_maximal_golden():
    mu = AtomicMeasure(3, [[0, 0, 0]], [1.0])
    assert maximal_function(mu, 2.0, [0, 0, 4]) == pytest.approx(1 / 16, rel=1e-14)
    assert maximal_function(mu, 0.0, [5, 5, 5]) == 1.0
    assert maximal_function(mu, 1.0, [0, 0, 0]) == math.inf


def test_maximal_matches_radius_scan():
    rng = np.random.default_rng(30)
    mu = AtomicMeasure(3, rng.normal(size=(8, 3)) * 3, rng.uniform(0.1, 2, 8))
    radii = np.linspace(1e-3, 30, 30000)
    for _ in range(10):
        x = rng.normal(size=3) * 4
        beta = float(rng.choice([0.5, 1.0, 2.0]))
        exact = maximal_function(mu, beta, x)
        approx = brute_maximal(mu, beta, x, radii)
        assert approx <= exact * (1 + 1e-9)
        assert exact <= approx * (1 + 1e-2)


def test_maximal_monotone_in_atoms_and_scaling():
    rng = np.random.default_rng(31)
    pts = rng.normal(size=(6, 3)) * 2
    ms = rng.uniform(0.1, 1.0, 6)
    mu = AtomicMeasure(3, pts, ms)
    bigger = AtomicMeasure(3, np.vstack([pts, [[5, 0, 1]]]), np.append(ms, 0.7))
    scaled = AtomicMeasure(3, pts, 3.0 * ms)
    for _ in range(50):
        x = rng.normal(size=3) * 3
        beta = float(rng.choice([0.0, 0.5, 2.0]))
        base = maximal_function(mu, beta, x)
        assert maximal_function(bigger, beta, x) >= base
        assert maximal_function(scaled, beta, x) == pytest.approx(3.0 * base, rel=1e-13)


def test_membership_examples():
    mu = AtomicMeasure(3, [[0, 0, 0]], [1.0])
    for beta in (0.5, 1.0, 2.0):
        q = MaximalQuery(beta, 5.0**beta)
        # atom at the origin: |x|^beta > 5^beta |x|^beta is impossible
        for x in ([0, 0, 4], [3, 3, 3], [-8, 1, 2]):
            assert not exceptional_membership(mu, q, x)
    q = MaximalQuery(2.0, 25.0)
    assert not exceptional_membership(mu, q, [1.5, 0, 0])  # |x| < 2 clause
    assert not exceptional_membership(
        AtomicMeasure(3, [[0, 0, 4.0]], [1.0]), MaximalQuery(2.0, 1e9), [0, 0, 4.1]
    )


def test_apollonius_instance_covering():
    mu = AtomicMeasure(3, [[0, 0, 4.0]], [1.0])
    q = MaximalQuery(2.0, 25.0)
    cov = vitali_covering(mu, q, range(1, 4), 0.25)
    assert len(cov.balls) >= 1
    assert cov.bound == pytest.approx(3.0)
    assert cov.weighted_sum <= cov.bound
    total = 0
    for k in range(1, 4):
        centers, radii = exceptional_candidates(mu, q, k, 0.25)
        total += len(centers)
        for c in centers:
            assert cov.contains(c)
        # candidates agree with the membership predicate on the lattice
        grid = shell_lattice(k, 0.25, 3)
        member = np.array([exceptional_membership(mu, q, g) for g in grid])
        assert member.sum() == len(centers)
    assert total >= 2


def test_covering_contract_random_measures():
    rng = np.random.default_rng(32)
    nonempty = 0
    for trial in range(12):
        npts = int(rng.integers(2, 7))
        pts = rng.normal(size=(npts, 3)) * rng.uniform(1, 6)
        mu = AtomicMeasure(3, pts, rng.uniform(0.2, 2.0, npts))
        beta = float(rng.choice([0.5, 1.0, 2.0, 3.0]))
        lam = 5.0**beta * mu.total_mass * float(rng.uniform(1.0, 2.0))
        q = MaximalQuery(beta, lam)
        cov = vitali_covering(mu, q, range(1, 6), 0.5)
        assert cov.weighted_sum <= cov.bound + 1e-12
        nonempty += bool(cov.balls)
        for k in range(1, 6):
            centers, _ = exceptional_candidates(mu, q, k, 0.5)
            assert all(cov.contains(c) for c in centers)
    assert nonempty >= 3


def test_covering_precondition():
    mu = AtomicMeasure(3, [[0, 0, 4.0]], [1.0])
    with pytest.raises(DomainError):
        vitali_covering(mu, MaximalQuery(2.0, 24.9), range(1, 3), 0.5)


def test_empty_exceptional_set():
    mu = AtomicMeasure(3, [[0, 0, 0]], [1.0])
    cov = vitali_covering(mu, MaximalQuery(2.0, 25.0), range(1, 5), 0.5)
    assert cov.balls == ()
    assert cov.weighted_sum == 0.0


def test_growth_ratio_golden():
    cfg = KernelConfig(3, 1)
    vf = dirichlet_field(cfg, BoundaryData.atoms(2, [[0.0, 0.0]], [1.0]))
    params = GrowthParams(1.0, 1)
    u = lambda x: eval_dirichlet(vf, x)
    assert growth_ratio(u, [0, 0, 2], params) == pytest.approx(
        1 / (32 * math.pi), rel=1e-12
    )
    # doubling |x| on the vertical ray divides the ratio by 2^(n+m)
    r1 = growth_ratio(u, [0, 0, 2], params)
    r2 = growth_ratio(u, [0, 0, 4], params)
    assert r1 / r2 == pytest.approx(2.0 ** (3 + 1), rel=1e-12)
    assert growth_ratio(lambda x: 0.0, [0, 0, 2], params) == 0.0
    with pytest.raises(DomainError):
        growth_ratio(u, [0, 0, -1], params)


def test_growth_scan_includes_flags_and_validation():
    cfg = KernelConfig(3, 0)
    vf = dirichlet_field(cfg, BoundaryData.atoms(2, [[0.0, 0.0]], [1.0]))
    u = lambda x: eval_dirichlet(vf, x)
    rays = [np.array([0, 0, 1.0]), np.array([0.6, 0, 0.8])]
    radii = [4.0, 8.0, 16.0]
    rows = growth_scan(u, rays, radii, GrowthParams(1.0, 0), dim=3)
    assert len(rows) == 6
    assert all(not r.in_exceptional for r in rows)
    # with a covering ball around one sample point, that point gets flagged
    from hpot.geometry import Ball, Point

    cov = CoveringResult((Ball(Point([0, 0, 8.0]), 0.5),), 0.1, 1.0)
    rows = growth_scan(u, rays, radii, GrowthParams(1.0, 0), cov, dim=3)
    flagged = [r for r in rows if r.in_exceptional]
    assert len(flagged) == 1 and flagged[0].radius == 8.0 and flagged[0].ray_index == 0
    with pytest.raises(DomainError):
        growth_scan(u, rays, radii, GrowthParams(3.5, 0), dim=3)
    with pytest.raises(DomainError):
        growth_scan(u, rays, radii, GrowthParams(2.0, 0), dim=3, subharmonic=True)
    with pytest.raises(DomainError):
        growth_scan(u, rays, [4.0, 4.0], GrowthParams(1.0, 0), dim=3)
    with pytest.raises(DomainError):
        growth_scan(u, [np.array([0, 0, 2.0])], radii, GrowthParams(1.0, 0), dim=3)


def test_scan_csv_header():
    cfg = KernelConfig(3, 0)
    vf = dirichlet_field(cfg, BoundaryData.atoms(2, [[0.0, 0.0]], [1.0]))
    rows = growth_scan(
        lambda x: eval_dirichlet(vf, x),
        [np.array([0, 0, 1.0])],
        [4.0],
        GrowthParams(1.0, 0),
        dim=3,
    )
    text = scan_csv(rows)
    assert text.splitlines()[0] == "ray_index,radius,ratio,in_G"
    assert text.endswith("\n")
