"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line (printed in the terminal summary
by conftest) before asserting, so a failing criterion still reports its
measured value.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from isodia import bounds, geodesy, surfaces
from isodia.spaceform import LAMBDA_TOL, PI2, lambda_chi, v_tilde

from conftest import ACCEPTANCE_LINES, TIMINGS


def record(number, label, passed, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  [{number:2d}] {label}: {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert passed, ACCEPTANCE_LINES[-1]


def test_01_flat_constants():
    t2 = bounds.theorem_bound(2, 0.0)
    t1 = bounds.theorem_bound(1, 0.0)
    e2 = (math.sqrt(21) - 3) * math.pi / 2
    e1 = (math.sqrt(15) - 3) * math.pi
    ok = abs(t2 - e2) <= 1e-12 and t2 < 2.486 and abs(t1 - e1) <= 1e-12 and t1 < 2.743
    record(1, "flat constants", ok,
           f"sphere {t2:.15f} (err {abs(t2 - e2):.1e}, < 2.486), "
           f"projective {t1:.15f} (err {abs(t1 - e1):.1e}, < 2.743)")


def test_02_improves_on_8_over_pi():
    slack = 8 / math.pi - bounds.theorem_bound(2, 0.0)
    record(2, "sphere constant below 8/pi", slack >= 0.05, f"slack {slack:.6f} >= 0.05")


def test_03_tightness_at_rigidity():
    errs = []
    for model, exact in ((surfaces.round_sphere(1.0), 4 / math.pi),
                         (surfaces.round_projective_plane(1.0), 8 / math.pi)):
        chi, k, _ = surfaces.normalized_k(model)
        rep = bounds.report(chi, k)
        ratio = surfaces.summary(model).area_ratio
        errs.append((model.name, rep.theorem_is_limit,
                     abs(rep.theorem_bound - ratio), abs(ratio - exact)))
    ok = all(lim and e1 <= 1e-12 and e2 <= 1e-12 for _, lim, e1, e2 in errs)
    record(3, "tightness at rigidity points", ok,
           ", ".join(f"{n}: |bound - V/D^2| = {e1:.1e}" for n, _, e1, _ in errs))


def test_04_continuity_across_zero():
    t0 = bounds.theorem_bound(2, 0.0)
    parts, ok = [], True
    for eps, tol in ((1e-3, 1e-2), (1e-6, 1e-5), (1e-9, 1e-8)):
        gap = max(abs(bounds.theorem_bound(2, s * eps) - t0) for s in (1.0, -1.0))
        ok &= gap <= tol
        parts.append(f"{eps:g}: {gap:.2e} <= {tol:g}")
    record(4, "continuity across k = 0", ok, "; ".join(parts))


def test_05_bound_ordering():
    start = time.perf_counter()
    worst, count = -math.inf, 0
    for chi, kmax in ((0, 0.0), (1, PI2 / 4), (2, PI2)):
        for k in np.linspace(-10.0, kmax, 200):
            k = float(k)
            if lambda_chi(chi, k) <= LAMBDA_TOL:
                continue
            count += 1
            t = bounds.theorem_bound(chi, k)
            r, _ = bounds.root_bound(chi, k)
            worst = max(worst, r - t)
            if k < 0:
                q = bounds.quartic_bound(chi, k)
                worst = max(worst, r - q, q - t)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 5.0 and count >= 200
    record(5, "bound ordering", ok,
           f"{count} points, max (lower - upper) {worst:.2e} <= 1e-9, {elapsed:.2f} s < 5 s")


def test_06_radius_bound_consistency():
    worst = 0.0
    for chi in (0, 1, 2):
        for rho in (0.5, 0.75, 1.0):
            worst = max(worst, abs(bounds.prop_bound(chi, 0.0, rho)
                                   - math.pi * (1 - chi * rho**4 / 6)))
    record(6, "radius bound at k = 0", worst <= 1e-12, f"max error {worst:.1e} <= 1e-12")


def _v_naive(kappa, s):
    if kappa == 0:
        return math.pi * s * s
    if kappa > 0:
        return 2 * math.pi / kappa * (1 - math.cos(math.sqrt(kappa) * s))
    return 2 * math.pi / kappa * (1 - math.cosh(math.sqrt(-kappa) * s))


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_07_quadrature_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(200):
        kappa = float(rng.uniform(-5.0, 5.0))
        rmax = math.pi / math.sqrt(kappa) if kappa > 0 else 2.0
        r = float(rng.uniform(0.0, min(rmax, 2.0)))
        if r == 0.0:
            continue
        inner = lambda t: quad(lambda s: _v_naive(kappa, s), 0, t, epsabs=0, epsrel=1e-13)[0]
        oracle = quad(inner, 0, r, epsabs=0, epsrel=1e-12)[0]
        worst = max(worst, abs(v_tilde(kappa, r) / oracle - 1))
    elapsed = time.perf_counter() - start
    record(7, "quadrature oracle", worst <= 1e-8 and elapsed < 10,
           f"200 points, max rel error {worst:.2e} <= 1e-8, {elapsed:.2f} s < 10 s")


def test_08_mesh_pipeline(sphere_l4, torus_64):
    mesh, rep = sphere_l4
    sphere_defect = abs(geodesy.angle_defect_curvature(mesh)[0].sum() - 4 * math.pi)
    tmesh, trep = torus_64
    torus_defect = abs(geodesy.angle_defect_curvature(tmesh)[0].sum())
    checks = {
        "area": abs(rep.area / (4 * math.pi) - 1),
        "D": abs(rep.diameter_est / math.pi - 1),
        "R": abs(rep.radius_est / math.pi - 1),
        "torus D": abs(trep.diameter_est / math.sqrt(0.5) - 1),
    }
    elapsed = TIMINGS.get("sphere_l4", 0.0) + TIMINGS.get("torus_64", 0.0)
    ok = (checks["area"] <= 0.01 and checks["D"] <= 0.03 and checks["R"] <= 0.03
          and sphere_defect <= 1e-8 and checks["torus D"] <= 0.05 and torus_defect <= 1e-8
          and elapsed < 60)
    record(8, "mesh pipeline", ok,
           f"sphere area {checks['area']:.2%}, D {checks['D']:.2%}, R {checks['R']:.2%}, "
           f"defect err {sphere_defect:.1e}; torus D {checks['torus D']:.2%}, "
           f"defect sum {torus_defect:.1e}; {elapsed:.1f} s < 60 s")


def test_09_inequalities_on_models():
    parts, ok = [], True
    for model in surfaces.all_models():
        s = surfaces.summary(model)
        chi, k, rho = surfaces.normalized_k(model)
        rep = bounds.report(chi, k, rho)
        slack = s.diameter**2 * rep.best - s.area
        # exact equality at the round models: allow rounding only
        ok &= slack >= -1e-12 * s.area
        parts.append(f"{model.name} slack {slack:.3g}")
    disk = surfaces.summary(surfaces.doubled_flat_disk(1.0)).area_ratio
    ok &= abs(disk - math.pi / 2) <= 1e-12
    record(9, "inequalities on model surfaces", ok,
           "; ".join(parts) + f"; doubled disk V/D^2 = {disk:.15f}")


def test_10_property_coverage():
    # the remaining quantitative content is discrete Gauss-Bonnet on every
    # kind of generated mesh
    worst = 0.0
    for model, res in ((surfaces.round_sphere(1.0), 3), (surfaces.round_projective_plane(1.0), 3),
                       (surfaces.flat_torus(2.0, 1.0), 16), (surfaces.flat_klein_bottle(1.0, 1.0), 16),
                       (surfaces.doubled_flat_disk(1.0), 8)):
        mesh = surfaces.sample_mesh(model, res)
        defects, _ = geodesy.angle_defect_curvature(mesh)
        worst = max(worst, abs(defects.sum() - 2 * math.pi * mesh.euler_characteristic()))
    record(10, "discrete Gauss-Bonnet on all mesh kinds", worst <= 1e-8,
           f"max |sum defect - 2 pi chi| = {worst:.1e} <= 1e-8")
