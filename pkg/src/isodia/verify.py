"""Cross-checks of the bounds against model surfaces and their meshes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

from . import bounds, geodesy, surfaces
from .spaceform import PI2


@dataclass(frozen=True)
class Check:
    """One named inequality ``measured <= limit`` (or ``|measured - target| <= tol``)."""

    name: str
    passed: bool
    measured: float
    limit: float
    slack: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (f"{tag}  {self.name}: measured={self.measured:.12g} "
                f"limit={self.limit:.12g} slack={self.slack:.3e}")


def upper(name: str, measured: float, limit: float, rtol: float = 0.0) -> Check:
    """``rtol`` absorbs rounding where the inequality is an equality."""
    slack = limit - measured
    return Check(name, slack >= -rtol * abs(limit), measured, limit, slack)


def close(name: str, measured: float, target: float, tol: float) -> Check:
    slack = tol - abs(measured - target)
    return Check(name, slack >= 0.0, measured, target, slack)


def relative(name: str, measured: float, target: float, rtol: float) -> Check:
    slack = rtol - abs(measured / target - 1.0)
    return Check(name, slack >= 0.0, measured, target, slack)


def quick_checks() -> Iterator[Check]:
    t2 = bounds.theorem_bound(2, 0.0)
    t1 = bounds.theorem_bound(1, 0.0)
    yield upper("sphere constant < 2.486", t2, 2.486)
    yield upper("projective constant < 2.743", t1, 2.743)
    yield upper("sphere constant beats 8/pi by 0.05", t2, 8 / math.pi - 0.05)
    for chi in (1, 2):
        yield close(f"corollary constant chi={chi} equals theorem at k=0",
                    bounds.corollary_flat_constant(chi), bounds.theorem_bound(chi, 0.0), 1e-12)

    for model, exact in ((surfaces.round_sphere(1.0), 4 / math.pi),
                         (surfaces.round_projective_plane(1.0), 8 / math.pi)):
        chi, k, rho = surfaces.normalized_k(model)
        rep = bounds.report(chi, k)
        ratio = surfaces.summary(model).area_ratio
        yield close(f"{model.name} lambda=0 limit equals V/D^2", rep.theorem_bound, ratio, 1e-12)
        yield close(f"{model.name} V/D^2 value", ratio, exact, 1e-12)

    t0 = bounds.theorem_bound(2, 0.0)
    for eps, tol in ((1e-3, 1e-2), (1e-6, 1e-5), (1e-9, 1e-8)):
        gap = max(abs(bounds.theorem_bound(2, s * eps) - t0) for s in (1, -1))
        yield upper(f"theorem continuity at k=+-{eps:g}", gap, tol)

    yield from model_inequality_checks()


def model_inequality_checks() -> Iterator[Check]:
    for model in surfaces.all_models():
        s = surfaces.summary(model)
        chi, k, rho = surfaces.normalized_k(model)
        rep = bounds.report(chi, k, rho)
        label = model.name if model.smooth else f"{model.name} (Alexandrov-limit check)"
        yield upper(f"{label} V <= D^2 * best [{rep.best_name}]",
                    s.area, s.diameter**2 * rep.best, rtol=1e-12)
        if chi == 0:
            yield upper(f"{model.name} flat V/D^2 <= 2", s.area_ratio, 2.0, rtol=1e-12)
    disk = surfaces.summary(surfaces.doubled_flat_disk(1.0))
    yield close("doubled disk V/D^2 = pi/2", disk.area_ratio, math.pi / 2, 1e-12)
    yield upper("doubled disk V/D^2 <= sphere constant", disk.area_ratio,
                bounds.corollary_flat_constant(2))


def full_checks(seed: int = 0) -> Iterator[Check]:
    yield from quick_checks()

    mesh, rep = geodesy_for(surfaces.round_sphere(1.0), 4, seed=seed)
    defects, _ = geodesy.angle_defect_curvature(mesh)
    yield relative("icosphere L4 area vs 4 pi", rep.area, 4 * math.pi, 0.01)
    yield relative("icosphere L4 diameter vs pi", rep.diameter_est, math.pi, 0.03)
    yield relative("icosphere L4 radius vs pi", rep.radius_est, math.pi, 0.03)
    yield close("icosphere L4 angle defect sum", float(defects.sum()), 4 * math.pi, 1e-8)
    k_est = min(rep.curvature_lower_est * rep.diameter_est**2, PI2)
    limit = bounds.report(2, k_est).theorem_bound * 1.05
    yield upper("icosphere L4 mesh V/D^2 <= 1.05 * theorem(2, k_est)",
                rep.area / rep.diameter_est**2, limit)

    mesh, rep = geodesy_for(surfaces.flat_torus(1.0, 1.0), 64, sources=64, seed=seed)
    defects, _ = geodesy.angle_defect_curvature(mesh)
    yield relative("grid torus 64 diameter vs sqrt(2)/2", rep.diameter_est, math.sqrt(0.5), 0.05)
    yield close("grid torus 64 angle defect sum", float(defects.sum()), 0.0, 1e-8)
    yield close("grid torus 64 area", rep.area, 1.0, 1e-12)

    mesh, rep = geodesy_for(surfaces.round_projective_plane(1.0), 3, seed=seed)
    defects, _ = geodesy.angle_defect_curvature(mesh)
    yield close("projective L3 angle defect sum", float(defects.sum()), 2 * math.pi, 1e-8)
    yield relative("projective L3 diameter vs pi/2", rep.diameter_est, math.pi / 2, 0.03)

    klein = surfaces.flat_klein_bottle(1.0, 1.0)
    s = surfaces.summary(klein)
    mesh, rep = geodesy_for(klein, 32, seed=seed)
    yield relative("Klein 32 mesh diameter vs covering-radius D", rep.diameter_est, s.diameter, 0.03)
    yield relative("Klein 32 mesh radius vs covering-radius R", rep.radius_est, s.radius, 0.03)

    mesh, rep = geodesy_for(surfaces.doubled_flat_disk(1.0), 16, seed=seed)
    defects, _ = geodesy.angle_defect_curvature(mesh)
    yield close("doubled disk angle defect sum", float(defects.sum()), 4 * math.pi, 1e-8)
    yield relative("doubled disk mesh diameter vs 2", rep.diameter_est, 2.0, 0.05)
    r_ext, _ = surfaces.doubled_disk_radius_oracle(1.0)
    yield relative("doubled disk extrapolated radius vs 2", r_ext, 2.0, 0.01)
    yield upper("doubled disk mesh V/D^2 <= sphere constant",
                rep.area / rep.diameter_est**2, bounds.corollary_flat_constant(2))


def geodesy_for(model, resolution: int, sources="auto", seed: int = 0):
    mesh = surfaces.sample_mesh(model, resolution)
    return mesh, geodesy.geodesy_report(mesh, sources=sources, seed=seed)


LEVELS: dict[str, Callable[..., Iterator[Check]]] = {
    "quick": lambda seed=0: quick_checks(),
    "full": full_checks,
}


def run(level: str = "quick", seed: int = 0) -> list[Check]:
    return list(LEVELS[level](seed=seed))
