import math

import numpy as np
import pytest

from isodia import bounds, geodesy, surfaces
from isodia.errors import DomainError
from isodia.spaceform import PI2
from isodia.surfaces import Kind, SurfaceModel


def test_sphere_summary():
    s = surfaces.summary(surfaces.round_sphere(2.0))
    assert (s.area, s.diameter, s.radius, s.euler_chi) == (16 * math.pi, 2 * math.pi, 2 * math.pi, 2)
    assert s.curv_lower == 0.25
    assert surfaces.summary(surfaces.round_sphere(1.0)).area_ratio == pytest.approx(4 / math.pi)


def test_projective_summary():
    s = surfaces.summary(surfaces.round_projective_plane(1.0))
    assert s.area_ratio == pytest.approx(8 / math.pi, rel=1e-15)
    assert s.euler_chi == 1


def test_torus_summary():
    s = surfaces.summary(surfaces.flat_torus(1.0, 1.0))
    assert s.area_ratio == pytest.approx(2.0, rel=1e-15)
    assert s.radius == s.diameter
    s = surfaces.summary(surfaces.flat_torus(3.0, 2.0))
    assert s.diameter == pytest.approx(math.hypot(3, 2) / 2)


def test_disk_summary():
    s = surfaces.summary(surfaces.doubled_flat_disk(1.5))
    assert s.area_ratio == pytest.approx(math.pi / 2, rel=1e-15)
    assert s.diameter == 3.0 and s.radius == 3.0
    assert not surfaces.doubled_flat_disk().smooth


@pytest.mark.parametrize("model,expected", [
    (surfaces.round_sphere(0.3), (2, PI2, 1.0)),
    (surfaces.round_sphere(7.0), (2, PI2, 1.0)),
    (surfaces.round_projective_plane(2.5), (1, PI2 / 4, 1.0)),
    (surfaces.flat_torus(2.0, 1.0), (0, 0.0, 1.0)),
])
def test_normalized_k(model, expected):
    assert surfaces.normalized_k(model) == expected


@pytest.mark.parametrize("kind,params", [
    (Kind.ROUND_SPHERE, (1.0, 2.0)),
    (Kind.FLAT_TORUS, (1.0,)),
    (Kind.FLAT_TORUS, (1.0, 2.0)),
    (Kind.DOUBLED_FLAT_DISK, (-1.0,)),
    (Kind.ROUND_SPHERE, (float("inf"),)),
])
def test_model_validation(kind, params):
    with pytest.raises(DomainError):
        SurfaceModel(kind, params)


def test_model_from_name():
    assert surfaces.model_from_name("klein", p=3, q=2) == surfaces.flat_klein_bottle(3.0, 2.0)
    assert surfaces.model_from_name("sphere", a=2).params == (2.0,)
    with pytest.raises(DomainError):
        surfaces.model_from_name("cube")


# -- Klein bottle -------------------------------------------------------------------

KLEIN_EXACT = {(1.0, 1.0): (math.sqrt(0.5), 0.625), (2.0, 1.0): (math.sqrt(1.25), 1.0625)}


@pytest.mark.parametrize("pq", sorted(KLEIN_EXACT))
def test_klein_covering_radius_values(pq):
    d, r = surfaces.klein_diameter_radius(*pq)
    assert d == pytest.approx(KLEIN_EXACT[pq][0], abs=1e-9)
    assert r == pytest.approx(KLEIN_EXACT[pq][1], abs=1e-9)


@pytest.mark.parametrize("pq,n", [((1.0, 1.0), 256), ((2.0, 1.0), 128)])
def test_klein_against_brute_force_grid(pq, n):
    p, q = pq
    d, r = surfaces.klein_diameter_radius(p, q)
    dg, rg = surfaces.klein_diameter_radius_grid(p, q, n)
    h = math.hypot(p, q) / n
    assert dg <= d + 1e-12 and d - dg <= h
    assert abs(r - rg) <= h


def test_klein_eccentricity_matches_distance_sampling():
    p, q, y0 = 1.3, 1.0, 0.17
    xs, ys = np.meshgrid(np.linspace(0, p, 301), np.linspace(0, q, 301))
    brute = surfaces.klein_distance(p, q, (0.0, y0), np.column_stack([xs.ravel(), ys.ravel()])).max()
    ecc = surfaces.klein_eccentricity(p, q, y0)
    assert brute <= ecc + 1e-12
    assert ecc - brute <= math.hypot(p, q) / 300


def test_klein_flat_ratio_below_two():
    rng = np.random.default_rng(11)
    for _ in range(6):
        q = 1.0
        p = float(rng.uniform(1.0, 3.0))
        s = surfaces.summary(surfaces.flat_klein_bottle(p, q))
        assert s.area_ratio <= 2.0
        assert s.diameter / 2 <= s.radius <= s.diameter


# -- meshes -------------------------------------------------------------------------

@pytest.mark.parametrize("level", [0, 1, 2, 3, 4])
def test_icosphere_counts(level):
    verts, faces = surfaces.icosphere(level)
    assert len(verts) == 10 * 4**level + 2
    assert len(faces) == 20 * 4**level
    assert np.allclose(np.linalg.norm(verts, axis=1), 1.0)


@pytest.mark.parametrize("model,res,chi", [
    (surfaces.round_sphere(1.0), 4, 2),
    (surfaces.round_projective_plane(1.0), 2, 1),
    (surfaces.flat_torus(1.0, 1.0), 5, 0),
    (surfaces.flat_klein_bottle(1.0, 1.0), 5, 0),
    (surfaces.doubled_flat_disk(1.0), 3, 2),
])
def test_mesh_topology(model, res, chi):
    mesh = surfaces.sample_mesh(model, res)
    assert mesh.euler_characteristic() == chi


def test_mesh_resolution_must_be_positive():
    with pytest.raises(DomainError):
        surfaces.sample_mesh(surfaces.round_sphere(), 0)
    with pytest.raises(DomainError):
        surfaces.sample_mesh(surfaces.round_sphere(), 1.5)


def test_mesh_generation_is_deterministic():
    a = surfaces.sample_mesh(surfaces.round_projective_plane(1.0), 2)
    b = surfaces.sample_mesh(surfaces.round_projective_plane(1.0), 2)
    assert np.array_equal(a.triangles, b.triangles)
    assert np.array_equal(a.corners, b.corners)


@pytest.mark.parametrize("model,res,area", [
    (surfaces.flat_torus(2.0, 1.0), 6, 2.0),
    (surfaces.flat_klein_bottle(2.0, 1.0), 6, 2.0),
])
def test_flat_mesh_area_exact(model, res, area):
    assert geodesy.mesh_area(surfaces.sample_mesh(model, res)) == pytest.approx(area, rel=1e-13)


@pytest.mark.parametrize("model,resolutions", [
    (surfaces.round_projective_plane(1.0), (1, 2, 3)),
    (surfaces.doubled_flat_disk(1.0), (2, 4, 8)),
])
def test_curved_mesh_area_converges(model, resolutions):
    exact = surfaces.summary(model).area
    errs = [abs(geodesy.mesh_area(surfaces.sample_mesh(model, r)) / exact - 1) for r in resolutions]
    assert errs[0] > errs[1] > errs[2]


def test_icosphere_area_convergence_rate():
    levels = [2, 3, 4, 5]
    errs = np.array([1 - geodesy.mesh_area(surfaces.sample_mesh(surfaces.round_sphere(), L))
                     / (4 * math.pi) for L in levels])
    assert np.all(errs > 0)
    consts = errs * 4.0 ** np.array(levels)
    fitted = float(np.exp(np.mean(np.log(consts))))
    print(f"icosphere area error fit: C = {fitted:.4f}")
    assert np.all(errs <= 1.1 * fitted * 4.0 ** -np.array(levels))
    assert consts.max() / consts.min() < 1.2


# -- inequalities on the models ---------------------------------------------------

@pytest.mark.parametrize("model", surfaces.all_models(), ids=lambda m: m.name)
def test_bounds_hold_on_models(model):
    s = surfaces.summary(model)
    chi, k, rho = surfaces.normalized_k(model)
    rep = bounds.report(chi, k, rho)
    for name, value in rep.present().items():
        assert s.area <= s.diameter**2 * value * (1 + 1e-12), name


def test_tightness_at_rigidity():
    for model, exact in ((surfaces.round_sphere(1.0), 4 / math.pi),
                         (surfaces.round_projective_plane(1.0), 8 / math.pi)):
        chi, k, _ = surfaces.normalized_k(model)
        rep = bounds.report(chi, k)
        assert rep.theorem_is_limit
        assert abs(rep.theorem_bound - exact) <= 1e-12
        assert abs(surfaces.summary(model).area_ratio - exact) <= 1e-12


def test_doubled_disk_below_sphere_constant():
    ratio = surfaces.summary(surfaces.doubled_flat_disk()).area_ratio
    assert ratio == pytest.approx(math.pi / 2)
    assert bounds.corollary_flat_constant(2) - ratio > 0.9


def test_doubled_disk_radius_oracle():
    r_ext, raw = surfaces.doubled_disk_radius_oracle(1.0, resolutions=(4, 8, 16))
    # the boundary circle is inscribed as a polygon, so coarse meshes can
    # dip slightly below 2a
    assert all(abs(r - 2.0) <= 0.01 for r in raw)
    assert abs(r_ext - 2.0) <= 0.02
