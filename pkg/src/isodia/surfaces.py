"""Model surfaces with known invariants, and triangulations of them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial import Delaunay, cKDTree

from .errors import DomainError
from .geodesy import TriangleMesh, radius_estimate
from .spaceform import PI2, SurfaceSummary


class Kind(enum.Enum):
    ROUND_SPHERE = "sphere"
    ROUND_PROJECTIVE_PLANE = "projective"
    FLAT_TORUS = "torus"
    FLAT_KLEIN_BOTTLE = "klein"
    DOUBLED_FLAT_DISK = "disk"


@dataclass(frozen=True)
class SurfaceModel:
    """A model surface.

    Sphere, projective plane and doubled disk take one radius ``a``; the
    flat torus and Klein bottle take side lengths ``(p, q)`` with ``p >= q``.
    The Klein bottle is the quotient of the plane by
    ``(x, y) -> (x + p, -y)`` and ``(x, y) -> (x, y + q)``.
    """

    kind: Kind
    params: tuple[float, ...]

    def __post_init__(self):
        n_expected = 2 if self.kind in (Kind.FLAT_TORUS, Kind.FLAT_KLEIN_BOTTLE) else 1
        if len(self.params) != n_expected:
            raise DomainError(f"{self.kind.value} takes {n_expected} parameter(s), "
                              f"got {self.params!r}", field="params")
        if not all(math.isfinite(x) and x > 0 for x in self.params):
            raise DomainError(f"parameters must be positive, got {self.params!r}",
                              field="params")
        if n_expected == 2 and self.params[0] < self.params[1]:
            raise DomainError(f"expected p >= q, got {self.params!r}", field="params")

    @property
    def smooth(self) -> bool:
        return self.kind is not Kind.DOUBLED_FLAT_DISK

    @property
    def name(self) -> str:
        return f"{self.kind.value}({', '.join(f'{x:g}' for x in self.params)})"


def round_sphere(a: float = 1.0) -> SurfaceModel:
    return SurfaceModel(Kind.ROUND_SPHERE, (float(a),))


def round_projective_plane(a: float = 1.0) -> SurfaceModel:
    return SurfaceModel(Kind.ROUND_PROJECTIVE_PLANE, (float(a),))


def flat_torus(p: float = 1.0, q: float = 1.0) -> SurfaceModel:
    return SurfaceModel(Kind.FLAT_TORUS, (float(p), float(q)))


def flat_klein_bottle(p: float = 1.0, q: float = 1.0) -> SurfaceModel:
    return SurfaceModel(Kind.FLAT_KLEIN_BOTTLE, (float(p), float(q)))


def doubled_flat_disk(a: float = 1.0) -> SurfaceModel:
    return SurfaceModel(Kind.DOUBLED_FLAT_DISK, (float(a),))


# -- flat Klein bottle ------------------------------------------------------

def _klein_orbit(p: float, q: float, x0: float, y0: float, reach: int = 3) -> np.ndarray:
    m, n = np.meshgrid(np.arange(-reach, reach + 1), np.arange(-reach, reach + 1),
                       indexing="ij")
    m, n = m.ravel(), n.ravel()
    sign = np.where(m % 2 == 0, 1.0, -1.0)
    return np.column_stack([x0 + m * p, sign * y0 + n * q])


def klein_distance(p: float, q: float, a, b) -> np.ndarray:
    """Brute-force distance between points of the flat Klein bottle.

    ``a`` is one point, ``b`` an array of points (k, 2); minimises over the
    deck-transformation images of ``b`` with up to 3 shifts each way.
    """
    a = np.asarray(a, dtype=float)
    b = np.atleast_2d(np.asarray(b, dtype=float))
    best = np.full(len(b), np.inf)
    for m in range(-3, 4):
        sign = 1.0 if m % 2 == 0 else -1.0
        for n in range(-3, 4):
            dx = b[:, 0] + m * p - a[0]
            dy = sign * b[:, 1] + n * q - a[1]
            np.minimum(best, np.hypot(dx, dy), out=best)
    return best


def klein_eccentricity(p: float, q: float, y0: float) -> float:
    """Largest distance from the point (0, y0) of the flat Klein bottle.

    Equals the covering radius of the orbit of (0, y0) in the plane, i.e.
    the largest circumradius of its Delaunay triangles.
    """
    pts = _klein_orbit(p, q, 0.0, y0)
    tri = Delaunay(pts)
    a, b, c = (pts[tri.simplices[:, i]] for i in range(3))
    ab, ac = b - a, c - a
    d = 2.0 * (ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0])
    ok = np.abs(d) > 1e-12 * p * q
    ab2 = (ab**2).sum(axis=1)
    ac2 = (ac**2).sum(axis=1)
    ux = (ac[:, 1] * ab2 - ab[:, 1] * ac2)[ok] / d[ok]
    uy = (ab[:, 0] * ac2 - ac[:, 0] * ab2)[ok] / d[ok]
    centre = a[ok] + np.column_stack([ux, uy])
    # every empty circle is equivalent to one centred in this window
    inside = (np.abs(centre[:, 0]) <= p) & (np.abs(centre[:, 1] - y0) <= q)
    return float(np.hypot(ux, uy)[inside].max())


@lru_cache(maxsize=64)
def klein_diameter_radius(p: float, q: float, samples: int = 257) -> tuple[float, float]:
    """(D, R) of the flat Klein bottle with sides p >= q.

    x-translations and y -> y + q/2, y -> -y are isometries, so the
    eccentricity depends only on y0 in [0, q/4].  It is scanned on a grid and
    both extremes refined with a bounded scalar search.
    """
    ys = np.linspace(0.0, q / 4.0, samples)
    ecc = np.array([klein_eccentricity(p, q, y) for y in ys])

    def refine(i: int, sign: float) -> float:
        # sign = +1 minimises, -1 maximises
        lo, hi = ys[max(i - 1, 0)], ys[min(i + 1, samples - 1)]
        res = minimize_scalar(lambda y: sign * klein_eccentricity(p, q, y),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * q})
        return sign * min(res.fun, sign * ecc[i])

    radius = refine(int(np.argmin(ecc)), 1.0)
    diameter = refine(int(np.argmax(ecc)), -1.0)
    return float(diameter), float(radius)


def klein_diameter_radius_grid(p: float, q: float, n: int = 256) -> tuple[float, float]:
    """Brute-force (D, R) of the flat Klein bottle from an n x n sample grid.

    Base points run over the grid column x = 0 (x-translations are
    isometries); targets over the full grid.  Both values are lower
    estimates of the true ones up to the grid spacing.
    """
    xs = (np.arange(n) + 0.5) * p / n
    ys = (np.arange(n) + 0.5) * q / n
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    targets = np.column_stack([gx.ravel(), gy.ravel()])
    ecc = np.array([klein_distance(p, q, (0.0, y), targets).max() for y in ys])
    return float(ecc.max()), float(ecc.min())


# -- summaries --------------------------------------------------------------

def doubled_disk_radius_oracle(a: float = 1.0, resolutions=(8, 16, 32),
                               steiner_level: int = 2, sources=64,
                               seed: int = 0) -> tuple[float, list[float]]:
    """Mesh estimate of the doubled-disk radius, Richardson-extrapolated.

    Returns the extrapolated value and the raw estimates.  The raw values
    over-estimate and decrease towards the analytic 2a.
    """
    raw = []
    for res in resolutions:
        mesh = sample_mesh(doubled_flat_disk(a), res)
        mesh.steiner_level = steiner_level
        raw.append(radius_estimate(mesh, sources, seed))
    r1, r2, r3 = raw[-3:]
    d12, d23 = r1 - r2, r2 - r3
    if d12 > 0 and d23 > 0 and d12 != d23:
        order = math.log2(d12 / d23)
        if order > 0:
            return r3 - d23 / (2.0**order - 1.0), raw
    # error assumed linear in the mesh size
    return r3 - d23, raw


def summary(model: SurfaceModel) -> SurfaceSummary:
    kind = model.kind
    if kind is Kind.ROUND_SPHERE:
        (a,) = model.params
        return SurfaceSummary(4 * math.pi * a * a, math.pi * a, math.pi * a, 2, 1 / (a * a))
    if kind is Kind.ROUND_PROJECTIVE_PLANE:
        (a,) = model.params
        half = 0.5 * math.pi * a
        return SurfaceSummary(2 * math.pi * a * a, half, half, 1, 1 / (a * a))
    if kind is Kind.FLAT_TORUS:
        p, q = model.params
        d = 0.5 * math.hypot(p, q)
        return SurfaceSummary(p * q, d, d, 0, 0.0)
    if kind is Kind.FLAT_KLEIN_BOTTLE:
        p, q = model.params
        d, r = klein_diameter_radius(p, q)
        return SurfaceSummary(p * q, d, r, 0, 0.0)
    (a,) = model.params
    # every point has eccentricity 2a (see doubled_disk_radius_oracle)
    return SurfaceSummary(2 * math.pi * a * a, 2 * a, 2 * a, 2, 0.0)


def normalized_k(model: SurfaceModel) -> tuple[int, float, float]:
    """(chi, k = kappa D^2, rho = R/D) with the exact rigid values snapped."""
    s = summary(model)
    k, rho = s.k, s.rho
    for exact in (PI2, PI2 / 4):
        if abs(k - exact) <= 1e-12 * exact:
            k = exact
    if abs(rho - 1.0) <= 1e-12:
        rho = 1.0
    return s.euler_chi, k, rho


# -- meshes -----------------------------------------------------------------

_PHI = (1.0 + math.sqrt(5.0)) / 2.0
_ICOSA_V = np.array([
    [-1, _PHI, 0], [1, _PHI, 0], [-1, -_PHI, 0], [1, -_PHI, 0],
    [0, -1, _PHI], [0, 1, _PHI], [0, -1, -_PHI], [0, 1, -_PHI],
    [_PHI, 0, -1], [_PHI, 0, 1], [-_PHI, 0, -1], [-_PHI, 0, 1],
], dtype=float)
_ICOSA_F = np.array([
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
], dtype=np.int64)


def icosphere(level: int, radius: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Vertices and faces of the icosahedron subdivided ``level`` times,
    projected to the sphere.  10 * 4**level + 2 vertices."""
    verts = _ICOSA_V / np.linalg.norm(_ICOSA_V, axis=1, keepdims=True)
    faces = _ICOSA_F
    for _ in range(level):
        edges = np.sort(faces[:, [[0, 1], [1, 2], [2, 0]]], axis=2).reshape(-1, 2)
        uniq, inv = np.unique(edges, axis=0, return_inverse=True)
        mids = verts[uniq[:, 0]] + verts[uniq[:, 1]]
        mids /= np.linalg.norm(mids, axis=1, keepdims=True)
        mid_idx = (len(verts) + inv.reshape(-1, 3))
        a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
        ab, bc, ca = mid_idx[:, 0], mid_idx[:, 1], mid_idx[:, 2]
        faces = np.concatenate([
            np.column_stack([a, ab, ca]),
            np.column_stack([b, bc, ab]),
            np.column_stack([c, ca, bc]),
            np.column_stack([ab, bc, ca]),
        ])
        verts = np.vstack([verts, mids])
    return verts * radius, faces


def _projective_mesh(level: int, radius: float) -> TriangleMesh:
    verts, faces = icosphere(level, radius)
    _, antipode = cKDTree(verts).query(-verts)
    rep = np.minimum(np.arange(len(verts)), antipode)
    keep_v = np.unique(rep)
    new_index = np.full(len(verts), -1, dtype=np.int64)
    new_index[keep_v] = np.arange(len(keep_v))
    tris = new_index[rep[faces]]
    _, first = np.unique(np.sort(tris, axis=1), axis=0, return_index=True)
    first = np.sort(first)
    return TriangleMesh(verts[keep_v], tris[first], corners=verts[faces[first]], euler_chi=1)


def _grid_quotient(p: float, q: float, n: int, glide: bool) -> TriangleMesh:
    if n < 3:
        raise DomainError("grid resolution must be >= 3", field="resolution")
    hx, hy = p / n, q / n

    def index(i, j):
        i = np.asarray(i)
        j = np.asarray(j)
        wrap = i == n
        if glide:
            j = np.where(wrap, (-j) % n, j)
        i = np.where(wrap, 0, i)
        return i * n + (j % n)

    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    lower = [(ii, jj), (ii + 1, jj), (ii + 1, jj + 1)]
    upper = [(ii, jj), (ii + 1, jj + 1), (ii, jj + 1)]
    tris, corners = [], []
    for cell in (lower, upper):
        tris.append(np.column_stack([index(i, j) for i, j in cell]))
        corners.append(np.stack([np.column_stack([i * hx, j * hy, np.zeros(len(ii))])
                                 for i, j in cell], axis=1))
    gx, gy = np.meshgrid(np.arange(n) * hx, np.arange(n) * hy, indexing="ij")
    verts = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(n * n)])
    return TriangleMesh(verts, np.concatenate(tris), corners=np.concatenate(corners),
                        euler_chi=0)


def _ring_strip(inner: list[int], outer: list[int], inner_ang, outer_ang) -> list[tuple]:
    """Triangulate the band between two closed rings sorted by angle."""
    tris = []
    i = j = 0
    ni, no = len(inner), len(outer)
    while i < ni or j < no:
        ai = inner_ang[(i + 1) % ni] + (2 * math.pi if i + 1 >= ni else 0)
        ao = outer_ang[(j + 1) % no] + (2 * math.pi if j + 1 >= no else 0)
        if j < no and (i >= ni or ao <= ai):
            tris.append((inner[i % ni], outer[j % no], outer[(j + 1) % no]))
            j += 1
        else:
            tris.append((inner[i % ni], outer[j % no], inner[(i + 1) % ni]))
            i += 1
    return tris


def _doubled_disk_mesh(a: float, rings: int) -> TriangleMesh:
    counts = [6 * i for i in range(1, rings + 1)]
    angles = [2 * math.pi * np.arange(c) / c for c in counts]
    verts = []
    boundary = list(range(counts[-1]))
    verts += [(a * math.cos(t), a * math.sin(t), 0.0) for t in angles[-1]]

    def sheet(flip: bool) -> list[tuple]:
        centre = len(verts)
        verts.append((0.0, 0.0, 0.0))
        ring_ids = []
        for r in range(rings - 1):
            start = len(verts)
            rad = a * (r + 1) / rings
            verts.extend((rad * math.cos(t), rad * math.sin(t), 0.0) for t in angles[r])
            ring_ids.append(list(range(start, start + counts[r])))
        ring_ids.append(boundary)
        tris = [(centre, ring_ids[0][j], ring_ids[0][(j + 1) % counts[0]])
                for j in range(counts[0])]
        for r in range(rings - 1):
            tris += _ring_strip(ring_ids[r], ring_ids[r + 1], angles[r], angles[r + 1])
        if flip:
            tris = [(t[0], t[2], t[1]) for t in tris]
        return tris

    tris = sheet(False) + sheet(True)
    return TriangleMesh(np.array(verts), np.array(tris, dtype=np.int64), euler_chi=2)


def sample_mesh(model: SurfaceModel, resolution: int) -> TriangleMesh:
    """Triangulate a model.

    ``resolution`` is the subdivision level for the sphere and projective
    plane, the grid size for flat quotients and the ring count for the
    doubled disk.
    """
    if int(resolution) != resolution or resolution < 1:
        raise DomainError(f"resolution must be a positive integer, got {resolution!r}",
                          field="resolution")
    resolution = int(resolution)
    kind = model.kind
    if kind is Kind.ROUND_SPHERE:
        verts, faces = icosphere(resolution, model.params[0])
        mesh = TriangleMesh(verts, faces, euler_chi=2)
    elif kind is Kind.ROUND_PROJECTIVE_PLANE:
        mesh = _projective_mesh(resolution, model.params[0])
    elif kind is Kind.FLAT_TORUS:
        mesh = _grid_quotient(*model.params, resolution, glide=False)
    elif kind is Kind.FLAT_KLEIN_BOTTLE:
        mesh = _grid_quotient(*model.params, resolution, glide=True)
    else:
        mesh = _doubled_disk_mesh(model.params[0], resolution)
    mesh.validate()
    return mesh


MODELS = {k.value: k for k in Kind}


def model_from_name(name: str, a: float = 1.0, p: float = 1.0, q: float = 1.0) -> SurfaceModel:
    try:
        kind = MODELS[name]
    except KeyError:
        raise DomainError(f"unknown model {name!r}; choose from {sorted(MODELS)}",
                          field="model") from None
    if kind in (Kind.FLAT_TORUS, Kind.FLAT_KLEIN_BOTTLE):
        return SurfaceModel(kind, (float(p), float(q)))
    return SurfaceModel(kind, (float(a),))


def all_models() -> list[SurfaceModel]:
    """One representative of every model kind plus a few non-square flat ones."""
    return [
        round_sphere(1.0),
        round_projective_plane(1.0),
        flat_torus(1.0, 1.0),
        flat_torus(2.0, 1.0),
        flat_klein_bottle(1.0, 1.0),
        flat_klein_bottle(2.0, 1.0),
        doubled_flat_disk(1.0),
    ]
