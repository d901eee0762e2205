"""Intrinsic diameter, radius, area and discrete curvature of triangle meshes.

Distances are shortest paths in a graph whose nodes are the mesh vertices
plus ``2**steiner_level - 1`` equally spaced points on every edge, with a
straight chord between every pair of nodes on the boundary of a common
triangle.  Each chord is a genuine path inside a flat triangle, so the graph
metric over-estimates the polyhedral geodesic distance.  Dyadic spacing
makes the node sets nested, so raising the level never lengthens a path.

A mesh may carry per-triangle ``corners`` instead of relying on vertex
positions.  This is how quotient surfaces without an isometric embedding
(flat tori, Klein bottles, the projective plane) are represented: the
combinatorics live in ``triangles`` and the metric in ``corners``.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import MeshError

logger = logging.getLogger(__name__)

AUTO_ALL_SOURCES_MAX = 3000
DEFAULT_SAMPLE_COUNT = 64
_CHUNK = 128
_LOCAL_EDGES = np.array([[0, 1], [1, 2], [2, 0]])


@dataclass
class TriangleMesh:
    """Closed triangulated surface.

    Parameters
    ----------
    vertices : array_like, shape (n, 3)
        Vertex positions.  Only used for geometry when ``corners`` is None.
    triangles : array_like, shape (f, 3)
        Vertex indices of each triangle.
    corners : array_like, shape (f, 3, 3), optional
        Positions of the three corners of each triangle in a local chart.
        Overrides ``vertices[triangles]`` for every metric computation.
    steiner_level : int
        Edge refinement used by the distance graph.
    euler_chi : int, optional
        Declared topology, checked by :meth:`validate`.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    corners: np.ndarray | None = None
    steiner_level: int = 1
    euler_chi: int | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.triangles = np.asarray(self.triangles, dtype=np.int64)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise MeshError(f"vertices must have shape (n, 3), got {self.vertices.shape}")
        if self.triangles.ndim != 2 or self.triangles.shape[1] != 3:
            raise MeshError(f"triangles must have shape (f, 3), got {self.triangles.shape}")
        if self.triangles.size and (self.triangles.min() < 0
                                    or self.triangles.max() >= len(self.vertices)):
            raise MeshError("triangle index out of range")
        if self.corners is not None:
            self.corners = np.asarray(self.corners, dtype=float)
            if self.corners.shape != (len(self.triangles), 3, 3):
                raise MeshError(f"corners must have shape (f, 3, 3), got {self.corners.shape}")
        if self.steiner_level < 0:
            raise MeshError("steiner_level must be >= 0")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def is_embedded(self) -> bool:
        """True when vertex positions alone carry the metric."""
        return self.corners is None

    def corner_positions(self) -> np.ndarray:
        if self.corners is not None:
            return self.corners
        return self.vertices[self.triangles]

    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Unique edges (e, 2) sorted per row, per-triangle edge ids (f, 3) and
        the number of triangles on each edge."""
        if "edges" not in self._cache:
            pairs = self.triangles[:, _LOCAL_EDGES]
            pairs = np.sort(pairs, axis=2).reshape(-1, 2)
            uniq, inv, counts = np.unique(pairs, axis=0, return_inverse=True,
                                          return_counts=True)
            self._cache["edges"] = (uniq, inv.reshape(-1, 3), counts)
        return self._cache["edges"]

    def euler_characteristic(self) -> int:
        edges, _, _ = self.edges()
        return self.n_vertices - len(edges) + len(self.triangles)

    def scale(self) -> float:
        c = self.corner_positions().reshape(-1, 3)
        return float(np.linalg.norm(c.max(axis=0) - c.min(axis=0)))

    def validate(self) -> None:
        """Raise MeshError unless the mesh is a closed, non-degenerate
        2-manifold with consistent edge lengths and the declared Euler number."""
        _, tri_edges, counts = self.edges()
        if np.any(counts != 2):
            bad = int(np.sum(counts != 2))
            raise MeshError(f"{bad} edges are not shared by exactly two triangles")
        areas = triangle_areas(self)
        if np.any(areas <= 1e-12 * self.scale() ** 2):
            raise MeshError(f"{int(np.sum(areas <= 0))} degenerate triangles")
        if self.corners is not None:
            lengths = _local_edge_lengths(self).ravel()
            ids = tri_edges.ravel()
            lo = np.full(counts.shape, np.inf)
            hi = np.zeros(counts.shape)
            np.minimum.at(lo, ids, lengths)
            np.maximum.at(hi, ids, lengths)
            if np.any(hi - lo > 1e-9 * self.scale()):
                raise MeshError("shared edges have inconsistent lengths in the corner charts")
        if self.euler_chi is not None and self.euler_characteristic() != self.euler_chi:
            raise MeshError(
                f"V - E + F = {self.euler_characteristic()} but declared chi = {self.euler_chi}"
            )


def _local_edge_lengths(mesh: TriangleMesh) -> np.ndarray:
    c = mesh.corner_positions()
    return np.linalg.norm(c[:, _LOCAL_EDGES[:, 1]] - c[:, _LOCAL_EDGES[:, 0]], axis=2)


def triangle_areas(mesh: TriangleMesh) -> np.ndarray:
    c = mesh.corner_positions()
    return 0.5 * np.linalg.norm(np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0]), axis=1)


def mesh_area(mesh: TriangleMesh) -> float:
    return float(triangle_areas(mesh).sum())


def corner_angles(mesh: TriangleMesh) -> np.ndarray:
    """Interior angle at each corner of each triangle, shape (f, 3)."""
    c = mesh.corner_positions()
    out = np.empty((len(c), 3))
    for i in range(3):
        a = c[:, (i + 1) % 3] - c[:, i]
        b = c[:, (i + 2) % 3] - c[:, i]
        cross = np.linalg.norm(np.cross(a, b), axis=1)
        out[:, i] = np.arctan2(cross, np.einsum("ij,ij->i", a, b))
    return out


def angle_defect_curvature(mesh: TriangleMesh) -> tuple[np.ndarray, float]:
    """Per-vertex angle defect and the smallest defect per unit vertex area.

    Vertex area is one third of the incident triangle area.
    """
    areas = triangle_areas(mesh)
    if np.any(areas <= 1e-12 * mesh.scale() ** 2):
        raise MeshError("degenerate triangle")
    angle_sum = np.bincount(mesh.triangles.ravel(), weights=corner_angles(mesh).ravel(),
                            minlength=mesh.n_vertices)
    defect = 2.0 * math.pi - angle_sum
    vertex_area = np.bincount(mesh.triangles.ravel(), weights=np.repeat(areas / 3.0, 3),
                              minlength=mesh.n_vertices)
    return defect, float(np.min(defect / vertex_area))


def distance_graph(mesh: TriangleMesh, steiner_level: int | None = None) -> csr_matrix:
    """Sparse symmetric chord graph; nodes [0, n) are the mesh vertices."""
    level = mesh.steiner_level if steiner_level is None else steiner_level
    key = ("graph", level)
    if key in mesh._cache:
        return mesh._cache[key]

    n = mesh.n_vertices
    edges, tri_edges, _ = mesh.edges()
    m = 2**level - 1
    c = mesh.corner_positions()
    nf = len(c)
    pos = [c[:, 0], c[:, 1], c[:, 2]]
    ids = [mesh.triangles[:, 0], mesh.triangles[:, 1], mesh.triangles[:, 2]]
    if m:
        frac = np.arange(1, m + 1) / (m + 1)
        for e, (a, b) in enumerate(_LOCAL_EDGES):
            forward = mesh.triangles[:, a] < mesh.triangles[:, b]
            for j in range(m):
                # point j sits at frac[j] from the lower-indexed endpoint
                s = np.where(forward, frac[j], 1.0 - frac[j])[:, None]
                pos.append(c[:, a] + s * (c[:, b] - c[:, a]))
                ids.append(n + tri_edges[:, e] * m + j)
    pos = np.stack(pos, axis=1)
    ids = np.stack(ids, axis=1)
    iu, ju = np.triu_indices(pos.shape[1], 1)
    w = np.linalg.norm(pos[:, iu] - pos[:, ju], axis=2).ravel()
    a = ids[:, iu].ravel()
    b = ids[:, ju].ravel()
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    total = n + len(edges) * m
    key_ab = lo * total + hi
    order = np.lexsort((w, key_ab))
    keep = order[np.r_[True, key_ab[order][1:] != key_ab[order][:-1]]]
    graph = csr_matrix((w[keep], (lo[keep], hi[keep])), shape=(total, total))
    logger.debug("distance graph: %d nodes, %d chords from %d triangles", total, len(keep), nf)
    mesh._cache[key] = graph
    return graph


def _distance_rows(mesh: TriangleMesh, sources) -> np.ndarray:
    graph = distance_graph(mesh)
    sources = np.atleast_1d(np.asarray(sources, dtype=np.int64))
    if sources.size and (sources.min() < 0 or sources.max() >= mesh.n_vertices):
        raise MeshError("source vertex out of range")
    rows = dijkstra(graph, directed=False, indices=sources)
    rows = np.atleast_2d(rows)[:, : mesh.n_vertices]
    if not np.all(np.isfinite(rows)):
        raise MeshError("mesh is disconnected")
    return rows


def single_source_distances(mesh: TriangleMesh, source: int) -> np.ndarray:
    """Graph distance from ``source`` to every mesh vertex."""
    return _distance_rows(mesh, [source])[0]


def farthest_point_sources(mesh: TriangleMesh, count: int, seed: int = 0) -> np.ndarray:
    """Greedy farthest-point sample of ``count`` vertices, starting from a
    vertex drawn with ``numpy.random.default_rng(seed)``."""
    n = mesh.n_vertices
    count = min(count, n)
    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(n))]
    nearest = single_source_distances(mesh, chosen[0])
    while len(chosen) < count:
        nxt = int(np.argmax(nearest))
        if nearest[nxt] == 0.0:
            break
        chosen.append(nxt)
        nearest = np.minimum(nearest, single_source_distances(mesh, nxt))
    return np.array(chosen, dtype=np.int64)


def resolve_sources(mesh: TriangleMesh, sources="all", seed: int = 0) -> np.ndarray:
    """Turn ``"all"``, ``"auto"``, a sample count or an index array into vertex indices."""
    if isinstance(sources, str):
        if sources == "all":
            return np.arange(mesh.n_vertices)
        if sources == "auto":
            if mesh.n_vertices <= AUTO_ALL_SOURCES_MAX:
                return np.arange(mesh.n_vertices)
            return farthest_point_sources(mesh, DEFAULT_SAMPLE_COUNT, seed)
        raise ValueError(f"unknown sources spec {sources!r}")
    if np.ndim(sources) == 1:
        return np.asarray(sources, dtype=np.int64)
    count = int(sources)
    if count < 1:
        raise ValueError("sample count must be >= 1")
    if count >= mesh.n_vertices:
        return np.arange(mesh.n_vertices)
    return farthest_point_sources(mesh, count, seed)


def eccentricities(mesh: TriangleMesh, sources="all", seed: int = 0) -> np.ndarray:
    """Largest distance from each selected source to any vertex."""
    idx = resolve_sources(mesh, sources, seed)
    out = np.empty(len(idx))
    for start in range(0, len(idx), _CHUNK):
        chunk = idx[start:start + _CHUNK]
        out[start:start + len(chunk)] = _distance_rows(mesh, chunk).max(axis=1)
    return out


def diameter_estimate(mesh: TriangleMesh, sources="all", seed: int = 0) -> float:
    """Max of source eccentricities; exact for the graph metric with all sources."""
    return float(eccentricities(mesh, sources, seed).max())


def radius_estimate(mesh: TriangleMesh, sources="all", seed: int = 0) -> float:
    """Min of source eccentricities; exact for the graph metric with all sources."""
    return float(eccentricities(mesh, sources, seed).min())


@dataclass(frozen=True)
class GeodesyReport:
    area: float
    diameter_est: float
    radius_est: float
    curvature_lower_est: float
    chi: int
    source_count: int

    def to_dict(self) -> dict:
        return {
            "area": self.area,
            "diameter": self.diameter_est,
            "radius": self.radius_est,
            "curvature_lower": self.curvature_lower_est,
            "chi": self.chi,
            "sources": self.source_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def geodesy_report(mesh: TriangleMesh, sources="auto", seed: int = 0) -> GeodesyReport:
    mesh.validate()
    idx = resolve_sources(mesh, sources, seed)
    ecc = eccentricities(mesh, idx)
    _, curv = angle_defect_curvature(mesh)
    return GeodesyReport(
        area=mesh_area(mesh),
        diameter_est=float(ecc.max()),
        radius_est=float(ecc.min()),
        curvature_lower_est=curv,
        chi=mesh.euler_characteristic(),
        source_count=len(idx),
    )


def write_off(mesh: TriangleMesh, path) -> None:
    """Write an embedded mesh in OFF format.

    Quotient meshes carry their metric in per-triangle charts that OFF cannot
    represent, so they are refused.
    """
    Path(path).write_text(off_text(mesh))


def off_text(mesh: TriangleMesh) -> str:
    if not mesh.is_embedded:
        raise MeshError("mesh has no embedding in R^3 (metric lives in corner charts); "
                        "OFF export is only available for embedded meshes")
    edges, _, _ = mesh.edges()
    lines = ["OFF", f"{mesh.n_vertices} {len(mesh.triangles)} {len(edges)}"]
    lines += [" ".join(f"{x:.17g}" for x in v) for v in mesh.vertices]
    lines += [f"3 {i} {j} {k}" for i, j, k in mesh.triangles]
    return "\n".join(lines) + "\n"


def read_off(path, steiner_level: int = 1) -> TriangleMesh:
    return parse_off(Path(path).read_text(), steiner_level=steiner_level)


def parse_off(text: str, steiner_level: int = 1) -> TriangleMesh:
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens or tokens[0] != "OFF":
        raise MeshError("missing OFF header")
    try:
        nv, nf = int(tokens[1]), int(tokens[2])
        pos = 4
        verts = np.array(tokens[pos:pos + 3 * nv], dtype=float).reshape(nv, 3)
        pos += 3 * nv
        faces = []
        for _ in range(nf):
            deg = int(tokens[pos])
            if deg != 3:
                raise MeshError(f"only triangular faces are supported, got degree {deg}")
            faces.append([int(t) for t in tokens[pos + 1:pos + 4]])
            pos += 1 + deg
    except (IndexError, ValueError) as exc:
        if isinstance(exc, MeshError):
            raise
        raise MeshError(f"malformed OFF data: {exc}") from exc
    return TriangleMesh(verts, np.array(faces, dtype=np.int64).reshape(-1, 3),
                        steiner_level=steiner_level)
