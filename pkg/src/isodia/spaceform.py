"""Comparison functions of the two-dimensional space forms.

All functions accept a curvature of any sign and stay accurate through the
removable singularity at zero curvature.  Two normalised helpers carry the
numerics:

    v_kappa(kappa, r) = pi * r**2 * _w(kappa * r**2)
    v_tilde(kappa, r) = pi * r**4 * _g(kappa * r**2)

``_w`` is written as a squared sinc, which has no cancellation anywhere, so
its Taylor branch is only needed to avoid 0/0.  ``_g`` contains the genuine
cancellation ``x + 2 cos(sqrt x) - 2 ~ x**2 / 12`` and uses a longer series
over a wider band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

PI2 = math.pi**2

# |kappa r^2| below which the series replaces the closed form.
W_SERIES_THRESHOLD = 1e-4
G_SERIES_THRESHOLD = 1.0
# lambda_chi(k) inside [-LAMBDA_TOL, LAMBDA_TOL] counts as zero.
LAMBDA_TOL = 1e-12
# slack for comparisons against the domain boundaries pi^2 and pi^2/4
_EDGE_RTOL = 1e-12

_G_TERMS = tuple(2.0 / math.factorial(2 * n + 4) for n in range(11))


def _w_series(x: float) -> float:
    return 1.0 - x / 12.0 + x * x / 360.0 - x**3 / 20160.0


def _w_closed(x: float) -> float:
    if x > 0:
        z = 0.5 * math.sqrt(x)
        s = math.sin(z) / z
    else:
        z = 0.5 * math.sqrt(-x)
        s = math.sinh(z) / z
    return s * s


def _w(x: float) -> float:
    """Return 2(1 - cos sqrt(x)) / x, continued to 1 at x = 0."""
    if abs(x) < W_SERIES_THRESHOLD:
        return _w_series(x)
    return _w_closed(x)


def _g_series(x: float) -> float:
    # sum_n 2 (-x)^n / (2n + 4)!
    acc = 0.0
    for c in reversed(_G_TERMS):
        acc = acc * (-x) + c
    return acc


def _g_closed(x: float) -> float:
    if x > 0:
        z = 0.5 * math.sqrt(x)
        s = math.sin(z)
        return (z - s) * (z + s) / (4.0 * z**4)
    z = 0.5 * math.sqrt(-x)
    s = math.sinh(z)
    return (s - z) * (s + z) / (4.0 * z**4)


def _g(x: float) -> float:
    """Return (x + 2 cos(sqrt x) - 2) / x**2, continued to 1/12 at x = 0."""
    if abs(x) < G_SERIES_THRESHOLD:
        return _g_series(x)
    return _g_closed(x)


def v_kappa(kappa: float, r: float) -> float:
    """Area of a geodesic ``r``-ball in the simply connected space form of
    constant curvature ``kappa``.

    Raises DomainError for ``r < 0`` or, when ``kappa > 0``, for a radius
    beyond the antipodal distance ``pi / sqrt(kappa)``.
    """
    kappa = float(kappa)
    r = float(r)
    if not r >= 0.0:
        raise DomainError(f"radius must be >= 0, got {r!r}", field="r")
    if kappa > 0.0 and kappa * r * r > PI2 * (1.0 + _EDGE_RTOL):
        raise DomainError(
            f"radius {r!r} exceeds pi/sqrt(kappa) = {math.pi / math.sqrt(kappa)!r}",
            field="r",
        )
    return math.pi * r * r * _w(kappa * r * r)


def v_tilde(kappa: float, r: float) -> float:
    """Iterated integral int_0^r int_0^t v_kappa(s) ds dt."""
    kappa = float(kappa)
    r = float(r)
    if not r >= 0.0:
        raise DomainError(f"radius must be >= 0, got {r!r}", field="r")
    return math.pi * r**4 * _g(kappa * r * r)


def w_of_k(k: float) -> float:
    """v_k(1) / pi for the normalised curvature ``k = kappa * D**2``."""
    k = float(k)
    if not k <= PI2 * (1.0 + _EDGE_RTOL):
        raise DomainError(f"k must be <= pi^2, got {k!r}", field="k")
    return _w(k)


def check_admissible(chi: int, k: float) -> None:
    """Reject (chi, k) pairs that no closed surface can realise.

    Gauss-Bonnet forces chi in {1, 2} for k > 0 and chi >= 0 for k >= 0;
    Bonnet-Myers gives k <= pi^2, and the projective plane is further limited
    to k <= pi^2 / 4 (otherwise lambda_1(k) < 0).  For chi < 0, Gauss-Bonnet
    with Bishop's bound needs -k * w(k) >= -2 chi, i.e. lambda_chi(k) >= 0.
    """
    if int(chi) != chi:
        raise DomainError(f"Euler number must be an integer, got {chi!r}", field="chi")
    if chi > 2:
        raise DomainError(f"closed surfaces have chi <= 2, got {chi}", field="chi")
    if not math.isfinite(k):
        raise DomainError(f"k must be finite, got {k!r}", field="k")
    if k > PI2 * (1.0 + _EDGE_RTOL):
        raise DomainError(f"k = {k!r} exceeds pi^2 (Bonnet-Myers)", field="k")
    if k > 0.0 and chi not in (1, 2):
        raise DomainError(f"k > 0 requires chi in {{1, 2}}, got chi = {chi}", field="chi")
    if k >= 0.0 and chi < 0:
        raise DomainError(f"k >= 0 requires chi >= 0, got chi = {chi}", field="chi")
    if chi == 1 and k > 0.25 * PI2 * (1.0 + _EDGE_RTOL):
        raise DomainError(f"projective plane requires k <= pi^2/4, got {k!r}", field="k")
    if chi < 0 and 2.0 * chi - k * _w(k) < -LAMBDA_TOL:
        raise DomainError(f"chi = {chi} needs more negative curvature than k = {k!r} "
                          "(lambda_chi(k) < 0)", field="k")


def lambda_chi(chi: int, k: float) -> float:
    """Curvature defect 2*chi - k*w(k); zero exactly at the rigid space forms."""
    check_admissible(chi, k)
    if k > 0.0:
        # 2(chi - 1 + cos sqrt k), written without cancellation near the zeros
        if chi == 2:
            c = math.cos(0.5 * math.sqrt(k))
            return 4.0 * c * c
        return 2.0 * math.cos(math.sqrt(k))
    return 2.0 * chi - k * _w(k)


def alpha_chi(chi: int, k: float) -> float:
    w = w_of_k(k)
    if k >= 0.0:
        return w + k * lambda_chi(chi, k) / 360.0
    check_admissible(chi, k)
    return w * w


@dataclass(frozen=True)
class NormalizedInvariants:
    """The quantities k, w(k), lambda_chi(k), alpha_chi(k) for one surface class."""

    chi: int
    k: float
    w: float
    lambda_chi: float
    alpha_chi: float

    @property
    def lambda_is_zero(self) -> bool:
        return abs(self.lambda_chi) <= LAMBDA_TOL


def normalized_invariants(chi: int, k: float) -> NormalizedInvariants:
    return NormalizedInvariants(
        chi=int(chi),
        k=float(k),
        w=w_of_k(k),
        lambda_chi=lambda_chi(chi, k),
        alpha_chi=alpha_chi(chi, k),
    )


@dataclass(frozen=True)
class SurfaceSummary:
    """Area, diameter, radius, Euler number and curvature lower bound of a
    closed surface.  Construction validates the comparison-geometry
    constraints any genuine surface satisfies.
    """

    area: float
    diameter: float
    radius: float
    euler_chi: int
    curv_lower: float

    def __post_init__(self):
        rtol = 1e-9
        if not (self.area > 0 and self.diameter > 0 and self.radius > 0):
            raise DomainError("area, diameter and radius must be positive")
        d, r = self.diameter, self.radius
        if not (0.5 * d * (1 - rtol) <= r <= d * (1 + rtol)):
            raise DomainError(f"radius {r} outside [D/2, D] for D = {d}", field="radius")
        # (chi, k) admissibility covers chi <= 2, Gauss-Bonnet and Bonnet-Myers.
        k = self.curv_lower * d * d
        if PI2 < k <= PI2 * (1 + rtol):
            k = PI2
        check_admissible(self.euler_chi, k)
        r_ball = r
        if self.curv_lower > 0:
            r_ball = min(r, math.pi / math.sqrt(self.curv_lower))
        bishop = v_kappa(self.curv_lower, r_ball)
        if self.area > bishop * (1 + rtol):
            raise DomainError(f"area {self.area} exceeds v_kappa(R) = {bishop}", field="area")

    @property
    def k(self) -> float:
        return self.curv_lower * self.diameter**2

    @property
    def rho(self) -> float:
        return self.radius / self.diameter

    @property
    def area_ratio(self) -> float:
        """V / D**2."""
        return self.area / self.diameter**2
