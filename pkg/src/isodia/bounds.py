"""Upper bounds on V / D**2 for closed surfaces with a curvature lower bound.

Everything is in the D = 1 normalisation: ``k = kappa * D**2`` and
``rho = R / D``.  Multiply by ``D**2`` to recover an area bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import ConvergenceFailure, DomainError, LambdaNotPositive
from .spaceform import (
    LAMBDA_TOL,
    PI2,
    _w,
    alpha_chi,
    check_admissible,
    lambda_chi,
    v_kappa,
    v_tilde,
    w_of_k,
)

BRACKET_LO = 1e-9
XTOL = 1e-14
MAXITER = 200

# (chi, k) where lambda_chi(k) = 0: round sphere, round projective plane, flat.
RIGIDITY_POINTS = ((2, PI2), (1, PI2 / 4), (0, 0.0))
_RIGIDITY_KTOL = 1e-5


@dataclass(frozen=True)
class RootSolveResult:
    """Bisection outcome.

    ``crossing`` is False when the two sides never meet inside the bracket;
    ``r`` is then the right endpoint and ``residual`` the gap there.
    """

    r: float
    residual: float
    iterations: int
    crossing: bool = True
    scale: float = 1.0


def bisect(f: Callable[[float], float], lo: float, hi: float,
           xtol: float = XTOL, maxiter: int = MAXITER) -> RootSolveResult:
    """Root of a continuous ``f`` with ``f(lo) > 0 >= f(hi)`` or vice versa.

    Returns the bracket endpoint with the smaller residual once the bracket
    is narrower than ``xtol``.
    """
    flo, fhi = f(lo), f(hi)
    scale = max(abs(flo), abs(fhi))
    if flo == 0.0:
        return RootSolveResult(lo, 0.0, 0, scale=scale)
    if fhi == 0.0:
        return RootSolveResult(hi, 0.0, 0, scale=scale)
    if (flo > 0) == (fhi > 0):
        raise DomainError(f"no sign change on [{lo}, {hi}]: f = {flo}, {fhi}")
    for it in range(1, maxiter + 1):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return RootSolveResult(mid, 0.0, it, scale=scale)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
        if hi - lo <= xtol:
            if abs(flo) <= abs(fhi):
                return RootSolveResult(lo, flo, it, scale=scale)
            return RootSolveResult(hi, fhi, it, scale=scale)
    raise ConvergenceFailure(f"bisection did not reach xtol={xtol} in {maxiter} iterations")


def is_rigidity_point(chi: int, k: float) -> bool:
    """True if (chi, k) is one of the lambda = 0 cases (constant curvature >= 0)."""
    return any(chi == c and abs(k - kr) <= _RIGIDITY_KTOL for c, kr in RIGIDITY_POINTS)


def _positive_lambda(chi: int, k: float) -> float:
    lam = lambda_chi(chi, k)
    if lam <= LAMBDA_TOL:
        raise LambdaNotPositive(
            f"lambda_{chi}({k!r}) = {lam:.3e} is zero within tolerance", field="k"
        )
    return lam


def _check_rho(rho: float) -> None:
    if not 0.5 <= rho <= 1.0:
        raise DomainError(f"rho = R/D must lie in [1/2, 1], got {rho!r}", field="rho")


def bishop_bound(k: float, rho: float) -> float:
    """v_k(rho): Bishop's V <= v_kappa(R), scaled to D = 1."""
    _check_rho(rho)
    w_of_k(k)
    return v_kappa(k, rho)


def theorem_bound(chi: int, k: float) -> float:
    """Closed-form bound v_k(r*) from the quadratic inequality in r**2.

    r*^2 = (-6w + 6 sqrt(w^2 + lambda*alpha/3)) / lambda is evaluated as
    2 alpha / (w + sqrt(w^2 + lambda*alpha/3)) to avoid cancellation when
    lambda is small.  For strongly negative k, r* may exceed 1, in which case
    the value is weaker than v_k(1).
    """
    lam = _positive_lambda(chi, k)
    w = w_of_k(k)
    alpha = alpha_chi(chi, k)
    r2 = 2.0 * alpha / (w + math.sqrt(w * w + lam * alpha / 3.0))
    # v_k(r) = pi r^2 w(k r^2), without the r <= pi/sqrt(k) guard of v_kappa
    return math.pi * r2 * _w(k * r2)


def corollary_flat_constant(chi: int) -> float:
    """(sqrt(9 + 6 chi) - 3) pi / chi, the k = 0 case of the theorem."""
    if chi not in (1, 2):
        raise DomainError(f"chi must be 1 or 2, got {chi!r}", field="chi")
    return (math.sqrt(9.0 + 6.0 * chi) - 3.0) * math.pi / chi


def _radius_side(chi: int, k: float) -> Callable[[float], float]:
    """The decreasing side of the root equation as a function of R/D."""
    v1 = v_kappa(k, 1.0)
    if k >= 0.0:
        return lambda r: math.pi - 2.0 * math.pi * chi * v_tilde(k, r) / v1
    vt1 = v_tilde(k, 1.0)

    def quotient(r: float) -> float:
        vt = v_tilde(k, r)
        return (math.pi - 2.0 * math.pi * chi * vt / v1 - k * vt1) / (1.0 - k * vt / v1)

    return quotient


def prop_bound(chi: int, k: float, rho: float) -> float:
    """Area bound from the radius, both curvature branches, at D = 1."""
    check_admissible(chi, k)
    _check_rho(rho)
    return _radius_side(chi, k)(rho)


def corollary_radius_bound(chi: int, rho: float) -> float:
    """pi (1 - chi rho^4 / 6) for nonnegative curvature."""
    if chi < 0 or chi > 2:
        raise DomainError(f"nonnegative curvature needs chi in 0..2, got {chi!r}", field="chi")
    _check_rho(rho)
    return math.pi * (1.0 - chi * rho**4 / 6.0)


def _assert_decreasing(fn: Callable[[float], float], n: int = 33) -> None:
    vals = [fn(BRACKET_LO + (1.0 - BRACKET_LO) * i / (n - 1)) for i in range(n)]
    for a, b in zip(vals, vals[1:]):
        if b > a + 1e-12 * max(1.0, abs(a)):
            raise DomainError("radius-side function is not decreasing on [0, 1]")


def root_bound(chi: int, k: float) -> tuple[float, RootSolveResult]:
    """Bound v_k(r) at the crossing of the radius-side function with v_k(r).

    Solved by bisection on [1e-9, 1].  When the sides do not cross in the
    bracket the supremum of their minimum sits at r = 1 and v_k(1) is
    returned.  Rigidity points are allowed; there the crossing is at r = 1.
    """
    if is_rigidity_point(chi, k):
        check_admissible(chi, k)
    else:
        _positive_lambda(chi, k)
    side = _radius_side(chi, k)
    if k < 0.0:
        _assert_decreasing(side)

    def gap(r: float) -> float:
        return side(r) - v_kappa(k, r)

    g1 = gap(1.0)
    if g1 >= 0.0:
        v1 = v_kappa(k, 1.0)
        scale = max(abs(gap(BRACKET_LO)), abs(g1))
        return v1, RootSolveResult(1.0, g1, 0, crossing=g1 == 0.0, scale=scale)
    res = bisect(gap, BRACKET_LO, 1.0)
    return v_kappa(k, res.r), res


def quartic_bound(chi: int, k: float) -> float:
    """Bound for k < 0 from the quartic inequality in r**2.

    Substituting f(r) >= r^4/12 into k^2 f^2 + (lambda - k r^2) f + w r^2 - w^2 = 0
    gives G(r) = k^2 r^8/144 + (lambda - k r^2) r^4/12 + w r^2 - w^2 <= 0 with
    G increasing on [0, 1]; the bound is v_k at the root of G (or v_k(1) if
    G(1) <= 0).
    """
    if not k < 0.0:
        raise DomainError(f"quartic bound needs k < 0, got {k!r}", field="k")
    lam = _positive_lambda(chi, k)
    w = w_of_k(k)

    def G(r: float) -> float:
        r2 = r * r
        r4 = r2 * r2
        return k * k * r4 * r4 / 144.0 + (lam - k * r2) * r4 / 12.0 + w * r2 - w * w

    if G(1.0) <= 0.0:
        return v_kappa(k, 1.0)
    res = bisect(G, 0.0, 1.0)
    return v_kappa(k, res.r)


BOUND_ORDER = (
    "root", "quartic", "theorem", "prop", "corollary_radius",
    "bishop_at_R", "bishop_at_D", "trivial_pi",
)


@dataclass
class BoundReport:
    """Every applicable upper bound on V / D**2 for one (chi, k[, rho]).

    ``trivial_pi`` is always listed but only counts towards ``best`` for
    k >= 0, where it is a valid bound.  ``theorem_is_limit`` marks the
    lambda = 0 case in which ``theorem_bound`` holds the limit v_k(1).
    """

    chi: int
    k: float
    trivial_pi: float
    bishop_at_D: float
    best: float = math.inf
    best_name: str = ""
    rho: float | None = None
    theorem_bound: float | None = None
    root_bound: float | None = None
    quartic_bound: float | None = None
    prop_bound: float | None = None
    corollary_radius_bound: float | None = None
    bishop_at_R: float | None = None
    theorem_is_limit: bool = False
    notes: list[str] = field(default_factory=list)

    def present(self) -> dict[str, float]:
        """Bounds that are valid for this input, keyed by short name."""
        out = {
            "root": self.root_bound,
            "quartic": self.quartic_bound,
            "theorem": self.theorem_bound,
            "prop": self.prop_bound,
            "corollary_radius": self.corollary_radius_bound,
            "bishop_at_R": self.bishop_at_R,
            "bishop_at_D": self.bishop_at_D,
            "trivial_pi": self.trivial_pi if self.k >= 0.0 else None,
        }
        return {name: v for name, v in out.items() if v is not None}


def report(chi: int, k: float, rho: float | None = None) -> BoundReport:
    try:
        check_admissible(chi, k)
        if rho is not None:
            _check_rho(rho)
    except DomainError as exc:
        raise DomainError(f"report({chi}, {k!r}, {rho!r}) rejected: {exc.args[0]}",
                          field=exc.field) from exc

    rep = BoundReport(chi=int(chi), k=float(k), trivial_pi=math.pi,
                      bishop_at_D=v_kappa(k, 1.0), rho=rho)
    lam = lambda_chi(chi, k)
    if lam > LAMBDA_TOL:
        rep.theorem_bound = theorem_bound(chi, k)
        rep.root_bound = root_bound(chi, k)[0]
        if k < 0.0:
            rep.quartic_bound = quartic_bound(chi, k)
    elif is_rigidity_point(chi, k):
        rep.theorem_bound = v_kappa(k, 1.0)
        rep.theorem_is_limit = True
        rep.notes.append(
            "lambda = 0: constant-curvature rigidity case, theorem slot holds the limit v_k(1)"
        )
    else:
        raise LambdaNotPositive(f"lambda_{chi}({k!r}) = {lam:.3e} outside the rigidity cases",
                                field="k")
    if k < 0.0:
        rep.notes.append("k < 0: the trivial bound pi does not apply")
    if rho is not None:
        rep.prop_bound = prop_bound(chi, k, rho)
        rep.bishop_at_R = bishop_bound(k, rho)
        if k >= 0.0:
            rep.corollary_radius_bound = corollary_radius_bound(chi, rho)

    present = rep.present()
    rep.best_name = min(BOUND_ORDER, key=lambda n: (present.get(n, math.inf), BOUND_ORDER.index(n)))
    rep.best = present[rep.best_name]
    return rep
