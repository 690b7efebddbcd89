"""Brute-force numerical checks on h(z) = z f'(z) / f(z) for f(z) = z 2F1(a,b;c;z).

Everything here is an estimate from sampling: infima and suprema are
searched on polar grids, refined locally, and reported together with the
last observed refinement delta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import criteria
from .criteria import AnnulusBounds, SpiralAngle, Status, Verdict
from .errors import ArgUndefined, NotZeroImbalanced, QuotientPole
from .specfun import ParamTriple, gauss_2f1, hyp2f1_array

POLE_TOL = 1e-12
ARG_TOL = 1e-12
NOTCH = 1e-3
GOLDEN = (math.sqrt(5) - 1) / 2
GOLDEN_ITERS = 24
CONTRADICTION_TOL = 1e-6
INTERIOR_RADIUS = 0.9999

DEFAULT_RADII = tuple(1 - 2.0 ** -k for k in range(1, 14)) + (INTERIOR_RADIUS,)


@dataclass(frozen=True)
class SampleGrid:
    """Polar sampling grid; ``boundary`` adds the unit circle when admissible."""

    radii: tuple = DEFAULT_RADII
    angular_count: int = 4096
    refine_steps: int = 3
    boundary: bool = True

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not radii or any(not 0 < r < 1 for r in radii):
            raise ValueError("grid radii must lie in (0, 1)")
        if any(r1 >= r2 for r1, r2 in zip(radii, radii[1:])):
            raise ValueError("grid radii must be strictly increasing")
        if self.angular_count < 64:
            raise ValueError("angular_count must be at least 64")
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be nonnegative")

    @classmethod
    def default(cls, angular_count: int = 4096, refine_steps: int = 3, radius_max: float | None = None,
                boundary: bool = True) -> "SampleGrid":
        radii = DEFAULT_RADII
        if radius_max is not None:
            radii = tuple(r for r in radii if r <= radius_max)
            boundary = boundary and radius_max >= 1
        return cls(radii, angular_count, refine_steps, boundary)

    def with_radius_max(self, radius_max: float) -> "SampleGrid":
        radii = tuple(r for r in self.radii if r <= radius_max)
        return SampleGrid(radii, self.angular_count, self.refine_steps, self.boundary and radius_max >= 1)


@dataclass(frozen=True)
class SampleReport:
    extremal_value: float
    extremal_z: complex
    samples_evaluated: int
    pole_suspected: bool
    est_error: float
    grid_value: float = math.nan
    interior_value: float = math.nan

    def to_dict(self) -> dict:
        def num(x):
            return None if math.isnan(x) else x

        return {
            "extremal_value": num(self.extremal_value),
            "extremal_z": [self.extremal_z.real, self.extremal_z.imag],
            "samples_evaluated": self.samples_evaluated,
            "pole_suspected": self.pole_suspected,
            "est_error": num(self.est_error),
            "grid_value": num(self.grid_value),
            "interior_value": num(self.interior_value),
        }


# ---------------------------------------------------------------------------
# the quotient


def _quotient(p: ParamTriple, z: np.ndarray):
    """``h(z)`` and ``F(z)`` on an array; ``h`` is nan where ``F`` is tiny."""
    z = np.asarray(z, dtype=complex)
    F, _, _ = hyp2f1_array(p, z)
    if p.ab_zero:
        return np.ones(z.shape, dtype=complex), F
    G, _, _ = hyp2f1_array(p.shifted(), z)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = 1 + (p.a * p.b / p.c) * z * G / F
    h = np.where(np.abs(F) < POLE_TOL, np.nan, h)
    h = np.where(z == 0, 1.0 + 0j, h)
    return h, F


def radial_quotient(p: ParamTriple, z: complex) -> complex:
    """``h(z) = 1 + (ab z / c) 2F1(a+1,b+1;c+1;z) / 2F1(a,b;c;z)``."""
    z = complex(z)
    if z == 0:
        return 1 + 0j
    F = gauss_2f1(p, z).value
    if abs(F) < POLE_TOL:
        raise QuotientPole(f"|2F1| = {abs(F):.3g} at z = {z}")
    if p.ab_zero:
        return 1 + 0j
    G = gauss_2f1(p.shifted(), z).value
    return 1 + p.a * p.b / p.c * z * G / F


# ---------------------------------------------------------------------------
# grid search


def _grid_points(p: ParamTriple, grid: SampleGrid):
    radii = np.array(grid.radii)
    if grid.boundary and p.excess.real > 0:
        radii = np.append(radii, 1.0)
    theta = 2 * np.pi * np.arange(grid.angular_count) / grid.angular_count
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    valid = np.abs(1 - z) >= NOTCH
    valid[radii < 1] = True
    return radii, theta, z, valid


def _argbest(values: np.ndarray, sign: float):
    """Index of the extremal sample; ties go to the smallest angle, then radius."""
    by_angle = (sign * values).T
    flat = np.where(np.isnan(by_angle), np.inf, by_angle).ravel()
    k = int(np.argmin(flat))
    j, i = divmod(k, values.shape[0])
    return i, j


def _golden(phi, lo: float, hi: float, iters: int):
    """Golden-section minimisation of ``phi`` on ``[lo, hi]``; returns (x, phi(x), evals)."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = phi(x1), phi(x2)
    evals = 2
    for _ in range(iters):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = phi(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = phi(x2)
        evals += 1
    return (x1, f1, evals) if f1 <= f2 else (x2, f2, evals)


def _search(p: ParamTriple, objective, grid: SampleGrid, sign: float) -> SampleReport:
    """Minimise ``sign * objective(h, z)`` over the grid and refine the winner."""
    radii, theta, z, valid = _grid_points(p, grid)
    h, F = _quotient(p, np.where(valid, z, 0))
    values = np.where(valid, objective(h, z), np.nan)
    count = int(valid.sum())
    pole = bool(np.any(valid & (z != 0) & (np.abs(F) < POLE_TOL)))

    interior = radii <= INTERIOR_RADIUS
    interior_value = math.nan
    if np.any(interior):
        ii, jj = _argbest(values[interior], sign)
        interior_value = float(values[interior][ii, jj])

    i, j = _argbest(values, sign)
    best = float(values[i, j])
    if math.isnan(best):
        return SampleReport(math.nan, 0j, count, True, math.nan, math.nan, interior_value)
    grid_value = best
    r, t = float(radii[i]), float(theta[j])

    def phi_at(radius):
        def phi(angle):
            w = np.array([radius * cmath.exp(1j * angle)])
            if radius >= 1 and abs(1 - w[0]) < NOTCH:
                return math.inf
            hv, _ = _quotient(p, w)
            val = float(objective(hv, w)[0])
            return math.inf if math.isnan(val) else sign * val
        return phi

    est = math.nan
    width = 2 * np.pi / grid.angular_count
    for _ in range(grid.refine_steps):
        ang, val, n = _golden(phi_at(r), t - width, t + width, GOLDEN_ITERS)
        count += n
        val = sign * val
        if sign * val < sign * best:
            est = abs(best - val)
            best, t = val, ang
        else:
            est = 0.0
        width /= 8

    if grid.refine_steps and r < 1:
        r_new = (r + 1) / 2
        val = sign * phi_at(r_new)(t)
        count += 1
        if sign * val < sign * best:
            est = max(0.0 if math.isnan(est) else est, abs(best - val))
            best, r = val, r_new

    return SampleReport(best, complex(r * cmath.exp(1j * t)), count, pole, est, grid_value, interior_value)


def min_weighted_real(p: ParamTriple, lam: float = 0.0, grid: SampleGrid | None = None) -> SampleReport:
    """Estimated infimum of ``Re(e^{-i lam} h(z))`` over the disk."""
    grid = grid or SampleGrid()
    rot = cmath.exp(-1j * float(lam if lam == 0 else SpiralAngle(lam)))
    return _search(p, lambda h, z: (rot * h).real, grid, 1.0)


def sigma_estimate(p: ParamTriple, grid: SampleGrid | None = None) -> SampleReport:
    """Estimated order of starlikeness ``inf Re h``."""
    return min_weighted_real(p, 0.0, grid)


def strong_order_estimate(p: ParamTriple, grid: SampleGrid | None = None) -> SampleReport:
    """Estimated ``sup (2/pi)|arg h(z)|``, the smallest admissible strong-starlikeness order."""
    grid = grid or SampleGrid()

    def objective(h, z):
        if np.any(np.abs(h) < ARG_TOL):
            raise ArgUndefined("h(z) vanishes on the grid")
        return 2 / np.pi * np.abs(np.angle(h))

    return _search(p, objective, grid, -1.0)


# ---------------------------------------------------------------------------
# behaviour near z = 1


@dataclass(frozen=True)
class ClusterProbe:
    z: np.ndarray
    values: np.ndarray
    annulus: AnnulusBounds | None = None
    inside: np.ndarray | None = None

    @property
    def inside_fraction(self) -> float:
        return math.nan if self.inside is None else float(np.mean(self.inside))


def cluster_probe(p: ParamTriple, thetas, ts, rel_slack: float = 0.05) -> ClusterProbe:
    """Sample ``F`` along the curves ``z = 1 - t e^{i theta}``.

    When ``c - a - b`` is a nonzero imaginary number each sample is tested
    against the cluster-set annulus around ``w0``.
    """
    thetas = np.asarray(thetas, dtype=float)
    ts = np.asarray(ts, dtype=float)
    if np.any(np.abs(thetas) >= np.pi / 2) or np.any(ts <= 0):
        raise ValueError("need |theta| < pi/2 and t > 0")
    z = (1 - ts[None, :] * np.exp(1j * thetas)[:, None]).ravel()
    if np.any(np.abs(z) >= 1):
        raise ValueError("probe point outside the open disk")
    values, _, _ = hyp2f1_array(p, z)
    try:
        ann = criteria.cluster_annulus(p)
    except NotZeroImbalanced:
        return ClusterProbe(z, values)
    dist = np.abs(values - ann.w0)
    inside = (dist >= ann.inner * (1 - rel_slack)) & (dist <= ann.outer * (1 + rel_slack))
    return ClusterProbe(z, values, ann, inside)


def near_one_minimum(p: ParamTriple, lam: float = 0.0, thetas=None, ts=None) -> float:
    """Smallest ``Re(e^{-i lam} h)`` on the curves ``z = 1 - t e^{i theta}``.

    Complements the polar grid: when ``0 < Re(c-a-b) < 1`` the quotient can
    oscillate in ``log(1-z)`` and leave the half-plane only very close to 1.
    """
    lam = SpiralAngle(lam)
    if thetas is None:
        # unbounded quotients leave the half-plane along near-tangential approaches
        edge = np.pi / 2 - np.logspace(-6, -1, 11)
        thetas = np.concatenate([-edge, np.linspace(-1.5, 1.5, 31), edge[::-1]])
    thetas = np.asarray(thetas, dtype=float)
    ts = np.logspace(-14, -4, 41) if ts is None else np.asarray(ts, dtype=float)
    if np.any(np.abs(thetas) >= np.pi / 2) or np.any(ts <= 0):
        raise ValueError("need |theta| < pi/2 and t > 0")
    tt, th = np.meshgrid(ts, thetas)
    keep = tt < np.cos(th)
    z = 1 - tt[keep] * np.exp(1j * th[keep])
    h, _ = _quotient(p, z)
    vals = (cmath.exp(-1j * lam) * h).real
    if np.all(np.isnan(vals)):
        return math.nan
    return float(np.nanmin(vals))


# ---------------------------------------------------------------------------
# image curves


@dataclass(frozen=True)
class ImageCurve:
    theta: np.ndarray
    values: np.ndarray
    r: float

    def closed(self) -> np.ndarray:
        """Polyline with the first point repeated at the end."""
        return np.append(self.values, self.values[:1])


def boundary_image(p: ParamTriple, r: float, n: int) -> ImageCurve:
    """``f(r e^{i theta})`` at ``n`` equally spaced angles in ``[0, 2 pi)``."""
    if not 0 < r <= 1:
        raise ValueError("r must lie in (0, 1]")
    if n < 1:
        raise ValueError("n must be positive")
    theta = 2 * np.pi * np.arange(n) / n
    z = r * np.exp(1j * theta)
    F, _, _ = hyp2f1_array(p, z)
    return ImageCurve(theta, z * F, float(r))


def winding_number(points, w: complex) -> float:
    """Discrete argument-sum winding number of the closed polyline about ``w``."""
    pts = np.asarray(points, dtype=complex) - w
    if pts[0] != pts[-1]:
        pts = np.append(pts, pts[:1])
    steps = np.angle(pts[1:] / pts[:-1])
    return float(steps.sum() / (2 * np.pi))


def image_point(p: ParamTriple, z: complex) -> complex:
    return complex(z) * gauss_2f1(p, z).value


# ---------------------------------------------------------------------------
# cross-checks


@dataclass
class ConsistencyReport:
    params: ParamTriple
    lam: float
    necessary_case: str | None
    necessary: Verdict
    sufficient: Verdict | None
    lmn: criteria.QuadraticFormLMN | None
    classical: Verdict
    coefficient: Verdict
    numeric: SampleReport
    contradictions: list = field(default_factory=list)
    near_one_value: float = math.nan

    @property
    def contradiction(self) -> bool:
        return bool(self.contradictions)


def _sufficient_for(p: ParamTriple, lam: float):
    if lam == 0:
        return criteria.sufficient_starlike(p)
    if abs(p.c - (p.a + p.b + 1)) <= criteria.REAL_TOL * max(1.0, abs(p.c)):
        return criteria.sufficient_spirallike(p.a, p.b, lam)
    return None, None


def consistency_report(p: ParamTriple, lam: float = 0.0, grid: SampleGrid | None = None) -> ConsistencyReport:
    """Run the predicates and the numerical search side by side and flag disagreements."""
    case, necessary = criteria.necessary_spirallike(p, lam)
    sufficient, lmn = _sufficient_for(p, lam)
    numeric = min_weighted_real(p, lam, grid)
    report = ConsistencyReport(
        p, lam, None if case is None else case.value, necessary, sufficient, lmn,
        criteria.corB_starlike(p), criteria.coefficient_bound_check(p), numeric,
    )
    if (sufficient is not None and sufficient.status is Status.HOLDS
            and sufficient.margin > CONTRADICTION_TOL and numeric.extremal_value < -CONTRADICTION_TOL):
        report.contradictions.append(
            f"{sufficient.label} holds (margin {sufficient.margin:.3g}) but numeric minimum is "
            f"{numeric.extremal_value:.3g}")
    if (numeric.interior_value > 1e-3 and necessary.status is Status.FAILS
            and necessary.margin < -CONTRADICTION_TOL):
        # the grid stops at r = 0.9999; look closer to z = 1 before calling it a contradiction
        report.near_one_value = near_one_minimum(p, lam)
        if not report.near_one_value < 0:
            report.contradictions.append(
                f"numeric minimum {numeric.interior_value:.3g} at r <= {INTERIOR_RADIUS} but "
                f"{necessary.label} fails (margin {necessary.margin:.3g})")
    return report
