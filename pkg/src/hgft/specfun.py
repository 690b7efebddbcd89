"""Complex-parameter special functions on the closed unit disk.

Gamma and digamma are thin wrappers around :mod:`scipy.special`; the Gauss
hypergeometric function is evaluated here by region switching:

* ``|z| <= 0.7``: the defining power series,
* ``|z/(z-1)| <= 0.7``: the Pfaff transformation (preferred over the plain
  series wherever its variable is the smaller of the two),
* ``|1-z| <= 0.5``: the connection formula in powers of ``1-z`` (with a
  Richardson-extrapolated perturbation of ``c`` when ``c-a-b`` is an integer),
* anything else in the disk: Taylor re-expansion of the hypergeometric ODE
  about centres on ``|z| = 0.69``, or the connection formula when
  ``|1-z| <= 0.9`` and its error estimate is smaller.

Every branch is vectorised over ``z`` for a fixed parameter triple, which is
what the grid searches in :mod:`hgft.verifier` need.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import (
    InvalidC,
    OutsideDisk,
    PoleAtNonpositiveInteger,
    PrecisionLoss,
    TooCloseToOne,
    ZeroBalancedAtBoundary,
)

EPS = float(np.finfo(float).eps)

SERIES_RADIUS = 0.7
PFAFF_RADIUS = 0.7
NEAR_ONE_RADIUS = 0.5
# the connection formula is also tried against Taylor continuation up to here
CONNECTION_REACH = 0.9
# |c-a-b - integer| below this switches to the perturbed connection formula
DEGENERATE_TOL = 1e-4
PERTURB_STEP = 2e-4
MAX_TERMS = 100_000
DISK_TOL = 1e-12
INTEGER_TOL = 1e-13

N_CENTERS = 180
CENTER_RADIUS = 0.69  # strictly inside the series/Pfaff zone
# Taylor patches are built for |z - z0| <= TAYLOR_RATIO * |1 - z0|
TAYLOR_RATIO = 0.7
# and |z - z0| <= TAYLOR_REACH * |z0|, beyond which the recurrence is unstable
TAYLOR_REACH = 0.75


class Method(str, Enum):
    SERIES = "Series"
    PFAFF = "Pfaff"
    CONNECTION = "ConnectionNearOne"
    ZERO_BALANCED = "ZeroBalancedAsymptote"
    PERTURBED = "PerturbedConnection"
    TAYLOR = "TaylorContinuation"

    def __str__(self):
        return self.value


# method arrays are stored as integer codes into this tuple
METHODS = tuple(Method)
_CODE = {m: i for i, m in enumerate(METHODS)}


def _nonpositive_integer(x: complex, tol: float = INTEGER_TOL) -> bool:
    x = complex(x)
    if abs(x.imag) > tol or x.real > tol:
        return False
    return abs(x.real - round(x.real)) <= tol * max(1.0, abs(x.real))


def _integer_distance(x: complex) -> float:
    x = complex(x)
    return math.hypot(x.real - round(x.real), x.imag)


@dataclass(frozen=True)
class ParamTriple:
    """Parameters ``(a, b, c)`` of ``2F1(a, b; c; z)``."""

    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise ValueError(f"parameter {name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if _nonpositive_integer(self.c):
            raise InvalidC(f"c = {self.c} is a non-positive integer")

    @property
    def ab_zero(self) -> bool:
        return self.a * self.b == 0

    @property
    def excess(self) -> complex:
        """``c - a - b``; its real part governs the behaviour at ``z = 1``."""
        return self.c - self.a - self.b

    def shifted(self, k: int = 1) -> "ParamTriple":
        return ParamTriple(self.a + k, self.b + k, self.c + k)

    def conjugate(self) -> "ParamTriple":
        return ParamTriple(self.a.conjugate(), self.b.conjugate(), self.c.conjugate())

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class EvalResult:
    value: complex
    est_abs_error: float
    method: Method


# ---------------------------------------------------------------------------
# Gamma family


def log_gamma(z: complex) -> complex:
    """Principal branch of ``log Gamma(z)``."""
    z = complex(z)
    if _nonpositive_integer(z):
        raise PoleAtNonpositiveInteger(f"log_gamma has a pole at {z}")
    return complex(special.loggamma(z))


def digamma(z: complex) -> complex:
    z = complex(z)
    if _nonpositive_integer(z):
        raise PoleAtNonpositiveInteger(f"digamma has a pole at {z}")
    return complex(special.psi(z))


def pochhammer(a: complex, n: int) -> complex:
    """Rising factorial ``a (a+1) ... (a+n-1)``; ``(a)_0 = 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 1 + 0j
    a = complex(a)
    for k in range(n):
        out *= a + k
    return out


def gamma_ratio(num, den) -> complex:
    """``prod Gamma(num) / prod Gamma(den)`` through log-gamma sums.

    A pole in the denominator makes the ratio zero; a pole in the numerator
    raises.
    """
    return _gamma_ratio_err(num, den)[0]


def _gamma_ratio_err(num, den) -> tuple[complex, float]:
    """Gamma ratio and a relative error bound from the log-gamma magnitudes."""
    total = 0j
    size = 0.0
    for x in den:
        if _nonpositive_integer(x):
            return 0j, 0.0
        lg = special.loggamma(complex(x))
        total -= lg
        size += abs(lg)
    for x in num:
        if _nonpositive_integer(x):
            raise PoleAtNonpositiveInteger(f"Gamma has a pole at {x}")
        lg = special.loggamma(complex(x))
        total += lg
        size += abs(lg)
    return cmath.exp(total), 4 * EPS * (len(num) + len(den) + size)


# ---------------------------------------------------------------------------
# power-series plumbing


def _series_coefficients(a: complex, b: complex, c: complex, radius: float) -> np.ndarray:
    """Coefficients of ``2F1(a,b;c;w)`` sufficient for ``|w| <= radius``.

    Stops after three consecutive terms below ``1e-17`` of the running
    absolute sum, once past the hump where the term ratio can exceed one.
    """
    coeffs = [1 + 0j]
    term = 1 + 0j
    total = 1.0
    rn = 1.0
    small = 0
    n_min = int(max(abs(a), abs(b), abs(c))) + 3
    n = 0
    while True:
        if n >= MAX_TERMS:
            raise PrecisionLoss(
                f"series for 2F1({a}, {b}; {c}; w) did not converge in {MAX_TERMS} terms"
            )
        term = term * (a + n) * (b + n) / ((c + n) * (n + 1))
        n += 1
        coeffs.append(term)
        if term == 0:
            break
        rn *= radius
        mag = abs(term) * rn
        total += mag
        if mag <= 1e-17 * total:
            small += 1
            if small >= 3 and n >= n_min:
                break
        else:
            small = 0
    return np.asarray(coeffs, dtype=complex)


def _polyval(coeffs: np.ndarray, w: np.ndarray):
    """Evaluate ``sum coeffs[n] w**n`` and a rounding-error bound."""
    value = np.polyval(coeffs[::-1], w)
    absum = np.polyval(np.abs(coeffs)[::-1], np.abs(w))
    tail = np.abs(coeffs[-1]) * np.abs(w) ** (len(coeffs) - 1)
    return value, 8 * EPS * absum + tail


def _principal_power(w: np.ndarray, s: complex) -> np.ndarray:
    """``w**s`` via the principal logarithm, with ``0**s = 0`` for ``Re s > 0``."""
    w = np.asarray(w, dtype=complex)
    out = np.zeros_like(w)
    nz = w != 0
    out[nz] = np.exp(s * np.log(w[nz]))
    if np.any(~nz) and s.real <= 0:
        raise TooCloseToOne("(1-z)**(c-a-b) is unbounded at z = 1")
    return out


@lru_cache(maxsize=4096)
def _cached_coefficients(a: complex, b: complex, c: complex, radius: float) -> np.ndarray:
    coeffs = _series_coefficients(a, b, c, radius)
    coeffs.setflags(write=False)
    return coeffs


def _ode_taylor_coefficients(a, b, c, z0, t0, t1, radius):
    """Taylor coefficients about ``z0`` of the ODE solution with ``F(z0)=t0, F'(z0)=t1``."""
    # (n+a)(n+b) t_n - (n+1)((1-2 z0) n + c - (a+b+1) z0) t_{n+1}
    #   = z0 (1 - z0) (n+1)(n+2) t_{n+2}
    q = z0 * (1 - z0)
    t = [t0, t1]
    total = abs(t0) + abs(t1) * radius
    small = 0
    k = 0
    n_min = int(max(abs(a), abs(b), abs(c))) + 3
    while True:
        if k >= MAX_TERMS:
            raise PrecisionLoss("Taylor patch did not converge")
        nxt = ((k + a) * (k + b) * t[k]
               - (k + 1) * ((1 - 2 * z0) * k + c - (a + b + 1) * z0) * t[k + 1]) / (
            q * (k + 1) * (k + 2))
        t.append(nxt)
        k += 1
        mag = abs(nxt) * radius ** (k + 1)
        total += mag
        if mag <= 1e-17 * total:
            small += 1
            if small >= 3 and k >= n_min:
                break
        else:
            small = 0
    return np.asarray(t, dtype=complex)


@lru_cache(maxsize=4096)
def _taylor_patch(a: complex, b: complex, c: complex, j: int):
    """Expansion of ``2F1(a,b;c;.)`` about the ``j``-th centre.

    Returns the centre, the coefficients of F, and the coefficients of the
    two basis solutions scaled by the errors in ``F(z0)`` and ``F'(z0)``.
    """
    z0 = CENTER_RADIUS * cmath.exp(2j * math.pi * j / N_CENTERS)
    p = ParamTriple(a, b, c)
    f0 = gauss_2f1(p, z0)
    df0 = d2f1(p, z0)
    radius = min(TAYLOR_RATIO * abs(1 - z0), TAYLOR_REACH * CENTER_RADIUS)
    coeffs = _ode_taylor_coefficients(a, b, c, z0, f0.value, df0.value, radius)
    n = len(coeffs)
    u1 = _ode_taylor_coefficients(a, b, c, z0, 1, 0, radius)[:n]
    u2 = _ode_taylor_coefficients(a, b, c, z0, 0, 1, radius)[:n]
    u1 = np.pad(u1, (0, n - len(u1)))
    u2 = np.pad(u2, (0, n - len(u2)))
    for arr in (coeffs, u1, u2):
        arr.setflags(write=False)
    return z0, coeffs, (u1, f0.est_abs_error), (u2, df0.est_abs_error)


def _centers() -> np.ndarray:
    return CENTER_RADIUS * np.exp(2j * np.pi * np.arange(N_CENTERS) / N_CENTERS)


def _assign_centers(z: np.ndarray) -> np.ndarray:
    """Index of the best expansion centre for each ``z`` (smallest convergence ratio)."""
    z0 = _centers()
    out = np.empty(z.shape, dtype=int)
    chunk = 4096
    for start in range(0, z.size, chunk):
        zz = z[start:start + chunk, None]
        dist = np.abs(zz - z0[None, :])
        ratio = dist / np.abs(1 - z0)[None, :]
        ratio[dist > TAYLOR_REACH * CENTER_RADIUS] = np.inf
        out[start:start + chunk] = np.argmin(ratio, axis=1)
    return out


# ---------------------------------------------------------------------------
# branch evaluators (fixed triple, vector z)


def _radius(default: float, w: np.ndarray) -> float:
    # fixed truncation per branch keeps results independent of batch contents
    biggest = float(np.max(np.abs(w)))
    return default if biggest <= default else biggest


def _branch_series(a, b, c, z):
    coeffs = _cached_coefficients(a, b, c, _radius(SERIES_RADIUS, z))
    return _polyval(coeffs, z)


def _branch_pfaff(a, b, c, z):
    w = z / (z - 1)
    coeffs = _cached_coefficients(a, c - b, c, _radius(PFAFF_RADIUS, w))
    s, err = _polyval(coeffs, w)
    pref = np.exp(-a * np.log(1 - z))
    return pref * s, np.abs(pref) * err + 4 * EPS * np.abs(pref * s)


def _branch_connection(a, b, c, z):
    w = 1 - z
    s = c - a - b
    radius = _radius(NEAR_ONE_RADIUS, w)
    g1, r1 = _gamma_ratio_err((c, s), (c - a, c - b))
    g2, r2 = _gamma_ratio_err((c, -s), (a, b))
    s1, e1 = _polyval(_cached_coefficients(a, b, 1 - s, radius), w)
    s2, e2 = _polyval(_cached_coefficients(c - a, c - b, 1 + s, radius), w)
    ws = _principal_power(w, s)
    t1 = g1 * s1
    t2 = g2 * ws * s2
    # the power carries |s log w| worth of rounding in its exponent
    rw = 4 * EPS * (1 + abs(s) * np.abs(np.log(np.where(w == 0, 1, w))))
    err = (abs(g1) * e1 + abs(g2) * np.abs(ws) * e2
           + (r1 + 4 * EPS) * np.abs(t1) + (r2 + rw + 4 * EPS) * np.abs(t2))
    return t1 + t2, err


def _branch_perturbed(a, b, c, z):
    w = 1 - z
    logmax = float(np.max(np.abs(np.log(w[w != 0])))) if np.any(w != 0) else 0.0
    delta = PERTURB_STEP / max(1.0, logmax / 4)
    vals = {}
    errs = 0.0
    for k in (1, -1, 2, -2):
        v, e = _branch_connection(a, b, c + 1j * k * delta, z)
        vals[k] = v
        errs = errs + e
    second = (vals[1] + vals[-1]) / 2
    fourth = (4 * (vals[1] + vals[-1]) - (vals[2] + vals[-2])) / 6
    trunc = np.abs(fourth - second) ** 2 / np.maximum(np.abs(fourth), 1e-300)
    return fourth, 2 * errs + trunc


def _branch_taylor(a, b, c, z):
    idx = _assign_centers(z)
    value = np.empty(z.shape, dtype=complex)
    err = np.empty(z.shape, dtype=float)
    for j in np.unique(idx):
        sel = idx == j
        z0, coeffs, (u1, e1), (u2, e2) = _taylor_patch(a, b, c, int(j))
        h = z[sel] - z0
        v, e = _polyval(coeffs, h)
        value[sel] = v
        err[sel] = e + e1 * np.abs(np.polyval(u1[::-1], h)) + e2 * np.abs(np.polyval(u2[::-1], h))
    return value, err


_BRANCHES = {
    Method.SERIES: _branch_series,
    Method.PFAFF: _branch_pfaff,
    Method.CONNECTION: _branch_connection,
    Method.PERTURBED: _branch_perturbed,
    Method.TAYLOR: _branch_taylor,
}


def _canonical(p: ParamTriple) -> tuple[complex, complex, complex]:
    a, b = sorted((p.a, p.b), key=lambda x: (x.real, x.imag))
    return a, b, p.c


def _polynomial_degree(a: complex, b: complex):
    degrees = [-round(x.real) for x in (a, b) if _nonpositive_integer(x)]
    return min(degrees) if degrees else None


def _euler_value(p: ParamTriple) -> EvalResult:
    a, b, c = _canonical(p)
    s = c - a - b
    if s.real > 0:
        value, rel = _gamma_ratio_err((c, s), (c - a, c - b))
        return EvalResult(value, rel * abs(value), Method.CONNECTION)
    if abs(s) <= INTEGER_TOL:
        raise ZeroBalancedAtBoundary("c = a + b: 2F1 diverges logarithmically at z = 1")
    raise TooCloseToOne(f"Re(c-a-b) = {s.real:g} <= 0: no finite value at z = 1")


def classify_region(p: ParamTriple, z) -> np.ndarray:
    """Method code (index into :data:`METHODS`) that :func:`hyp2f1_array` uses at each point."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    a, b, c = _canonical(p)
    if _polynomial_degree(a, b) is not None:
        return np.full(z.shape, _CODE[Method.SERIES])
    out = np.full(z.shape, _CODE[Method.TAYLOR])
    absz = np.abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        absw = np.where(z == 1, np.inf, np.abs(z / (z - 1)))
    near = np.abs(1 - z) <= NEAR_ONE_RADIUS
    degenerate = _integer_distance(c - a - b) < DEGENERATE_TOL
    out[near] = _CODE[Method.PERTURBED if degenerate else Method.CONNECTION]
    series = absz <= SERIES_RADIUS
    pfaff = absw <= PFAFF_RADIUS
    # where both converge, the smaller expansion variable wins
    out[pfaff & ~(series & (absz <= absw))] = _CODE[Method.PFAFF]
    out[series & ~(pfaff & (absw < absz))] = _CODE[Method.SERIES]
    return out


def hyp2f1_array(p: ParamTriple, z, method: Method | None = None):
    """Vectorised ``2F1(a,b;c;z)`` over an array of points in the closed disk.

    Returns ``(values, est_abs_errors, method_codes)`` with the shape of
    ``z``; codes index :data:`METHODS`.
    ``method`` forces one branch for every point (used to cross-check the
    overlap zones); the caller is responsible for staying inside its domain.
    """
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    if np.any(np.abs(z) > 1 + DISK_TOL):
        raise OutsideDisk("2F1 is only evaluated on the closed unit disk")
    a, b, c = _canonical(p)
    values = np.empty(z.shape, dtype=complex)
    errors = np.empty(z.shape, dtype=float)

    degree = _polynomial_degree(a, b)
    if degree is not None:
        # terminating series: exact finite sum anywhere
        coeffs = np.array([pochhammer(a, n) * pochhammer(b, n) / (pochhammer(c, n) * math.factorial(n))
                           for n in range(degree + 1)], dtype=complex)
        v, e = _polyval(np.append(coeffs, 0), z)
        methods = np.full(z.shape, _CODE[Method.SERIES])
        return v.reshape(shape), e.reshape(shape), methods.reshape(shape)

    at_one = z == 1
    if np.any(at_one):
        res = _euler_value(p)
        values[at_one] = res.value
        errors[at_one] = res.est_abs_error

    if method is None:
        methods = classify_region(p, z)
    else:
        methods = np.full(z.shape, _CODE[Method(method)])
    methods[at_one] = _CODE[Method.CONNECTION]
    for m, fn in _BRANCHES.items():
        sel = (methods == _CODE[m]) & ~at_one
        if np.any(sel):
            v, e = fn(a, b, c, z[sel])
            values[sel] = v
            errors[sel] = e

    if method is None:
        # second opinion for the continuation zone: keep the smaller error estimate
        alt = (methods == _CODE[Method.TAYLOR]) & (np.abs(1 - z) <= CONNECTION_REACH)
        if np.any(alt):
            degenerate = _integer_distance(c - a - b) < DEGENERATE_TOL
            m = Method.PERTURBED if degenerate else Method.CONNECTION
            idx = np.flatnonzero(alt)
            v, e = _BRANCHES[m](a, b, c, z[idx])
            better = e < errors[idx]
            values[idx[better]] = v[better]
            errors[idx[better]] = e[better]
            methods[idx[better]] = _CODE[m]
    return values.reshape(shape), errors.reshape(shape), methods.reshape(shape)


# ---------------------------------------------------------------------------
# public scalar API


def gauss_2f1(p: ParamTriple, z: complex, method: Method | None = None) -> EvalResult:
    """``2F1(a, b; c; z)`` for ``|z| <= 1``.

    ``z = 1`` is accepted when ``Re(c-a-b) > 0`` (Gauss's value there).
    """
    z = complex(z)
    if abs(z) > 1 + DISK_TOL:
        raise OutsideDisk(f"|z| = {abs(z)} > 1")
    if z == 1 and _polynomial_degree(p.a, p.b) is None:
        return _euler_value(p)
    v, e, m = hyp2f1_array(p, np.array([z]), method=method)
    value = complex(v[0])
    if not cmath.isfinite(value):
        raise PrecisionLoss(f"non-finite 2F1 value at z = {z}")
    return EvalResult(value, float(e[0]), METHODS[int(m[0])])


def d2f1(p: ParamTriple, z: complex) -> EvalResult:
    """Derivative of ``2F1`` in ``z``: ``(ab/c) 2F1(a+1, b+1; c+1; z)``."""
    if p.ab_zero:
        return EvalResult(0j, 0.0, Method.SERIES)
    factor = p.a * p.b / p.c
    res = gauss_2f1(p.shifted(), z)
    return EvalResult(factor * res.value, abs(factor) * res.est_abs_error, res.method)


def d2f1_array(p: ParamTriple, z):
    z = np.asarray(z, dtype=complex)
    if p.ab_zero:
        zeros = np.zeros(z.shape, dtype=complex)
        return zeros, np.zeros(z.shape), np.full(z.shape, _CODE[Method.SERIES])
    factor = p.a * p.b / p.c
    v, e, m = hyp2f1_array(p.shifted(), z)
    return factor * v, abs(factor) * e, m


def ode_residual(p: ParamTriple, z: complex, relative: bool = False) -> float:
    """``|(1-z) z F'' + (c - (a+b+1) z) F' - ab F|`` from kernel values.

    With ``relative=True`` the residual is divided by
    ``|ab| |F| + |F'| + |F''|``.
    """
    a, b, c = p.a, p.b, p.c
    z = complex(z)
    f = gauss_2f1(p, z).value
    df = d2f1(p, z).value
    if p.ab_zero:
        d2f = 0j
    else:
        d2f = (a * b / c) * d2f1(p.shifted(), z).value
    resid = abs((1 - z) * z * d2f + (c - (a + b + 1) * z) * df - a * b * f)
    if relative:
        scale = abs(a * b) * abs(f) + abs(df) + abs(d2f)
        return resid / scale if scale > 0 else resid
    return resid


def zero_balanced_asymptote(a: complex, b: complex, z: complex) -> complex:
    """Leading behaviour of ``2F1(a, b; a+b; z)`` as ``z -> 1``.

    ``Gamma(a+b)/(Gamma(a)Gamma(b)) * (2 psi(1) - psi(a) - psi(b) - Log(1-z))``
    """
    a, b, z = complex(a), complex(b), complex(z)
    r = 2 * digamma(1) - digamma(a) - digamma(b)
    return gamma_ratio((a + b,), (a, b)) * (r - cmath.log(1 - z))
