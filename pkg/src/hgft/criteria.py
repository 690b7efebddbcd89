"""Necessary and sufficient conditions for spirallikeness of z*2F1(a,b;c;z).

Each predicate returns a :class:`Verdict`.  Strict inequalities whose slack
lies within ``BOUNDARY_TOL`` of zero are reported as ``Boundary`` rather
than guessed; non-strict ones accept slack down to ``-BOUNDARY_TOL``.
Equality cases are never promoted to ``Holds`` by a limiting argument.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import LambdaZero, NotZeroImbalanced
from .specfun import ParamTriple, d2f1, gamma_ratio, gauss_2f1

BOUNDARY_TOL = 1e-9
REAL_TOL = 1e-12
ANGLE_TOL = 1e-9
CASE_SNAP = 1e-12

HALF_PI = math.pi / 2


class Status(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    BOUNDARY = "Boundary"
    NOT_APPLICABLE = "NotApplicable"

    def __str__(self):
        return self.value


class NecessaryCase(str, Enum):
    I = "i"
    II = "ii"
    III = "iii"
    IV = "iv"
    V = "v"

    def __str__(self):
        return self.value


class SpiralAngle(float):
    """An angle in radians strictly inside ``(-pi/2, pi/2)``."""

    def __new__(cls, value):
        value = float(value)
        if not -HALF_PI < value < HALF_PI:
            raise ValueError(f"spiral angle {value} outside (-pi/2, pi/2)")
        return super().__new__(cls, value)


@dataclass(frozen=True)
class Verdict:
    status: Status
    margin: float
    diagnostics: str = ""
    label: str = ""

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "status": self.status.value,
            "margin": None if math.isnan(self.margin) else self.margin,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class QuadraticFormLMN:
    """Coefficients of the quadratic ``L s^2 - 2 M s + N`` in a real ``s``."""

    L: float
    M: float
    N: float

    @property
    def det(self) -> float:
        return self.L * self.N - self.M * self.M

    def __call__(self, s):
        return self.L * s * s - 2 * self.M * s + self.N

    def psd(self, tol: float = 0.0) -> bool:
        return self.L >= -tol and self.N >= -tol and self.det >= -tol

    def slack(self) -> float:
        return min(self.L, self.N, self.det)

    def to_dict(self) -> dict:
        return {"L": self.L, "M": self.M, "N": self.N}


@dataclass(frozen=True)
class CaseIIData:
    s: float
    w1: complex
    R1: float
    R1_alt: float = field(default=math.nan, compare=False)


@dataclass(frozen=True)
class AnnulusBounds:
    w0: complex
    R: float
    inner: float
    outer: float

    def contains(self, w: complex, rel_slack: float = 0.0) -> bool:
        d = abs(w - self.w0)
        return self.inner * (1 - rel_slack) <= d <= self.outer * (1 + rel_slack)


# ---------------------------------------------------------------------------
# verdict plumbing


@dataclass
class _Check:
    name: str
    slack: float
    strict: bool

    @property
    def status(self) -> Status:
        if self.strict:
            if abs(self.slack) <= BOUNDARY_TOL:
                return Status.BOUNDARY
            return Status.HOLDS if self.slack > 0 else Status.FAILS
        return Status.HOLDS if self.slack >= -BOUNDARY_TOL else Status.FAILS


def _combine(label: str, checks: list[_Check], note: str = "") -> Verdict:
    statuses = [c.status for c in checks]
    if Status.FAILS in statuses:
        status = Status.FAILS
    elif Status.BOUNDARY in statuses:
        status = Status.BOUNDARY
    else:
        status = Status.HOLDS
    parts = [f"{c.name}: slack={c.slack:.6g} ({c.status.value})" for c in checks]
    if note:
        parts.append(note)
    return Verdict(status, min(c.slack for c in checks), "; ".join(parts), label)


def _not_applicable(label: str, why: str) -> Verdict:
    return Verdict(Status.NOT_APPLICABLE, math.nan, why, label)


def _is_real(x: complex, tol: float = REAL_TOL) -> bool:
    x = complex(x)
    return abs(x.imag) <= tol * max(1.0, abs(x))


def _wrap(angle: float) -> float:
    """Reduce an angle to ``(-pi, pi]``."""
    out = math.remainder(angle, 2 * math.pi)
    return math.pi if out == -math.pi else out


def _arg(z: complex) -> float:
    return cmath.phase(complex(z))


# ---------------------------------------------------------------------------
# necessary conditions at z = 1


def case_ii_data(p: ParamTriple) -> CaseIIData:
    """Centre and radius of the half-plane test when ``c-a-b = 1 + is``."""
    a, b, c = p.a, p.b, p.c
    s = (p.excess - 1).imag
    w1 = 1 - 1j * a * b / s
    grow = math.exp(math.pi * abs(s) / 2)
    r1 = abs(gamma_ratio((c - a, c - b), (a, b)) / s) * grow
    r1_alt = abs((a + 1j * s) * (b + 1j * s) / s * gamma_ratio((a + 1j * s, b + 1j * s), (a, b))) * grow
    return CaseIIData(s, w1, r1, r1_alt)


def necessary_case(p: ParamTriple) -> NecessaryCase:
    d = p.excess
    if abs(d.real - 1) < CASE_SNAP:
        return NecessaryCase.III if abs(d.imag) <= CASE_SNAP else NecessaryCase.II
    if d.real > 1:
        return NecessaryCase.I
    # Re(c-a-b) within CASE_SNAP of 0 counts as 0, so c = a + b computed in
    # floating point stays in case (iv)
    if d.real >= -CASE_SNAP:
        return NecessaryCase.IV
    return NecessaryCase.V


def necessary_spirallike(p: ParamTriple, lam: float = 0.0):
    """Necessary condition for ``lam``-spirallikeness from the behaviour at ``z = 1``.

    Returns ``(case, verdict)``; ``case`` is ``None`` when ``ab = 0``.
    """
    lam = SpiralAngle(lam)
    label = "necessary-spirallike"
    if p.ab_zero:
        return None, _not_applicable(label, "ab = 0: f(z) = z is trivially spirallike")
    a, b, c = p.a, p.b, p.c
    d = p.excess
    case = necessary_case(p)
    label = f"{label} case ({case.value})"

    if case is NecessaryCase.I:
        h1 = 1 + a * b / (d - 1)
        if h1 == 0:
            return case, _combine(label, [_Check("h(1) = 0", 0.0, False)])
        diff = abs(_wrap(lam - _arg(h1)))
        return case, _combine(label, [_Check("|lambda - arg h(1)| <= pi/2", HALF_PI - diff, False)],
                              f"h(1) = {h1:.6g}")

    if case is NecessaryCase.II:
        data = case_ii_data(p)
        note = f"w1 = {data.w1:.6g}, R1 = {data.R1:.6g} (alternate form {data.R1_alt:.6g})"
        univalent = _Check("R1 <= |w1| (local-univalence obstruction)", abs(data.w1) - data.R1, False)
        if univalent.status is Status.FAILS:
            return case, _combine(label, [univalent], note)
        ratio = min(1.0, data.R1 / abs(data.w1))
        diff = abs(_wrap(lam - _arg(data.w1)))
        return case, _combine(label, [univalent, _Check("|lambda - arg w1| <= arccos(R1/|w1|)",
                                                        math.acos(ratio) - diff, False)], note)

    if case is NecessaryCase.III:
        diff = abs(_wrap(lam - _arg(a * b)))
        return case, _combine(label, [_Check("|lambda - arg(ab)| <= pi/2", HALF_PI - diff, False)])

    if case is NecessaryCase.IV:
        if abs(d.imag) > REAL_TOL * max(1.0, abs(d)):
            return case, Verdict(Status.FAILS, -abs(d.imag),
                                 f"Im(c - a - b) = {d.imag:.6g} != 0 with 0 <= Re(c-a-b) < 1", label)
        ratio = gamma_ratio((c - a, c - b), (a, b))
        diff = abs(_wrap(lam - _arg(ratio)))
        bound = max(d.real, 0.0) * HALF_PI
        return case, _combine(label, [_Check("|lambda - arg A| <= (c-a-b) pi/2", bound - diff, False)],
                              f"A = {ratio:.6g}")

    diff = abs(_wrap(lam - _arg(-d)))
    check = _Check("lambda = arg(a + b - c)", -diff, False)
    status = Status.HOLDS if diff <= ANGLE_TOL else Status.FAILS
    return case, Verdict(status, -diff, f"{check.name}: |difference| = {diff:.6g}", label)


# ---------------------------------------------------------------------------
# sufficient conditions


def _starlike_lmn(a: complex, b: complex, c: complex, p: float) -> QuadraticFormLMN:
    ab = a * b
    L = abs(c - 1) ** 2 - abs(a + b) ** 2 + p + 3 * ab.real
    M = (ab * (a.conjugate() + b.conjugate() - 2)).imag
    N = abs(c - 2) ** 2 - abs(a - 1) ** 2 * abs(b - 1) ** 2 - p + ab.real
    return QuadraticFormLMN(L, M, N)


def sufficient_starlike(p: ParamTriple):
    """Sufficient condition for starlikeness of ``z 2F1(a,b;c;z)``.

    (i) ``a + b + 1 - c`` real, (ii) ``Re[ab]`` strictly above it, (iii) the
    quadratic form is positive semidefinite.  The returned form always uses
    the real part of ``a + b + 1 - c``.
    """
    label = "starlike-sufficient"
    a, b, c = p.a, p.b, p.c
    pc = a + b + 1 - c
    lmn = _starlike_lmn(a, b, c, pc.real)
    if p.ab_zero:
        return _not_applicable(label, "ab = 0"), lmn
    if not _is_real(pc):
        return _not_applicable(label, f"a + b + 1 - c = {pc:.6g} is not real"), lmn
    checks = [
        _Check("Re[ab] > p", (a * b).real - pc.real, True),
        _Check("L >= 0", lmn.L, False),
        _Check("N >= 0", lmn.N, False),
        _Check("LN - M^2 >= 0", lmn.det, False),
    ]
    return _combine(label, checks, f"p = {pc.real:.6g}"), lmn


def sufficient_convex(p: ParamTriple):
    """Sufficient condition for convexity of ``2F1(a,b;c;z)`` itself.

    ``2F1(a,b;c;.)`` is convex exactly when ``z 2F1(a+1,b+1;c+1;z)`` is
    starlike, so this is the starlikeness test written out for the shifted
    parameters: ``p = a + b + 2 - c`` and

        L = |c|^2 - |a+b+2|^2 + p + 3 Re[(a+1)(b+1)]
        M = Im[(a+1)(b+1)(conj(a) + conj(b))]
        N = |c-1|^2 - |a|^2 |b|^2 - p + Re[(a+1)(b+1)]
    """
    label = "convex-sufficient"
    a, b, c = p.a, p.b, p.c
    pc = a + b + 2 - c
    q = (a + 1) * (b + 1)
    L = abs(c) ** 2 - abs(a + b + 2) ** 2 + pc.real + 3 * q.real
    M = (q * (a.conjugate() + b.conjugate())).imag
    N = abs(c - 1) ** 2 - abs(a) ** 2 * abs(b) ** 2 - pc.real + q.real
    lmn = QuadraticFormLMN(L, M, N)
    if p.ab_zero or q == 0:
        return _not_applicable(label, "ab = 0 or (a+1)(b+1) = 0"), lmn
    if not _is_real(pc):
        return _not_applicable(label, f"a + b + 2 - c = {pc:.6g} is not real"), lmn
    checks = [
        _Check("Re[(a+1)(b+1)] > p", q.real - pc.real, True),
        _Check("L >= 0", L, False),
        _Check("N >= 0", N, False),
        _Check("LN - M^2 >= 0", lmn.det, False),
    ]
    return _combine(label, checks, f"p = {pc.real:.6g}"), lmn


def spirallike_lmn(a: complex, b: complex, lam: float) -> QuadraticFormLMN:
    e = cmath.exp(-1j * lam)
    q = e * a * b
    ac, bc = a.conjugate(), b.conjugate()
    cos = math.cos(lam)
    L = (q * (2 + e * e)).real
    M = (q * (ac + bc - 2 * e * cos)).imag
    N = (q * (2 * ac + 2 * bc - e * e - ac * bc / (e * cos))).real
    return QuadraticFormLMN(L, M, N)


def sufficient_spirallike(a: complex, b: complex, lam: float):
    """Sufficient condition for ``lam``-spirallikeness of ``z 2F1(a,b;a+b+1;z)``."""
    label = "spirallike-sufficient"
    a, b = complex(a), complex(b)
    lam = SpiralAngle(lam)
    if lam == 0:
        raise LambdaZero("use sufficient_starlike for lambda = 0")
    lmn = spirallike_lmn(a, b, lam)
    if a * b == 0:
        return _not_applicable(label, "ab = 0"), lmn
    checks = [
        _Check("Re[e^{-i lambda} ab] >= 0", (cmath.exp(-1j * lam) * a * b).real, False),
        _Check("L >= 0", lmn.L, False),
        _Check("N >= 0", lmn.N, False),
        _Check("LN - M^2 >= 0", lmn.det, False),
    ]
    return _combine(label, checks), lmn


def cor1_check(a: complex, b: complex, lam: float) -> Verdict:
    """Spirallikeness test for ``c = a+b+1`` when ``e^{-i lam} ab`` is positive."""
    label = "spirallike-rotated-product"
    a, b = complex(a), complex(b)
    lam = SpiralAngle(lam)
    if lam == 0:
        return _not_applicable(label, "requires 0 < |lambda|")
    q = cmath.exp(-1j * lam) * a * b
    if not _is_real(q) or q.real <= 0:
        return _not_applicable(label, f"e^(-i lambda) ab = {q:.6g} is not a positive real")
    q = q.real
    s = a + b
    c2, s2 = math.cos(2 * lam), math.sin(2 * lam)
    value = (2 + c2) * (2 * s.real - c2 - q / math.cos(lam)) - (s.imag - s2) ** 2
    return _combine(label, [_Check("(2+cos2l)(2Re[a+b]-cos2l-q/cosl)-(Im[a+b]-sin2l)^2 >= 0", value, False)])


def cor2_check(a: complex, b: complex, lam: float) -> Verdict:
    """Spirallikeness test for ``c = a+b+1`` when ``ab`` is positive and ``|lam| < pi/3``."""
    label = "spirallike-positive-product"
    a, b = complex(a), complex(b)
    lam = float(lam)
    if not 0 < abs(lam) < math.pi / 3:
        return _not_applicable(label, "requires 0 < |lambda| < pi/3")
    q = a * b
    if not _is_real(q) or q.real <= 0:
        return _not_applicable(label, f"ab = {q:.6g} is not a positive real")
    q = q.real
    rot = cmath.exp(1j * lam) * (a + b)
    cos = math.cos(lam)
    lhs = (rot.imag - 2 * math.sin(2 * lam) * cos) ** 2
    rhs = (4 * cos ** 2 - 1) * (2 * rot.real * cos - 4 * cos ** 4 + 3 * cos ** 2 - q)
    return _combine(label, [_Check("(Im[e^{il}(a+b)] - 2 sin2l cosl)^2 <= (4cos^2l-1)(...)", rhs - lhs, False)])


def cor_s_check(a: complex, b: complex, lam: float) -> Verdict:
    """``a + b = s`` real and ``ab = q e^{i lam}``: ``2s - q/cos(lam) >= (4cos^2-1)/(2cos^2+1)``."""
    label = "spirallike-real-sum"
    a, b = complex(a), complex(b)
    lam = SpiralAngle(lam)
    if lam == 0:
        return _not_applicable(label, "requires lambda != 0")
    s = a + b
    ab = a * b
    # angles arrive rounded, so compare arg(ab) with lambda rather than Im of the rotation
    if not _is_real(s) or ab == 0 or abs(_wrap(_arg(ab) - lam)) > ANGLE_TOL:
        return _not_applicable(label, "requires a + b real and e^(-i lambda) ab > 0")
    q = abs(ab)
    cos2 = math.cos(lam) ** 2
    lhs = 2 * s.real - q / math.cos(lam)
    rhs = (4 * cos2 - 1) / (2 * cos2 + 1)
    return _combine(label, [_Check("2s - q/cos(lambda) >= (4cos^2-1)/(2cos^2+1)", lhs - rhs, False)],
                    f"2s - q/cos(lambda) = {lhs:.10g}, bound = {rhs:.10g}")


def cor_a2_starlike(b: float, c: float, s: float = 0.0) -> Verdict:
    """``z 2F1(2, b+is; c+is; z)`` is starlike when ``b + c >= 3`` and ``b <= c`` (all real)."""
    label = "starlike-a2-family"
    b, c = float(b), float(c)
    return _combine(label, [_Check("b + c >= 3", b + c - 3, False), _Check("b <= c", c - b, False)],
                    f"triple (2, {complex(b, s):.6g}, {complex(c, s):.6g})")


def cor_spl_radius(R: float, lam: float) -> Verdict:
    """``z 2F1(2, R e^{i lam}; 3 + R e^{i lam}; z)``: radius bound for ``lam``-spirallikeness."""
    label = "spirallike-a2-radius"
    lam = SpiralAngle(lam)
    if lam == 0 or R <= 0:
        return _not_applicable(label, "requires lambda != 0 and R > 0")
    t = abs(lam)  # conjugation maps lambda to -lambda
    sin = math.sin(t)
    bound = (1 - sin) * (3 + 2 * sin) / (sin * math.cos(t))
    return _combine(label, [_Check("R <= (1-sin l)(3+2 sin l)/(sin l cos l)", bound - R, False)],
                    f"bound = {bound:.12g}")


def rotated_family_check(b: float, lam: float) -> Verdict:
    """``a = 2 e^{i lam} cos(lam)``, ``b > 0``, ``c = a + b + 1``: always ``lam``-spirallike."""
    label = "spirallike-rotated-a"
    lam = SpiralAngle(lam)
    if lam == 0:
        return _not_applicable(label, "requires lambda != 0")
    return _combine(label, [_Check("b > 0", float(b), True)])


def strongly_starlike_check(a: complex, b: complex, alpha: float) -> Verdict:
    """Strong starlikeness of order ``alpha`` for ``z 2F1(a,b;a+b+1;z)``, ``a+b`` real, ``ab > 0``."""
    label = "strongly-starlike-sufficient"
    a, b = complex(a), complex(b)
    if not 1 / 3 < alpha < 1:
        return _not_applicable(label, "requires 1/3 < alpha < 1")
    s, q = a + b, a * b
    if not _is_real(s) or not _is_real(q) or q.real <= 0:
        return _not_applicable(label, "requires a + b real and ab > 0")
    s, q = s.real, q.real
    sin2 = math.sin(math.pi * alpha / 2) ** 2
    # (a-b)^2 = s^2 - 4q and a^2 + ab + b^2 = s^2 - q
    value = (s * s - 4 * q + 6 * s - 3) * sin2 - (s * s - q)
    return _combine(label, [_Check("[(a-b)^2+6(a+b)-3] sin^2(pi alpha/2) - a^2-ab-b^2 >= 0", value, False)])


def cor_ss_ellipse(s: float, t: float, alpha: float) -> Verdict:
    """Ellipse membership of ``(s, t)`` for ``z 2F1(s+it, s-it; 2s+1; z)``.

    The margin is scaled by 3 so it coincides with the margin of
    :func:`strongly_starlike_check` for the same conjugate pair.
    """
    label = "strongly-starlike-ellipse"
    if not 1 / 3 < alpha < 1:
        return _not_applicable(label, "requires 1/3 < alpha < 1")
    sin2 = math.sin(math.pi * alpha / 2) ** 2
    lhs = (s - 2 * sin2) ** 2 + (4 * sin2 - 1) * t * t / 3
    rhs = sin2 * (4 * sin2 - 1)
    return _combine(label, [_Check("(s-2S)^2 + (4S-1)t^2/3 <= S(4S-1)", 3 * (rhs - lhs), False)])


# ---------------------------------------------------------------------------
# known results on the order of starlikeness


def _real_triple(a, b, c) -> bool:
    return all(abs(complex(x).imag) <= REAL_TOL * max(1.0, abs(x)) for x in (a, b, c))


def _thm_a_case(a: complex, b: complex, c: complex, p: ParamTriple):
    if _real_triple(a, b, c):
        ar, br, cr = a.real, b.real, c.real
        if 0 < ar <= br <= cr:
            f = gauss_2f1(p, -1).value
            df = d2f1(p, -1).value
            return "i", (1 - df / f).real, True
        if -1 <= ar < 0 < br and cr - ar - br > 1:
            # the infimum is h(1) = 1 + ab/(c-a-b-1); the minus sign in the
            # usual statement would put sigma above h(1)
            return "ii", 1 + ar * br / (cr - ar - br - 1), True
    if _is_real(a) and a.real >= 0 and 2 * b.real <= a.real + 1:
        if abs(c - (a.real - b.conjugate() + 1)) <= REAL_TOL * max(1.0, abs(c)):
            return "iii", 1 - a.real / 2, False
    return None


def thmA_sigma(p: ParamTriple):
    """Exact order of starlikeness (or a lower bound) from the classical results.

    Returns ``(case, value, is_exact)`` with case in ``{"i", "ii", "iii", "none"}``.
    The literal order ``(a, b)`` is tried before the swapped one.
    """
    for a, b in ((p.a, p.b), (p.b, p.a)):
        found = _thm_a_case(a, b, p.c, p)
        if found is not None:
            return found
    return "none", math.nan, False


def corB_starlike(p: ParamTriple) -> Verdict:
    """Classical sufficient conditions for starlikeness (three clauses)."""
    label = "starlike-classical"
    checks = []
    for a, b in ((p.a, p.b), (p.b, p.a)):
        c = p.c
        if _real_triple(a, b, c):
            ar, br, cr = a.real, b.real, c.real
            if 0 < ar <= br <= cr:
                checks.append(_Check("(i) ab <= b + c", br + cr - ar * br, False))
            if -1 <= ar < 0 < br:
                checks.append(_Check("(ii) c - a - b >= 1 - ab", (cr - ar - br) - (1 - ar * br), False))
        if _is_real(a) and 0 <= a.real <= 2 and 2 * b.real <= a.real + 1:
            gap = abs(c - (a.real - b.conjugate() + 1))
            if gap <= REAL_TOL * max(1.0, abs(c)):
                checks.append(_Check("(iii) 2Re b <= a + 1, 0 <= a <= 2, c = a - conj(b) + 1",
                                     min(a.real + 1 - 2 * b.real, a.real, 2 - a.real), False))
    if not checks:
        return Verdict(Status.FAILS, math.nan, "no clause applies", label)
    best = max(checks, key=lambda ch: ch.slack)
    return _combine(label, [best], f"{len(checks)} clause(s) applicable")


def coefficient_bound_check(p: ParamTriple) -> Verdict:
    """Necessary condition ``|ab/c| <= 2`` on the second Taylor coefficient."""
    coeff = abs(p.a * p.b / p.c)
    return _combine("coefficient-bound", [_Check("|ab/c| <= 2", 2 - coeff, False)],
                    f"|f''(0)/2| = {coeff:.6g}")


def boundedness(p: ParamTriple) -> bool:
    """Whether ``2F1(a,b;c;.)`` is bounded on the unit disk."""
    d = p.excess
    return d.real >= -CASE_SNAP and abs(d) > CASE_SNAP


def cluster_annulus(p: ParamTriple) -> AnnulusBounds:
    """Annulus of limit values of ``2F1`` at ``z = 1`` when ``c - a - b = is``, ``s != 0``."""
    d = p.excess
    if abs(d.real) > CASE_SNAP * max(1.0, abs(d)) or abs(d.imag) <= CASE_SNAP:
        raise NotZeroImbalanced(f"c - a - b = {d} is not a nonzero imaginary number")
    a, b, c = p.a, p.b, p.c
    w0 = gamma_ratio((c, d), (c - a, c - b))
    R = abs(gamma_ratio((c, -d), (a, b)))
    spread = math.exp(math.pi * abs(d.imag) / 2)
    return AnnulusBounds(w0, R, R / spread, R * spread)
