"""Orbit geometry of weighted circle actions on the round 3-sphere.

The action e^{i*theta} (z1, z2) = (e^{ik theta} z1, e^{il theta} z2) with
coprime k >= l >= 1 has quotient a singular surface of revolution.  The
candidate closed form for its profile,

    f(t) = sin t cos t / sqrt(l^2 sin^2 t + k^2 cos^2 t),   t in [0, pi/2],

is treated as a hypothesis, not ground truth: ``validate_profile``
compares geodesic distances in the metric dt^2 + f(t)^2 dphi^2 (computed
by Clairaut shooting) against true orbit distances obtained by minimizing
round-sphere distance over the circle action, and rejects the profile
loudly when they disagree beyond tolerance.

All tolerances live in one place (``Tolerances``): 1e-12 for pointwise
closed-form comparisons, 1e-6 for distance minimization, 1e-3 for the
oracle gate.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize


def _quad(fn, lo, hi):
    """Adaptive quadrature with accuracy warnings silenced.

    Near-tangent Clairaut configurations legitimately strain the
    integrator; correctness is enforced downstream by re-checking the
    angular transport of every root, not by quad's own warnings.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(fn, lo, hi, epsabs=1e-9, limit=80)[0]

from .errors import OracleMismatch, SpecViolation


@dataclass(frozen=True)
class Tolerances:
    grid: float = 1e-12
    minimize: float = 1e-6
    oracle: float = 1e-3


TOL = Tolerances()


@dataclass(frozen=True)
class WeightedAction:
    k: int
    l: int

    def __post_init__(self):
        if self.l < 1 or self.k < self.l:
            raise SpecViolation("weights must satisfy k >= l >= 1")
        if math.gcd(self.k, self.l) != 1:
            raise SpecViolation("weights must be coprime")

    def act(self, theta, z):
        z1, z2 = z
        return (
            cmath.exp(1j * self.k * theta) * z1,
            cmath.exp(1j * self.l * theta) * z2,
        )


@dataclass(frozen=True)
class RevolutionProfile:
    """Profile f >= 0 on [0, T] with f(0) = f(T) = 0; metric dt^2 + f^2 dphi^2."""

    kind: str  # "weighted" | "suspension" | "doubled"
    domain: tuple[float, float]
    params: tuple

    def value(self, t):
        if self.kind == "weighted":
            k, l = self.params
            s, c = math.sin(t), math.cos(t)
            return s * c / math.sqrt(l * l * s * s + k * k * c * c)
        if self.kind == "suspension":
            (n,) = self.params
            return math.sin(t) / n
        inner = profile(WeightedAction(*self.params))
        return 2.0 * inner.value(t)

    def values(self, ts):
        ts = np.asarray(ts, dtype=float)
        if self.kind == "weighted":
            k, l = self.params
            s, c = np.sin(ts), np.cos(ts)
            return s * c / np.sqrt(l * l * s * s + k * k * c * c)
        if self.kind == "suspension":
            (n,) = self.params
            return np.sin(ts) / n
        inner = profile(WeightedAction(*self.params))
        return 2.0 * inner.values(ts)


def profile(action):
    """Quotient profile hypothesis for a weighted action."""
    return RevolutionProfile("weighted", (0.0, math.pi / 2), (action.k, action.l))


def suspension_profile(n):
    """S^2(1)/Z_n: the spherical suspension of a circle of length 2*pi/n."""
    if n < 1:
        raise SpecViolation("suspension order must be >= 1")
    return RevolutionProfile("suspension", (0.0, math.pi), (n,))


def branched_double(prof):
    """Profile of the two-fold cover branched at both singular ends (2*f)."""
    if prof.kind != "weighted":
        raise SpecViolation("doubling is defined for weighted quotient profiles")
    return RevolutionProfile("doubled", prof.domain, prof.params)


def cone_angles(prof):
    """(2*pi*f'(0+), 2*pi*|f'(T-)|) by one-sided Richardson differences."""

    def one_sided(t0, direction):
        h = 1e-3
        estimates = []
        for level in range(4):
            step = h / (2**level)
            estimates.append(direction * prof.value(t0 + direction * step) / step)
        # Richardson ladder for O(h) one-sided quotients of an odd-ish profile
        d = estimates
        for _ in range(3):
            d = [(4 * b - a) / 3 for a, b in zip(d, d[1:])]
        return d[0]

    t0, t1 = prof.domain
    return (
        2 * math.pi * one_sided(t0, 1.0),
        2 * math.pi * abs(one_sided(t1, -1.0)),
    )


def compare(prof_a, prof_b, grid_size=10_000, tol=TOL.grid):
    """Pointwise domination f_a >= f_b - tol on a uniform grid."""
    if prof_a.domain != prof_b.domain:
        raise SpecViolation("profiles must share a domain to compare")
    ts = np.linspace(prof_a.domain[0], prof_a.domain[1], grid_size)
    va, vb = prof_a.values(ts), prof_b.values(ts)
    gap = vb - va
    worst = int(np.argmax(gap))
    ok = bool(gap[worst] <= tol)
    return ok, float(gap[worst]), float(ts[worst])


# -- distances ----------------------------------------------------------------------


def round_s3_distance(p, q):
    inner = (p[0] * q[0].conjugate() + p[1] * q[1].conjugate()).real
    return math.acos(max(-1.0, min(1.0, inner)))


def orbit_distance(action, p, q, grid=2048, tol=TOL.minimize):
    """Distance between the orbits of p and q: min over the circle parameter.

    The inner product with the rotated q is A(theta) = Re(c1 e^{-ik theta}
    + c2 e^{-il theta}); dense sampling brackets the maximum and a bounded
    scalar minimization refines it.
    """
    c1 = p[0] * q[0].conjugate()
    c2 = p[1] * q[1].conjugate()
    thetas = np.linspace(0.0, 2 * math.pi, grid, endpoint=False)
    vals = (c1 * np.exp(-1j * action.k * thetas)).real + (
        c2 * np.exp(-1j * action.l * thetas)
    ).real
    best = int(np.argmax(vals))
    if vals[best] >= 1.0 - 1e-14:
        return 0.0

    def neg(theta):
        return -(
            (c1 * cmath.exp(-1j * action.k * theta)).real
            + (c2 * cmath.exp(-1j * action.l * theta)).real
        )

    width = 2 * math.pi / grid
    center = thetas[best]
    res = optimize.minimize_scalar(
        neg,
        bounds=(center - width, center + width),
        method="bounded",
        options={"xatol": tol * 1e-3},
    )
    top = max(vals[best], -res.fun)
    return math.acos(max(-1.0, min(1.0, top)))


def quotient_coordinates(action, z):
    """(t, phi) of an orbit: t from the moduli, phi the invariant angle mix."""
    z1, z2 = z
    t = math.atan2(abs(z2), abs(z1))
    phi = (action.l * cmath.phase(z1) - action.k * cmath.phase(z2)) % (2 * math.pi)
    return t, phi


# -- geodesics on the revolution surface ----------------------------------------------


def _half_seg(prof, c, anchor, other, stabilize, want_len):
    """Integrals from anchor toward other under the substitution x = u^2.

    The substitution removes the inverse-square-root endpoint behaviour at
    the anchor.  ``stabilize`` marks an exact turning point f(anchor) = c,
    where f(t) - c is replaced by its linearization slope * x inside a
    small zone whenever floating cancellation drives the raw difference
    below half the linear model.
    """
    direction = 1.0 if other >= anchor else -1.0
    span = abs(other - anchor)
    if span == 0.0:
        return 0.0, 0.0
    h = max(span * 1e-6, 1e-12)
    slope = max((prof.value(anchor + direction * h) - c) / h, 1e-30)
    zone = span * 1e-2

    def diff(t, x):
        raw = prof.value(t) - c
        if stabilize and x < zone:
            lin = slope * x
            if raw < 0.5 * lin or raw <= 0.0:
                return lin
        if raw <= 0.0:
            return 1e-300
        return raw

    def phi_ig(u):
        x = u * u
        t = anchor + direction * x
        ft = prof.value(t)
        return 2 * u * c / (ft * math.sqrt(diff(t, x) * (ft + c)))

    u_max = math.sqrt(span)
    phi = _quad(phi_ig, 0.0, u_max)
    if not want_len:
        return phi, None

    def len_ig(u):
        x = u * u
        t = anchor + direction * x
        ft = prof.value(t)
        return 2 * u * ft / math.sqrt(diff(t, x) * (ft + c))

    length = _quad(len_ig, 0.0, u_max)
    return phi, length


def _seg_phi_len(prof, c, t_from, t_to, turning, want_len=True):
    """(delta phi, length) along a monotone geodesic segment from t_from to t_to.

    Both endpoints get the square-root substitution: the lower end may be
    an exact turning point (``turning``), and either end may graze the
    Clairaut level f = c, where the plain integrand spikes.
    """
    if t_to < t_from:
        raise ValueError("segment must increase in t")
    tm = 0.5 * (t_from + t_to)
    p1, l1 = _half_seg(prof, c, t_from, tm, stabilize=turning, want_len=want_len)
    p2, l2 = _half_seg(prof, c, t_to, tm, stabilize=False, want_len=want_len)
    if not want_len:
        return p1 + p2, None
    return p1 + p2, l1 + l2


def _solve_turning(prof, c, lo, hi):
    """t in [lo, hi] with f(t) = c, where f is monotone on the bracket."""
    return optimize.brentq(lambda t: prof.value(t) - c, lo, hi, xtol=1e-13)


def profile_distance(prof, a, b):
    """Geodesic distance between orbit points (t, phi) in dt^2 + f^2 dphi^2.

    Candidates: routes through either cone point, the direct meridian when
    the angles agree, and Clairaut branches (monotone, or turning beyond
    either side) whose angular transport matches the target; the shortest
    wins.  Quadrature and root tolerances leave ~1e-6 of slack.
    """
    t1, phi1 = a
    t2, phi2 = b
    t0, t_end = prof.domain
    if t2 < t1:
        t1, t2 = t2, t1
        phi1, phi2 = phi2, phi1
    w = abs(phi1 - phi2) % (2 * math.pi)
    w = min(w, 2 * math.pi - w)
    candidates = [t1 - t0 + (t2 - t0), (t_end - t1) + (t_end - t2)]
    if w < 1e-12:
        candidates.append(t2 - t1)
    eps = 1e-9
    f1, f2 = prof.value(max(t1, t0 + eps)), prof.value(min(t2, t_end - eps))
    c_max = min(f1, f2)
    reflected = _Reflected(prof)

    def branch(c, mode, want_len=False):
        if mode == "direct":
            return _seg_phi_len(prof, c, t1, t2, turning=False, want_len=want_len)
        if mode == "left":
            ts = _solve_turning(prof, c, t0 + 1e-15, t1)
            p1, l1 = _seg_phi_len(prof, c, ts, t1, turning=True, want_len=want_len)
            p2, l2 = _seg_phi_len(prof, c, ts, t2, turning=True, want_len=want_len)
        else:
            ts = _solve_turning(prof, c, t2, t_end - 1e-15)
            p1, l1 = _seg_phi_len(
                reflected, c, t_end - ts, t_end - t1, turning=True, want_len=want_len
            )
            p2, l2 = _seg_phi_len(
                reflected, c, t_end - ts, t_end - t2, turning=True, want_len=want_len
            )
        if not want_len:
            return p1 + p2, None
        return p1 + p2, l1 + l2

    for mode, valid in (
        ("direct", c_max > 0 and t2 > t1),
        ("left", t1 > t0 + 1e-9 and c_max > 0),
        ("right", t2 < t_end - 1e-9 and c_max > 0),
    ):
        if not valid:
            continue
        lo_frac, hi_frac = 1e-7, 1.0 - 1e-7
        samples = 24
        prev_c = None
        prev_gap = None
        for i in range(samples + 1):
            cc = c_max * (lo_frac + (hi_frac - lo_frac) * i / samples)
            try:
                phi_c, _ = branch(cc, mode)
            except ValueError:
                prev_c, prev_gap = None, None
                continue
            gap = phi_c - w
            if prev_gap is not None and (gap == 0 or (gap > 0) != (prev_gap > 0)):
                try:
                    c_root = optimize.brentq(
                        lambda c: branch(c, mode)[0] - w, prev_c, cc, xtol=1e-11
                    )
                    phi_root, len_root = branch(c_root, mode, want_len=True)
                    if abs(phi_root - w) < 1e-5:  # reject quadrature-jitter roots
                        candidates.append(len_root)
                except ValueError:
                    pass
            prev_c, prev_gap = cc, gap
    return min(candidates)


class _Reflected:
    """View of a profile with t -> T - t, for right-hand turning segments."""

    def __init__(self, prof):
        self._p = prof
        self.domain = prof.domain

    def value(self, t):
        return self._p.value(self.domain[1] - t)


def validate_profile(action, samples=100, seed=0, tol=TOL.oracle, raise_on_mismatch=True):
    """Max |closed-form geodesic distance - true orbit distance| over samples.

    This is the gate that earns the closed-form profile: failure above
    tolerance rejects the profile by raising OracleMismatch.
    """
    rng = np.random.default_rng(seed)
    prof = profile(action)
    worst = 0.0
    for _ in range(samples):
        raw = rng.normal(size=4) + 1j * rng.normal(size=4)
        p = (raw[0], raw[1])
        q = (raw[2], raw[3])
        np_ = math.sqrt(abs(p[0]) ** 2 + abs(p[1]) ** 2)
        nq = math.sqrt(abs(q[0]) ** 2 + abs(q[1]) ** 2)
        p = (p[0] / np_, p[1] / np_)
        q = (q[0] / nq, q[1] / nq)
        oracle = orbit_distance(action, p, q)
        modeled = profile_distance(
            prof, quotient_coordinates(action, p), quotient_coordinates(action, q)
        )
        worst = max(worst, abs(oracle - modeled))
    if raise_on_mismatch and worst > tol:
        raise OracleMismatch(
            f"profile for weights ({action.k},{action.l}) off by {worst:.3e} > {tol:g}"
        )
    return worst
