"""Solvers that hit a prescribed limiting slope within epsilon.

The limiting slopes of both families accumulate on [2, oo): family A via a
rational point u/v close to the root of lambda(x) = x/4 + 1/(4x) - 1/2 at
the target offset, family APRIME via a prime-power ladder. Both solvers
work entirely in exact rationals and return the achieved limit together
with a diagnostic ledger of the triangle-inequality budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import ArrangementParams, Family, limit_slope
from .numtheory import DomainError, is_prime

TARGET_PRECISION = 10**12  # denominator cap when ingesting float targets


def as_fraction(x, cap: int = TARGET_PRECISION) -> Fraction:
    """Ingest a target; floats are truncated to ~1e-12 rational precision."""
    if isinstance(x, float):
        return Fraction(x).limit_denominator(cap)
    return Fraction(x)


def lambda_fn(x) -> Fraction:
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"lambda is only used on positive rationals, got {x}")
    return x / 4 + 1 / (4 * x) - Fraction(1, 2)


def _sqrt_lower(y: Fraction, digits: int = 40) -> Fraction:
    """Rational lower approximation of sqrt(y) good to ~10^-digits."""
    scale = 10**digits
    n = y.numerator * y.denominator * scale * scale
    return Fraction(math.isqrt(n), y.denominator * scale)


def find_uv(alpha, epsilon) -> tuple[int, int, int]:
    """Integers u < v with v - u odd, d = (v + 1 - u)/2 >= 3, and
    |lambda(u/v) - alpha| < epsilon/5, 1/u < epsilon/5, 1/v < epsilon/5,
    3/(4uv) < epsilon/5."""
    alpha = Fraction(alpha)
    eps = Fraction(epsilon)
    if alpha < 0 or eps <= 0:
        raise DomainError("need alpha >= 0 and epsilon > 0")
    # positive root of lambda(x) = alpha: x = 2 alpha + 1 + 2 sqrt(alpha^2 + alpha)
    xstar = 2 * alpha + 1 + 2 * _sqrt_lower(alpha * alpha + alpha) if alpha else Fraction(1)
    u = 6 * (eps.denominator // eps.numerator + 1) + 10  # comfortably above 5/eps
    for _ in range(64):
        v = round(u * xstar)
        if (v - u) % 2 == 0:
            v += 1
        if v - u < 5:
            v = u + 5
        d = (v + 1 - u) // 2
        budget = eps / 5
        if (
            abs(lambda_fn(Fraction(u, v)) - alpha) < budget
            and Fraction(1, u) < budget
            and Fraction(1, v) < budget
            and Fraction(3, 4 * u * v) < budget
        ):
            return u, v, d
        u *= 2
    raise DomainError("no (u, v) pair found; epsilon too small for the search cap")


@dataclass(frozen=True)
class SolvedParams:
    target: Fraction
    epsilon: Fraction
    params: ArrangementParams | None
    achieved_limit: Fraction | None
    error: Fraction | None
    status: str  # "ok" | "cap_hit"
    diagnostics: dict = field(default_factory=dict)


def _family_a_fraction(p: int, r: int, e: int, d: int, g: int, u: int, w: int) -> Fraction:
    """limit slope - 2 of the family A parameters, in closed form."""
    params = ArrangementParams(Family.A, p=p, r=r, e=e, d=d, g=g, u=u, w=w)
    return limit_slope(params) - 2


def solve_family_a(
    target, epsilon, p: int = 2, g: int = 0, e: int = 1, w: int = 1, r_cap: int = 400
) -> SolvedParams:
    """Family A parameters whose limiting slope is within epsilon of target.

    Budget: |limit - 2 - alpha| <= |frac - bridge| + |lambda(u/v) - alpha|
    + 1/u + 1/v + 3/(4uv), each kept below epsilon/5; `bridge` is the
    r -> oo limit ((d-1)(d-2) - 2u) / (u(u-1) + 2ud) of the slope offset.
    """
    x = as_fraction(target)
    eps = as_fraction(epsilon)
    if x < 2 or eps <= 0:
        raise DomainError("need target >= 2 and epsilon > 0")
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    alpha = x - 2
    if alpha == 0:
        # aim slightly inside the interval; the slope offset is positive
        alpha_t, eps_t = eps / 2, eps / 4
    else:
        alpha_t, eps_t = alpha, eps

    u, v, d = find_uv(alpha_t, eps_t)
    bridge = Fraction((d - 1) * (d - 2) - 2 * u, u * (u - 1) + 2 * u * d)
    best = None
    for r in range(1, r_cap + 1):
        frac = _family_a_fraction(p, r, e, d, g, u, w)
        if best is None or abs(frac - alpha_t) < abs(best[1] - alpha_t):
            best = (r, frac)
        if abs(frac - bridge) < eps_t / 5:
            break
    r, frac = best
    params = ArrangementParams(Family.A, p=p, r=r, e=e, d=d, g=g, u=u, w=w)
    achieved = 2 + frac
    error = abs(achieved - x)
    diagnostics = {
        "u": u,
        "v": v,
        "d": d,
        "term_frac_vs_bridge": abs(frac - bridge),
        "term_lambda": abs(lambda_fn(Fraction(u, v)) - alpha_t),
        "term_inv_u": Fraction(1, u),
        "term_inv_v": Fraction(1, v),
        "term_3_4uv": Fraction(3, 4 * u * v),
        "internal_alpha": alpha_t,
        "internal_epsilon": eps_t,
    }
    status = "ok" if error < eps else "cap_hit"
    return SolvedParams(x, eps, params, achieved, error, status, diagnostics)


def _aprime_fraction(p: int, r: int, e: int, l: int) -> Fraction:
    m = p**r
    num = m * l * e * (2 * l - 5)
    den = (2 * l - 2) * (e * l * (2 * l - 1) - 2) + l * e * m
    return Fraction(num, den)


def solve_family_aprime(
    target, epsilon, p: int = 2, y_cap: int = 200, e_cap: int = 10**6, l_cap: int = 10**7
) -> SolvedParams:
    """Family APRIME parameters (e, r, l) within epsilon of target.

    For offsets above epsilon/3 the prime-power ladder is used: an integer
    n and exponent z with n*(2 alpha - 2 eps/3) <= p^z <= n*(2 alpha + 2
    eps/3), then l = n*p^y and r = z + y with y, e scanned until the two
    remaining thirds of the budget close. Targets at (or within epsilon/3
    of) 2 fall back to e = 1, r = 1 and a plain scan over l.
    """
    x = as_fraction(target)
    eps = as_fraction(epsilon)
    if x < 2 or eps <= 0:
        raise DomainError("need target >= 2 and epsilon > 0")
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    alpha = x - 2

    if alpha <= eps / 3:
        # slope offset decreases to 0 like p/(2l); walk it below alpha + eps
        best = None
        for l in range(3, l_cap):
            frac = _aprime_fraction(p, 1, 1, l)
            err = abs(frac - alpha)
            if best is None or err < best[2]:
                best = (l, frac, err)
            if err < eps:
                params = ArrangementParams(Family.APRIME, p=p, r=1, e=1, d=2 * l)
                return SolvedParams(x, eps, params, 2 + frac, err, "ok",
                                    {"route": "small-offset scan", "l": l})
        l, frac, err = best
        params = ArrangementParams(Family.APRIME, p=p, r=1, e=1, d=2 * l)
        return SolvedParams(x, eps, params, 2 + frac, err, "cap_hit",
                            {"route": "small-offset scan", "l": l})

    beta = 2 * alpha - 2 * eps / 3
    gamma = 2 * alpha + 2 * eps / 3
    z = 1
    while True:
        pz = p**z
        n = math.ceil(pz / gamma)
        if n >= 1 and n * beta <= pz and n * gamma >= pz:
            break
        z += 1
        if z > 10_000:
            raise DomainError("prime-power window never closed")
    mid_target = Fraction(pz, 2 * n)

    chosen_y = None
    for y in range(0, y_cap + 1):
        l = n * p**y
        if l < 3:
            continue
        r = z + y
        m = p**r
        mid = Fraction(m * (2 * l - 5), 4 * l * l - 6 * l + 2 + m)
        if abs(mid - mid_target) < eps / 3:
            chosen_y = (y, l, r, mid)
            break
    if chosen_y is None:
        return SolvedParams(x, eps, None, None, None, "cap_hit", {"route": "ladder", "stage": "y"})
    y, l, r, mid = chosen_y

    chosen_e = None
    for e in range(1, e_cap + 1):
        frac = _aprime_fraction(p, r, e, l)
        if abs(frac - mid) < eps / 3:
            chosen_e = (e, frac)
            break
    if chosen_e is None:
        return SolvedParams(x, eps, None, None, None, "cap_hit", {"route": "ladder", "stage": "e"})
    e, frac = chosen_e

    params = ArrangementParams(Family.APRIME, p=p, r=r, e=e, d=2 * l)
    achieved = 2 + frac
    error = abs(achieved - x)
    diagnostics = {
        "route": "ladder",
        "z": z,
        "n": n,
        "y": y,
        "term_window": abs(mid_target - 2 * alpha),
        "term_y": abs(mid - mid_target),
        "term_e": abs(frac - mid),
    }
    status = "ok" if error < eps else "cap_hit"
    return SolvedParams(x, eps, params, achieved, error, status, diagnostics)


def solve(target, epsilon, p: int = 2, family: Family | str = Family.A, **kwargs) -> SolvedParams:
    family = Family(family)
    if family is Family.APRIME:
        return solve_family_aprime(target, epsilon, p=p, **kwargs)
    return solve_family_a(target, epsilon, p=p, **kwargs)
