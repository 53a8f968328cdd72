"""Scalar q-analytic primitives: Pochhammer symbols, Jacobi theta, q-characters,
the q-logarithm, and the 3phi2 basic hypergeometric series.

All evaluations are error-bounded: truncated series/products stop once a
geometric tail bound drops below ctx.eps_trunc, with a hard cap of ctx.n_max
terms, and the series-valued operations return a TruncationReport alongside
the value.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

from .context import QContext, TruncationReport
from .errors import (
    DivergenceError,
    DomainError,
    NonConvergentError,
    PoleError,
)
from .spiral import in_q_spiral

__all__ = [
    "qpochhammer_finite",
    "qpochhammer_infinite",
    "qpoch_inf_product",
    "theta",
    "theta_d1",
    "theta_d2",
    "theta_triple_product",
    "qcharacter",
    "lq",
    "lq_binom",
    "phi3_2",
    "qhyper_series",
]


def qpochhammer_finite(a: complex, ctx: QContext, n: int) -> complex:
    """(a;q)_n = (1-a)(1-aq)...(1-aq^(n-1)); the empty product (n=0) is 1."""
    if n < 0:
        raise DomainError("n must be >= 0")
    out = 1.0 + 0j
    aq = complex(a)
    for _ in range(n):
        out *= 1.0 - aq
        aq *= ctx.q
    return out


def qpochhammer_infinite(a: complex, ctx: QContext) -> tuple[complex, TruncationReport]:
    """(a;q)_infinity, truncated once the multiplicative tail |a| |q|^N/(1-|q|)
    falls below eps_trunc."""
    absq = abs(ctx.q)
    out = 1.0 + 0j
    aq = complex(a)
    n = 0
    while abs(aq) / (1.0 - absq) >= ctx.eps_trunc:
        out *= 1.0 - aq
        aq *= ctx.q
        n += 1
        if n > ctx.n_max:
            raise NonConvergentError(
                f"(a;q)_inf tail not below {ctx.eps_trunc} after {ctx.n_max} factors"
            )
    tail = abs(aq) / (1.0 - absq)
    return out, TruncationReport(terms_used=n, tail_bound=tail, converged=True)


def qpoch_inf_product(values: Sequence[complex], ctx: QContext) -> complex:
    """Product of (v;q)_infinity over a tuple of arguments."""
    out = 1.0 + 0j
    for v in values:
        out *= qpochhammer_infinite(v, ctx)[0]
    return out


def _theta_jet_series(z: complex, ctx: QContext) -> tuple[complex, complex, complex]:
    """(theta, theta', theta'') at z via the bilateral series
    sum_n (-1)^n q^(n(n-1)/2) z^n, for z in the core annulus."""
    q = ctx.q
    s0 = 1.0 + 0j  # n = 0 term
    s1 = 0j
    s2 = 0j
    peak = 1.0
    # upward: t(n+1) = t(n) * (-q^n z)
    t = 1.0 + 0j
    qn = 1.0 + 0j
    n = 0
    while True:
        t *= -qn * z
        qn *= q
        n += 1
        s0 += t
        s1 += t * n / z
        s2 += t * n * (n - 1) / (z * z)
        peak = max(peak, abs(t))
        if abs(t) * (1.0 + n * n) < ctx.eps_trunc * peak:
            break
        if n > ctx.n_max:
            raise NonConvergentError("theta series did not converge")
    # downward: t(n-1) = t(n) * (-q^(1-n) / z)
    t = 1.0 + 0j
    qm = q  # q^(1-n) at n = 0
    n = 0
    while True:
        t *= -qm / z
        qm *= q
        n -= 1
        s0 += t
        s1 += t * n / z
        s2 += t * n * (n - 1) / (z * z)
        peak = max(peak, abs(t))
        if abs(t) * (1.0 + n * n) < ctx.eps_trunc * peak:
            break
        if -n > ctx.n_max:
            raise NonConvergentError("theta series did not converge")
    return s0, s1, s2


def _theta_jet(z: complex, ctx: QContext) -> tuple[complex, complex, complex]:
    """(theta, theta', theta'') at any z != 0.

    The bilateral series is used on the annulus |q|^(1/2) <= |z| <= |q|^(-1/2)
    where it converges fastest; outside, z is shifted into the annulus with the
    functional equation theta(qz) = -theta(z)/z, whose derivative recurrences
    propagate the jet without overflow.
    """
    if z == 0:
        raise DomainError("theta undefined at z = 0")
    q = ctx.q
    absq = abs(q)
    lo = math.sqrt(absq)
    hi = 1.0 / lo
    az = abs(z)
    if az > hi * (1.0 + 1e-15):
        # theta(z) = -z * theta(qz)
        t0, t1, t2 = _theta_jet(q * z, ctx)
        v0 = -z * t0
        v1 = -t0 - z * q * t1
        v2 = -2.0 * q * t1 - z * q * q * t2
        return v0, v1, v2
    if az < lo * (1.0 - 1e-15):
        # theta(z) = -(q/z) * theta(z/q)
        t0, t1, t2 = _theta_jet(z / q, ctx)
        v0 = -(q / z) * t0
        v1 = (q / (z * z)) * t0 - t1 / z
        v2 = -2.0 * q / (z ** 3) * t0 + 2.0 / (z * z) * t1 - t2 / (q * z)
        return v0, v1, v2
    return _theta_jet_series(z, ctx)


def theta(z: complex, ctx: QContext) -> complex:
    """Jacobi theta theta_q(z) = (q;q)_inf (z;q)_inf (q/z;q)_inf.

    Satisfies theta_q(qz) = -theta_q(z)/z; simple zeros exactly on q^Z.
    """
    return _theta_jet(z, ctx)[0]


def theta_d1(z: complex, ctx: QContext) -> complex:
    """First derivative of theta_q."""
    return _theta_jet(z, ctx)[1]


def theta_d2(z: complex, ctx: QContext) -> complex:
    """Second derivative of theta_q."""
    return _theta_jet(z, ctx)[2]


def theta_triple_product(z: complex, ctx: QContext) -> complex:
    """theta_q via the triple product directly; independent cross-check of theta."""
    if z == 0:
        raise DomainError("theta undefined at z = 0")
    return (
        qpochhammer_infinite(ctx.q, ctx)[0]
        * qpochhammer_infinite(z, ctx)[0]
        * qpochhammer_infinite(ctx.q / z, ctx)[0]
    )


def qcharacter(lam: complex, z: complex, ctx: QContext) -> complex:
    """The q-character e_lam: meromorphic solution of e(qz) = lam * e(z).

    For |q| < |lam| <= 1 it is theta_q(z)/theta_q(lam*z); outside that annulus
    lam is rescaled by integer q-powers using e_(q*lam) = z * e_lam.  (The
    annulus is half-open at the |q| end so that e_1 is identically 1.)
    """
    if lam == 0 or z == 0:
        raise DomainError("qcharacter needs lam != 0 and z != 0")
    absq = abs(ctx.q)
    lam = complex(lam)
    prefac = 1.0 + 0j
    guard = 0
    while abs(lam) > 1.0 + 1e-14:
        # e_lam = e_(q*lam) / z
        lam *= ctx.q
        prefac /= z
        guard += 1
        if guard > ctx.n_max:
            raise NonConvergentError("qcharacter rescaling loop stuck")
    while abs(lam) <= absq * (1.0 + 1e-14):
        # e_lam = z * e_(lam/q)
        lam /= ctx.q
        prefac *= z
        guard += 1
        if guard > ctx.n_max:
            raise NonConvergentError("qcharacter rescaling loop stuck")
    pole = in_q_spiral(lam * z, ctx)
    if pole.member:
        raise PoleError(
            f"qcharacter pole: lam*z within {pole.distance:.2e} of q^{pole.k}"
        )
    return prefac * theta(z, ctx) / theta(lam * z, ctx)


def lq(z: complex, ctx: QContext) -> complex:
    """q-logarithm l_q(z) = -z * theta'_q(z)/theta_q(z); l_q(qz) = l_q(z) + 1."""
    if z == 0:
        raise DomainError("lq undefined at z = 0")
    zero = in_q_spiral(z, ctx)
    if zero.member:
        raise PoleError(f"lq pole: z within {zero.distance:.2e} of q^{zero.k}")
    t0, t1, _ = _theta_jet(z, ctx)
    return -z * t1 / t0


def lq_binom(z: complex, ctx: QContext, k: int) -> complex:
    """Binomial coefficient binom(l_q(z), k) with complex upper argument."""
    if k < 0:
        raise DomainError("k must be >= 0")
    if k == 0:
        return 1.0 + 0j
    ell = lq(z, ctx)
    out = 1.0 + 0j
    for j in range(k):
        out *= ell - j
    return out / math.factorial(k)


def qhyper_series(
    num: Sequence[complex],
    den: Sequence[complex],
    z: complex,
    ctx: QContext,
) -> tuple[complex, TruncationReport]:
    """sum_n  prod_i (num_i;q)_n / prod_j (den_j;q)_n  * z^n  for |z| < 1.

    General kernel behind phi3_2; the denominator tuple carries its own copy of
    q when the classical normalization is wanted.
    """
    az = abs(z)
    if az >= 1.0:
        raise DivergenceError(f"series needs |z| < 1, got {az}")
    if z == 0:
        return 1.0 + 0j, TruncationReport(terms_used=1, tail_bound=0.0, converged=True)
    term = 1.0 + 0j
    total = 1.0 + 0j
    nums = [complex(v) for v in num]
    dens = [complex(v) for v in den]
    n = 0
    while True:
        ratio = z
        for i, v in enumerate(nums):
            ratio *= 1.0 - v
            nums[i] = v * ctx.q
        for j, v in enumerate(dens):
            f = 1.0 - v
            if abs(f) < 1e-14:
                raise PoleError(f"denominator Pochhammer factor vanishes at n = {n}")
            ratio /= f
            dens[j] = v * ctx.q
        term *= ratio
        total += term
        n += 1
        # Beyond the parameter transient the term ratio tends to z, so the tail
        # is essentially geometric with ratio |z|.
        tail = abs(term) * az / (1.0 - az)
        if tail < ctx.eps_trunc and n >= 4:
            return total, TruncationReport(terms_used=n + 1, tail_bound=tail, converged=True)
        if n > ctx.n_max:
            raise NonConvergentError("q-hypergeometric series hit the term cap")


def phi3_2(
    a: Sequence[complex],
    b: Sequence[complex],
    z: complex,
    ctx: QContext,
) -> tuple[complex, TruncationReport]:
    """The order-3 basic hypergeometric series
    sum_n (a1,a2,a3;q)_n / (b1,b2,b3;q)_n z^n, conventionally with b1 = q."""
    if len(a) != 3 or len(b) != 3:
        raise DomainError("phi3_2 takes parameter triples")
    return qhyper_series(a, b, z, ctx)
