"""q-spiral arithmetic on C* = U x q^R.

Every nonzero complex number factors uniquely as c = u * q^omega with |u| = 1
and omega real.  This module provides that decomposition, the discrete-spiral
membership test c in q^Z, the branch-fixed logarithm log_q, the twisting
endomorphism g_z (the unique continuous endomorphism of C* killing U and
sending q to z), and the two projections gamma1, gamma2 used for local
Galois generators.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

from .context import QContext
from .errors import DomainError


@dataclass(frozen=True)
class SpiralPoint:
    """c = u * q^omega with |u| = 1 and omega real."""

    value: complex
    u: complex
    omega: float


class SpiralVerdict(NamedTuple):
    """Outcome of a q^Z membership test; distance is relative to |q^k|."""

    member: bool
    k: int
    distance: float


def decompose(c: complex, ctx: QContext) -> SpiralPoint:
    """Split c = u * q^omega, |u| = 1, omega real."""
    if c == 0:
        raise DomainError("cannot decompose 0")
    # |q^omega| = exp(omega * Re log q), so omega is fixed by |c| alone.
    omega = math.log(abs(c)) / ctx.log_q.real
    u = c / ctx.qpow(omega)
    return SpiralPoint(value=c, u=u / abs(u), omega=omega)


def in_q_spiral(c: complex, ctx: QContext) -> SpiralVerdict:
    """Is c on the discrete spiral q^Z, within eps_spiral relative tolerance?"""
    sp = decompose(c, ctx)
    k = round(sp.omega)
    qk = ctx.qpow(k)
    distance = abs(c - qk) / abs(qk)
    return SpiralVerdict(distance < ctx.eps_spiral, k, distance)


def log_q(c: complex, ctx: QContext) -> complex:
    """A logarithm base q: q^(log_q c) = c.

    Branch: with c = u * q^omega, the phase t = arg(u)/(2*pi) is taken in
    [0, 1), so the discontinuity sits on the spiral q^R approached
    counterclockwise (for real q in (0,1): the positive real axis approached
    from below).  The value is omega + 2*pi*i*t / log q.
    """
    sp = decompose(c, ctx)
    t = cmath.phase(sp.u) / (2.0 * math.pi)
    if t < 0.0:
        t += 1.0
    return sp.omega + (2j * math.pi * t) / ctx.log_q


def g_endomorphism(z: complex, lam: complex, ctx: QContext) -> complex:
    """The twisting endomorphism g_z: kills the unit-circle factor, g_z(q) = z.

    With lam = u * q^omega this is z^omega, computed as
    exp(omega * log_q(z) * log q) along the fixed log_q branch.
    """
    if z == 0:
        raise DomainError("g_z undefined for z = 0")
    omega = decompose(lam, ctx).omega
    return cmath.exp(omega * log_q(z, ctx) * ctx.log_q)


def gamma1(c: complex, ctx: QContext) -> complex:
    """Projection of c = u * q^omega onto the unit-circle factor u."""
    return decompose(c, ctx).u


def gamma2(c: complex, ctx: QContext) -> complex:
    """c = u * q^omega maps to e^(2*pi*i*omega)."""
    return cmath.exp(2j * math.pi * decompose(c, ctx).omega)
