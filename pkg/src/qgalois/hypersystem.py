"""The order-3 q-hypergeometric system and its local fundamental solutions.

A parameter set (a1,a2,a3; b2,b3) with the implicit normalization b1 = q
defines the companion system Phi(qz) = A(z) Phi(z).  This module builds A,
classifies the local structure at 0 and infinity (Fuchsian / non-resonant /
logarithmic), assembles the local gauge matrices F and the character matrices
e_J so that Y = F e_J solves the system, continues solutions beyond the series
radius by iterating the functional equation, and computes the logarithmic
degeneration limits (b -> (q,q,q) at 0, a -> (a,a,a) at infinity) by an
epsilon-ladder with Richardson extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .context import QContext
from .errors import (
    DomainError,
    ExtrapolationDivergedError,
    PoleChainError,
    PoleError,
    ResonantError,
)
from .mat3 import DunfordPair, dunford, eig3
from .qseries import lq, qcharacter, qhyper_series
from .spiral import decompose, in_q_spiral

__all__ = [
    "HyperParams",
    "LocalData",
    "SideVerdict",
    "SystemVerdicts",
    "system_matrix",
    "check_fuchsian_nonresonant",
    "local_solution_zero",
    "local_solution_infinity",
    "local_solution_zero_log",
    "local_solution_infinity_log",
    "e_matrix",
    "extend_solution",
    "fmatrix_at",
    "solution_matrix",
    "gauge_residual",
    "ladder_order",
]


@dataclass(frozen=True)
class HyperParams:
    """Parameters (a1,a2,a3; b2,b3) of the order-3 system; b1 = q implicitly."""

    a: tuple[complex, complex, complex]
    b2: complex
    b3: complex

    def __post_init__(self):
        if len(self.a) != 3:
            raise DomainError("need exactly three a-parameters")
        if any(v == 0 for v in self.a) or self.b2 == 0 or self.b3 == 0:
            raise DomainError("parameters must be nonzero")

    @classmethod
    def from_exponents(
        cls,
        ctx: QContext,
        alpha: Sequence[float],
        beta: Sequence[float],
    ) -> "HyperParams":
        """Build q-real parameters a_i = q^alpha_i, b_j = q^beta_j (beta = (beta2, beta3))."""
        if len(alpha) != 3 or len(beta) != 2:
            raise DomainError("need three alpha exponents and two beta exponents")
        a = tuple(ctx.qpow(x) for x in alpha)
        return cls(a=a, b2=ctx.qpow(beta[0]), b3=ctx.qpow(beta[1]))

    def b(self, ctx: QContext) -> tuple[complex, complex, complex]:
        """The full b-triple (q, b2, b3)."""
        return (ctx.q, self.b2, self.b3)

    def exponents(self, ctx: QContext) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """Spiral exponents (alpha_1..3), (beta_1..3) with beta_1 = 1."""
        alphas = tuple(decompose(v, ctx).omega for v in self.a)
        betas = tuple(decompose(v, ctx).omega for v in self.b(ctx))
        return alphas, betas

    def units(self, ctx: QContext) -> tuple[tuple[complex, ...], tuple[complex, ...]]:
        """Unit-circle factors (u_1..3), (v_1..3) of the parameters."""
        us = tuple(decompose(v, ctx).u for v in self.a)
        vs = tuple(decompose(v, ctx).u for v in self.b(ctx))
        return us, vs

    def is_q_real(self, ctx: QContext) -> bool:
        """True iff every parameter lies on the continuous spiral q^R."""
        us, vs = self.units(ctx)
        return all(abs(u - 1.0) < ctx.eps_spiral for u in us + vs)


@dataclass(frozen=True)
class SideVerdict:
    """Local structure at one singular point."""

    fuchsian: bool
    nonresonant: bool
    logarithmic: bool


@dataclass(frozen=True)
class SystemVerdicts:
    zero: SideVerdict
    infinity: SideVerdict


@dataclass(frozen=True)
class LocalData:
    """A local fundamental solution Y = F e_J at one singular point.

    F is the series evaluator for the gauge matrix, valid for |z| <= radius
    at 0 and |z| >= radius at infinity; beyond that use fmatrix_at /
    solution_matrix, which continue it with the functional equation.
    """

    side: str  # "zero" | "infinity"
    J: np.ndarray
    dunford: DunfordPair
    exponents: tuple[complex, ...]
    F: Callable[[complex], np.ndarray] = field(repr=False)
    radius: float
    logarithmic: bool
    resonant: bool


def _denominator(p: HyperParams, z: complex, ctx: QContext) -> complex:
    a1, a2, a3 = p.a
    return p.b2 * p.b3 / ctx.q ** 2 - z * a1 * a2 * a3


def system_matrix(p: HyperParams, z: complex, ctx: QContext) -> np.ndarray:
    """Companion matrix A(z) with Phi(qz) = A(z) Phi(z)."""
    q = ctx.q
    a1, a2, a3 = p.a
    b2, b3 = p.b2, p.b3
    den = _denominator(p, z, ctx)
    scale = max(abs(b2 * b3 / q ** 2), abs(z * a1 * a2 * a3), 1e-300)
    if abs(den) < 1e-12 * scale:
        raise PoleError(f"coefficient pole at z = {z}")
    lam = (1.0 - z) / den
    mu = (z * (a1 + a2 + a3) - (1.0 + b2 / q + b3 / q)) / den
    delta = (b2 * b3 / q ** 2 + b2 / q + b3 / q - z * (a1 * a2 + a2 * a3 + a1 * a3)) / den
    return np.array(
        [[0, 1, 0], [0, 0, 1], [lam, mu, delta]],
        dtype=complex,
    )


def _side_verdict(eigvals: Sequence[complex], ctx: QContext) -> SideVerdict:
    nonres = True
    log = False
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            hit = in_q_spiral(eigvals[i] / eigvals[j], ctx)
            if hit.member and hit.k != 0:
                nonres = False
            if hit.member and hit.k == 0 and i < j:
                # A companion matrix is non-derogatory, so a repeated
                # eigenvalue always carries a nontrivial Jordan block.
                log = True
    fuchs = all(abs(v) > 0 for v in eigvals)
    return SideVerdict(fuchsian=fuchs, nonresonant=nonres, logarithmic=log)


def check_fuchsian_nonresonant(p: HyperParams, ctx: QContext) -> SystemVerdicts:
    """Local spectral structure: eigenvalues {1, q/b2, q/b3} at 0 and
    {1/a1, 1/a2, 1/a3} at infinity, tested pairwise against q^Z."""
    q = ctx.q
    e0 = (1.0 + 0j, q / p.b2, q / p.b3)
    einf = tuple(1.0 / v for v in p.a)
    return SystemVerdicts(zero=_side_verdict(e0, ctx), infinity=_side_verdict(einf, ctx))


def _series_ctx(ctx: QContext) -> QContext:
    """Tighten the truncation tolerance for inner series used in limits."""
    if ctx.eps_trunc <= 1e-14:
        return ctx
    return replace(ctx, eps_trunc=1e-14)


def _f_zero_series(p: HyperParams, ctx: QContext) -> Callable[[complex], np.ndarray]:
    """The gauge matrix F at 0: column j rescales all parameters by q/b_j and
    rows evaluate at z, qz, q^2 z with powers of q/b_j."""
    q = ctx.q
    b = p.b(ctx)
    scales = [q / bj for bj in b]
    sctx = _series_ctx(ctx)

    def F(z: complex) -> np.ndarray:
        out = np.empty((3, 3), dtype=complex)
        for j, s in enumerate(scales):
            num = tuple(s * ai for ai in p.a)
            den = tuple(s * bk for bk in b)
            for r in range(3):
                out[r, j] = s ** r * qhyper_series(num, den, q ** r * z, sctx)[0]
        return out

    return F


def _f_infinity_series(p: HyperParams, ctx: QContext) -> Callable[[complex], np.ndarray]:
    """The gauge matrix F at infinity: column i uses parameters a_i q/b over
    a_i q/a with argument proportional to 1/z."""
    q = ctx.q
    a1, a2, a3 = p.a
    b = p.b(ctx)
    c0 = p.b2 * p.b3 / (a1 * a2 * a3)
    sctx = _series_ctx(ctx)

    def F(z: complex) -> np.ndarray:
        out = np.empty((3, 3), dtype=complex)
        for i, ai in enumerate(p.a):
            num = tuple(ai * q / bk for bk in b)
            den = tuple(ai * q / ak for ak in p.a)
            for r in range(3):
                arg = q ** (1 - r) * c0 / z
                out[r, i] = (1.0 / ai) ** r * qhyper_series(num, den, arg, sctx)[0]
        return out

    return F


def local_solution_zero(p: HyperParams, ctx: QContext) -> LocalData:
    """Generic local solution at 0 (non-resonant, non-logarithmic)."""
    v = check_fuchsian_nonresonant(p, ctx).zero
    if not v.nonresonant:
        raise ResonantError("system is resonant at 0; shift parameters first")
    if v.logarithmic:
        raise ResonantError(
            "logarithmic at 0; use local_solution_zero_log for b2 = b3 = q"
        )
    q = ctx.q
    exps = (1.0 + 0j, q / p.b2, q / p.b3)
    J = np.diag(np.array(exps, dtype=complex))
    return LocalData(
        side="zero",
        J=J,
        dunford=DunfordPair(D=J.copy(), U=np.eye(3, dtype=complex)),
        exponents=exps,
        F=_f_zero_series(p, ctx),
        radius=0.5,
        logarithmic=False,
        resonant=False,
    )


def local_solution_infinity(p: HyperParams, ctx: QContext) -> LocalData:
    """Generic local solution at infinity (non-resonant, non-logarithmic)."""
    v = check_fuchsian_nonresonant(p, ctx).infinity
    if not v.nonresonant:
        raise ResonantError("system is resonant at infinity; shift parameters first")
    if v.logarithmic:
        raise ResonantError(
            "logarithmic at infinity; use local_solution_infinity_log for a = (a,a,a)"
        )
    a1, a2, a3 = p.a
    exps = tuple(1.0 / v for v in p.a)
    J = np.diag(np.array(exps, dtype=complex))
    c0 = p.b2 * p.b3 / (a1 * a2 * a3)
    radius = 2.0 * abs(c0 / ctx.q)
    return LocalData(
        side="infinity",
        J=J,
        dunford=DunfordPair(D=J.copy(), U=np.eye(3, dtype=complex)),
        exponents=exps,
        F=_f_infinity_series(p, ctx),
        radius=radius,
        logarithmic=False,
        resonant=False,
    )


def e_matrix(J, z: complex, side: str, ctx: QContext) -> np.ndarray:
    """Character matrix e_J(z) with e_J(qz) = J e_J(z).

    The semi-simple part uses q-characters (via 1/z for the infinity side);
    the unipotent part uses the q-logarithm polynomial, which satisfies the
    required shift law on both sides.
    """
    if side not in ("zero", "infinity"):
        raise DomainError("side must be 'zero' or 'infinity'")
    dp = J if isinstance(J, DunfordPair) else dunford(np.asarray(J, dtype=complex))
    D, U = dp.D, dp.U

    w = z if side == "zero" else 1.0 / z
    off = D - np.diag(np.diag(D))
    if np.max(np.abs(off)) < 1e-13 * max(np.max(np.abs(D)), 1e-300):
        lams = np.diag(D)
        if side == "zero":
            eD = np.diag([qcharacter(l, w, ctx) for l in lams])
        else:
            eD = np.diag([qcharacter(1.0 / l, w, ctx) for l in lams])
    else:
        jf = eig3(D)
        S = jf.transform
        lams = jf.eigenvalues
        if side == "zero":
            diag = [qcharacter(l, w, ctx) for l in lams]
        else:
            diag = [qcharacter(1.0 / l, w, ctx) for l in lams]
        eD = S @ np.diag(diag) @ np.linalg.inv(S)

    N = U - np.eye(3, dtype=complex)
    if np.max(np.abs(N)) < 1e-14:
        return eD
    ell = lq(z, ctx)
    eU = (
        np.eye(3, dtype=complex)
        + ell * N
        + (ell * (ell - 1.0) / 2.0) * (N @ N)
    )
    return eD @ eU


def _continued(
    f_inner: Callable[[complex], np.ndarray],
    p: HyperParams,
    z: complex,
    ctx: QContext,
    side: str,
    radius: float,
    rmul: np.ndarray | None,
) -> np.ndarray:
    """Continue a matrix solution along the q-shift chain to z.

    rmul is the right multiplier applied per step (J for gauge matrices F,
    None/identity for full solutions Y).
    """
    absq = abs(ctx.q)
    if side == "zero":
        if abs(z) <= radius:
            return f_inner(z)
        m = max(1, math.ceil(math.log(abs(z) / radius) / math.log(1.0 / absq)))
        val = f_inner(z * ctx.q ** m)
        rinv = None
        for j in range(m - 1, -1, -1):
            point = z * ctx.q ** j
            if abs(point - 1.0) < 1e-8:
                raise PoleChainError(f"chain point {point} hits the singular point 1")
            A = system_matrix(p, point, ctx)
            val = np.linalg.solve(A, val)
            if rmul is not None:
                val = val @ rmul
        return val
    # infinity side
    if abs(z) >= radius:
        return f_inner(z)
    m = max(1, math.ceil(math.log(radius / abs(z)) / math.log(1.0 / absq)))
    val = f_inner(z / ctx.q ** m)
    if rmul is not None:
        rinv = np.linalg.inv(rmul)
    for j in range(m - 1, -1, -1):
        prev = z / ctx.q ** (j + 1)
        A = system_matrix(p, prev, ctx)
        val = A @ val
        if rmul is not None:
            val = val @ rinv
    return val


def extend_solution(
    y_eval: Callable[[complex], np.ndarray],
    p: HyperParams,
    z: complex,
    ctx: QContext,
    side: str = "zero",
    radius: float = 0.5,
) -> np.ndarray:
    """Evaluate a full solution Y (Y(qz) = A(z) Y(z)) at z, iterating the
    functional equation from inside the series domain when needed."""
    return _continued(y_eval, p, z, ctx, side, radius, rmul=None)


def fmatrix_at(local: LocalData, p: HyperParams, z: complex, ctx: QContext) -> np.ndarray:
    """Gauge matrix F at z, continued with F(qz) J = A(z) F(z) beyond the radius."""
    return _continued(local.F, p, z, ctx, local.side, local.radius, rmul=local.J)


def solution_matrix(local: LocalData, p: HyperParams, z: complex, ctx: QContext) -> np.ndarray:
    """Fundamental solution Y(z) = F(z) e_J(z)."""
    return fmatrix_at(local, p, z, ctx) @ e_matrix(local.dunford, z, local.side, ctx)


def gauge_residual(local: LocalData, p: HyperParams, z: complex, ctx: QContext) -> float:
    """Relative residual of F(qz) J - A(z) F(z) at one point."""
    Fz = fmatrix_at(local, p, z, ctx)
    Fqz = fmatrix_at(local, p, ctx.q * z, ctx)
    A = system_matrix(p, z, ctx)
    return float(
        np.linalg.norm(Fqz @ local.J - A @ Fz) / max(np.linalg.norm(Fz), 1e-300)
    )


# --- logarithmic degenerations -------------------------------------------------

_LADDER = tuple(1e-3 / 2 ** k for k in range(5))


def _richardson(values: list[np.ndarray]) -> np.ndarray:
    """Richardson extrapolation to 0 for a ladder f(eps), f(eps/2), ... with an
    integer-power error expansion."""
    table = [np.asarray(v, dtype=complex) for v in values]
    level = 1
    while len(table) > 1:
        factor = 2.0 ** level
        table = [
            (factor * table[k + 1] - table[k]) / (factor - 1.0)
            for k in range(len(table) - 1)
        ]
        level += 1
    return table[0]


def ladder_order(values: list[np.ndarray]) -> float:
    """Observed convergence order of an eps-halving ladder (median over entries)."""
    if len(values) < 3:
        raise DomainError("need at least three ladder values")
    d1 = np.abs(values[-3] - values[-2]).ravel()
    d2 = np.abs(values[-2] - values[-1]).ravel()
    mask = (d1 > 0) & (d2 > 0)
    if not np.any(mask):
        return float("inf")
    return float(np.median(np.log2(d1[mask] / d2[mask])))


def _kmult_zero(b2: complex, b3: complex, ctx: QContext) -> np.ndarray:
    """Multiplier turning the generic F at 0 into the b -> (q,q,q) limit frame:
    the explicit form of V(b)^{-1} [[1,-1,1],[1,0,0],[1,1,0]]."""
    q = ctx.q
    r2 = q / b2
    r3 = q / b3
    return np.array(
        [
            [
                1.0,
                (1.0 - q * q / (b2 * b3)) / ((r2 - 1.0) * (r3 - 1.0)),
                (q * q / (b2 * b3)) / ((r2 - 1.0) * (r3 - 1.0)),
            ],
            [
                0.0,
                (r3 - 1.0) / ((r3 - r2) * (r2 - 1.0)),
                (-r3) / ((r3 - r2) * (r2 - 1.0)),
            ],
            [
                0.0,
                (r2 - 1.0) / ((r2 - r3) * (r3 - 1.0)),
                (-r2) / ((r2 - r3) * (r3 - 1.0)),
            ],
        ],
        dtype=complex,
    )


def _perturbed_b(p: HyperParams, eps: float, ctx: QContext) -> HyperParams:
    # distinct perturbations: the limit multiplier needs b2 != b3
    return HyperParams(a=p.a, b2=ctx.q * (1.0 + eps), b3=ctx.q * (1.0 + 2.0 * eps))


def _check_log_zero_params(p: HyperParams, ctx: QContext) -> None:
    for j, bj in ((2, p.b2), (3, p.b3)):
        if abs(bj / ctx.q - 1.0) > ctx.eps_spiral:
            raise DomainError(f"b{j} must equal q for the logarithmic limit at 0")


def local_solution_zero_log(p: HyperParams, ctx: QContext) -> LocalData:
    """Local solution at 0 for b2 = b3 = q (logarithmic case).

    F is the eps-ladder limit of F(a, b(eps); z) times the frame multiplier,
    Richardson-extrapolated; the exponent matrix is the unipotent J_q."""
    _check_log_zero_params(p, ctx)
    q = ctx.q
    Jq = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=complex)

    def F(z: complex) -> np.ndarray:
        vals = []
        for eps in _LADDER:
            pe = _perturbed_b(p, eps, ctx)
            vals.append(_f_zero_series(pe, ctx)(z) @ _kmult_zero(pe.b2, pe.b3, ctx))
        out = _richardson(vals)
        if not np.all(np.isfinite(out)):
            raise ExtrapolationDivergedError("logarithmic limit at 0 diverged")
        return out

    return LocalData(
        side="zero",
        J=Jq,
        dunford=DunfordPair(D=np.eye(3, dtype=complex), U=Jq.copy()),
        exponents=(1.0 + 0j, 1.0 + 0j, 1.0 + 0j),
        F=F,
        radius=0.5,
        logarithmic=True,
        resonant=False,
    )


def _wmult_infinity(a: complex) -> np.ndarray:
    return np.array(
        [
            [1.0 / a ** 2, -1.0 / a, 1.0],
            [1.0 / a ** 3, 0.0, 0.0],
            [1.0 / a ** 4, 1.0 / a ** 3, 0.0],
        ],
        dtype=complex,
    )


def _vandermonde(nodes: Sequence[complex], ctx: QContext) -> np.ndarray:
    """V(u) with rows (1,1,1), (q/u_i), ((q/u_i)^2)."""
    r = [ctx.q / u for u in nodes]
    return np.array([[1, 1, 1], r, [v * v for v in r]], dtype=complex)


def _perturbed_a(p: HyperParams, eps: float) -> HyperParams:
    a = p.a[0]
    return HyperParams(
        a=(a, a * (1.0 + eps), a * (1.0 + eps) ** 2), b2=p.b2, b3=p.b3
    )


def _check_log_infinity_params(p: HyperParams, ctx: QContext) -> None:
    for i in (1, 2):
        if abs(p.a[i] / p.a[0] - 1.0) > ctx.eps_spiral:
            raise DomainError("a must be a constant triple for the logarithmic limit at infinity")
    for j, bj in ((2, p.b2), (3, p.b3)):
        if abs(bj / ctx.q - 1.0) > ctx.eps_spiral:
            raise DomainError(f"b{j} must equal q in the doubly logarithmic case")


def local_solution_infinity_log(p: HyperParams, ctx: QContext) -> LocalData:
    """Local solution at infinity for a = (a,a,a), b = (q,q,q).

    F is the eps-ladder limit of F(a(eps), q; z) V(q a(eps))^{-1} W(a)."""
    _check_log_infinity_params(p, ctx)
    a = p.a[0]
    Jinf = np.array(
        [[1.0 / a, 1, 0], [0, 1.0 / a, 1], [0, 0, 1.0 / a]], dtype=complex
    )
    W = _wmult_infinity(a)
    radius = 2.0 * abs(p.b2 * p.b3 / (a ** 3 * ctx.q))

    def F(z: complex) -> np.ndarray:
        vals = []
        for eps in _LADDER:
            pe = _perturbed_a(p, eps)
            V = _vandermonde(tuple(ctx.q * ai for ai in pe.a), ctx)
            mult = np.linalg.solve(V, W)
            vals.append(_f_infinity_series(pe, ctx)(z) @ mult)
        out = _richardson(vals)
        if not np.all(np.isfinite(out)):
            raise ExtrapolationDivergedError("logarithmic limit at infinity diverged")
        return out

    return LocalData(
        side="infinity",
        J=Jinf,
        dunford=dunford(Jinf),
        exponents=(1.0 / a, 1.0 / a, 1.0 / a),
        F=F,
        radius=radius,
        logarithmic=True,
        resonant=False,
    )
