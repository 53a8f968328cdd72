"""Identity-verification suites.

Each suite evaluates a family of exact identities at randomly sampled points
and returns named residual records with pass/fail against fixed thresholds.
The suites double as the CLI `verify` command and as oracles for the tests;
all randomness is seeded for reproducibility.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .context import QContext
from .errors import DomainError
from . import connection as cn
from . import hypersystem as hs
from . import mat3
from . import qseries as qs

__all__ = [
    "CheckResult",
    "random_case_i_params",
    "random_annulus_points",
    "suite_theta",
    "suite_characters",
    "suite_gauge",
    "suite_bmw",
    "suite_detminors",
    "suite_psl2",
    "run_suite",
    "SUITES",
]


@dataclass(frozen=True)
class CheckResult:
    """One verified identity: measured residual against its threshold."""

    suite: str
    name: str
    residual: float
    threshold: float
    passed: bool


def _check(suite: str, name: str, residual: float, threshold: float) -> CheckResult:
    return CheckResult(suite, name, float(residual), threshold, bool(residual < threshold))


def random_annulus_points(
    rng: np.random.Generator, n: int, ctx: QContext, r_lo: float = 0.6, r_hi: float = 0.9
) -> list[complex]:
    """Points with |q|^0.9-ish < |z| < 1-ish, away from the positive reals."""
    radii = abs(ctx.q) ** rng.uniform(r_lo, r_hi, n)
    angles = rng.uniform(0.05, 0.95, n) * 2.0 * math.pi
    return [complex(r * cmath.exp(1j * t)) for r, t in zip(radii, angles)]


def random_case_i_params(rng: np.random.Generator, ctx: QContext) -> hs.HyperParams:
    """A q-real parameter set with all spiral-genericity gaps at least 0.03."""
    while True:
        alpha = np.sort(rng.uniform(0.05, 0.95, 3))
        beta = np.sort(rng.uniform(0.05, 0.95, 2))
        gaps = [
            alpha[1] - alpha[0], alpha[2] - alpha[1], beta[1] - beta[0],
            min(abs(float(x % 1.0)) for x in np.subtract.outer(alpha, np.append(beta, 1.0)).ravel()),
        ]
        if min(gaps) > 0.03 and max(alpha[2], beta[1]) < 0.97:
            return hs.HyperParams.from_exponents(ctx, tuple(alpha), tuple(beta))


def suite_theta(ctx: QContext, rng: np.random.Generator, n: int = 1000) -> list[CheckResult]:
    """theta functional equation and series/product agreement."""
    pts = random_annulus_points(rng, n, ctx, 0.1, 0.9)
    feq = 0.0
    prod = 0.0
    for z in pts:
        t = qs.theta(z, ctx)
        feq = max(feq, abs(qs.theta(ctx.q * z, ctx) + t / z) / max(abs(t / z), 1e-300))
        tp = qs.theta_triple_product(z, ctx)
        prod = max(prod, abs(t - tp) / max(abs(tp), 1e-300))
    return [
        _check("theta", "functional_equation", feq, 1e-10),
        _check("theta", "triple_product_agreement", prod, 1e-10),
    ]


def suite_characters(ctx: QContext, rng: np.random.Generator, n: int = 200) -> list[CheckResult]:
    """q-character rescaling and shift laws; q-logarithm shift law."""
    pts = random_annulus_points(rng, n, ctx, 0.15, 0.85)
    lams = random_annulus_points(rng, n, ctx, 0.05, 0.95)
    r_scale = r_shift = r_lq = 0.0
    for z, lam in zip(pts, lams):
        e = qs.qcharacter(lam, z, ctx)
        e_up = qs.qcharacter(ctx.q * lam, z, ctx)
        r_scale = max(r_scale, abs(e_up - z * e) / max(abs(z * e), 1e-300))
        e_qz = qs.qcharacter(lam, ctx.q * z, ctx)
        r_shift = max(r_shift, abs(e_qz - lam * e) / max(abs(lam * e), 1e-300))
        l = qs.lq(z, ctx)
        r_lq = max(r_lq, abs(qs.lq(ctx.q * z, ctx) - l - 1.0) / max(abs(l) + 1.0, 1.0))
    return [
        _check("characters", "rescaling_law", r_scale, 1e-10),
        _check("characters", "shift_law", r_shift, 1e-10),
        _check("characters", "qlog_shift", r_lq, 1e-10),
    ]


def suite_gauge(
    ctx: QContext, rng: np.random.Generator, n_params: int = 5, n_points: int = 20
) -> list[CheckResult]:
    """Gauge identity F(qz) J = A(z) F(z) for both local solutions."""
    out = []
    for k in range(n_params):
        p = random_case_i_params(rng, ctx)
        loc0 = hs.local_solution_zero(p, ctx)
        loci = hs.local_solution_infinity(p, ctx)
        pts0 = random_annulus_points(rng, n_points, ctx, 0.3, 2.0)
        ptsi = [1.0 / z for z in random_annulus_points(rng, n_points, ctx, 0.3, 2.0)]
        r0 = max(hs.gauge_residual(loc0, p, z, ctx) for z in pts0)
        ri = max(hs.gauge_residual(loci, p, z, ctx) for z in ptsi)
        out.append(_check("gauge", f"set{k}_zero", r0, 1e-8))
        out.append(_check("gauge", f"set{k}_infinity", ri, 1e-8))
    return out


def suite_bmw(
    ctx: QContext, rng: np.random.Generator, n_params: int = 5, n_points: int = 10
) -> list[CheckResult]:
    """Numeric vs closed-form Birkhoff matrix agreement."""
    out = []
    for k in range(n_params):
        p = random_case_i_params(rng, ctx)
        worst = 0.0
        for z in random_annulus_points(rng, n_points, ctx):
            worst = max(worst, cn.connection_eval(p, z, ctx, "both").residual_cross)
        out.append(_check("bmw", f"set{k}_cross_method", worst, 1e-6))
    return out


def suite_detminors(
    ctx: QContext, rng: np.random.Generator, n_points: int = 10
) -> list[CheckResult]:
    """Determinant and all nine 2x2 minor closed forms of the twisted matrix,
    plus localization of the determinant zero."""
    p = random_case_i_params(rng, ctx)
    det_res = minor_res = laplace_res = 0.0
    for z in random_annulus_points(rng, n_points, ctx):
        B = cn.twisted_birkhoff(p, z, ctx, "closed_form")
        d = np.linalg.det(B)
        f = cn.det_formula(p, z, ctx)
        det_res = max(det_res, abs(d - f) / max(abs(f), 1e-300))
        lap = 0.0
        for rows in ((1, 2), (1, 3), (2, 3)):
            for cols in ((1, 2), (1, 3), (2, 3)):
                m = mat3.minor2(B, rows, cols)
                mf = cn.minor_formula(p, rows, cols, z, ctx)
                minor_res = max(minor_res, abs(m - mf) / max(abs(mf), 1e-300))
        # Laplace expansion of det along row 1 with the minor closed forms
        for j, sign in ((1, 1.0), (2, -1.0), (3, 1.0)):
            cols = tuple(c for c in (1, 2, 3) if c != j)
            lap += sign * B[0, j - 1] * cn.minor_formula(p, (2, 3), cols, z, ctx)
        laplace_res = max(laplace_res, abs(lap - f) / max(abs(f), 1e-300))
    # determinant zero exactly on (b2 b3/(q^2 a1 a2 a3)) q^Z
    z0 = p.b2 * p.b3 / (ctx.q ** 2 * p.a[0] * p.a[1] * p.a[2])
    scale = abs(cn.det_formula(p, z0 * 1.2, ctx))
    loc = abs(cn.det_formula(p, z0, ctx)) / max(scale, 1e-300)
    return [
        _check("detminors", "determinant_closed_form", det_res, 1e-8),
        _check("detminors", "all_nine_minors", minor_res, 1e-8),
        _check("detminors", "laplace_consistency", laplace_res, 1e-8),
        _check("detminors", "det_zero_localization", loc, 1e-6),
    ]


def _random_sl2(rng: np.random.Generator) -> np.ndarray:
    while True:
        M = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        d = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        if abs(d) > 1e-3:
            return M / np.sqrt(d)


def suite_psl2(ctx: QContext, rng: np.random.Generator, n: int = 1000) -> list[CheckResult]:
    """Symmetric-square embedding: homomorphism property, eigenvalue shape,
    and the quadratic entry relation."""
    hom = rel = 0.0
    eig_ok = True
    for _ in range(n):
        N1, N2 = _random_sl2(rng), _random_sl2(rng)
        R1, R2 = mat3.rho(N1), mat3.rho(N2)
        R12 = mat3.rho(N1 @ N2)
        hom = max(hom, float(np.linalg.norm(R1 @ R2 - R12) / np.linalg.norm(R12)))
        rel = max(rel, mat3.psl2_relation_residual(R1))
        eig_ok = eig_ok and mat3.psl2_eigenvalue_check(R1)
    return [
        _check("psl2", "homomorphism", hom, 1e-10),
        _check("psl2", "entry_relation", rel, 1e-10),
        _check("psl2", "eigenvalue_shape", 0.0 if eig_ok else 1.0, 0.5),
    ]


SUITES = {
    "theta": suite_theta,
    "characters": suite_characters,
    "gauge": suite_gauge,
    "bmw": suite_bmw,
    "detminors": suite_detminors,
    "psl2": suite_psl2,
}


def run_suite(name: str, ctx: QContext, seed: int = 0) -> list[CheckResult]:
    """Run one named suite (or 'all'), with its own seeded generator."""
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(run_suite(key, ctx, seed))
        return out
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](ctx, np.random.default_rng(seed))
