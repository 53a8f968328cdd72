"""Birkhoff and twisted connection matrices: cross-method agreement,
ellipticity, determinant/minor closed forms, and the logarithmic limits."""

import cmath

import numpy as np
import pytest

from qgalois import (
    HyperParams,
    QContext,
    SpiralCollisionError,
    birkhoff_closed_form,
    birkhoff_numeric,
    connection_eval,
    connection_logarithmic,
    core_numeric,
    det_formula,
    minor2,
    minor_formula,
    pochhammer_coefficient,
    qpoch_inf_product,
    theta,
    theta_d1,
    twist_factor,
    twisted_birkhoff,
    g_endomorphism,
)


@pytest.fixture
def p(ctx):
    return HyperParams.from_exponents(ctx, (0.13, 0.37, 0.71), (0.29, 0.58))


def _annulus(rng, ctx, n):
    radii = abs(ctx.q) ** rng.uniform(0.6, 0.9, n)
    angles = rng.uniform(0.1, 6.1, n)
    return [complex(r * cmath.exp(1j * t)) for r, t in zip(radii, angles)]


def test_pochhammer_coefficients_nonzero(ctx, p):
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            assert abs(pochhammer_coefficient(p, i, j, ctx)) > 1e-12


def test_cross_method_agreement(ctx, p, rng):
    for z in _annulus(rng, ctx, 6):
        ev = connection_eval(p, z, ctx, "both")
        assert ev.residual_cross < 1e-8


def test_birkhoff_is_elliptic(ctx, p, rng):
    for z in _annulus(rng, ctx, 4):
        P = birkhoff_closed_form(p, z, ctx)
        Pq = birkhoff_closed_form(p, ctx.q * z, ctx)
        assert np.max(np.abs(P - Pq)) < 1e-10 * np.max(np.abs(P))


def test_twisted_shift_cocycle(ctx, p, rng):
    # twisting trades ellipticity for a global weight cocycle: the row factor
    # a_i, the theta-core factor b_j/(q a_i), and the column factor 1/b_j
    # multiply to 1/q for every entry
    for z in _annulus(rng, ctx, 3):
        B = twisted_birkhoff(p, z, ctx)
        Bq = twisted_birkhoff(p, ctx.q * z, ctx)
        assert np.max(np.abs(Bq - B / ctx.q)) < 1e-9 * np.max(np.abs(B))


def test_twist_factor_identity_on_identity(ctx):
    assert np.allclose(twist_factor(np.eye(3), 0.7 + 0.2j, "zero", ctx), np.eye(3))


def test_determinant_closed_form(ctx, p, rng):
    for z in _annulus(rng, ctx, 5):
        B = twisted_birkhoff(p, z, ctx)
        f = det_formula(p, z, ctx)
        assert abs(np.linalg.det(B) - f) < 1e-8 * abs(f)


def test_determinant_zero_localization(ctx, p):
    z0 = p.b2 * p.b3 / (ctx.q ** 2 * p.a[0] * p.a[1] * p.a[2])
    near = abs(det_formula(p, z0 * (1 + 1e-9), ctx))
    far = abs(det_formula(p, z0 * 1.3, ctx))
    assert near < 1e-6 * far


def test_all_nine_minor_closed_forms(ctx, p, rng):
    for z in _annulus(rng, ctx, 3):
        B = twisted_birkhoff(p, z, ctx)
        for rows in ((1, 2), (1, 3), (2, 3)):
            for cols in ((1, 2), (1, 3), (2, 3)):
                m = minor2(B, rows, cols)
                f = minor_formula(p, rows, cols, z, ctx)
                assert abs(m - f) < 1e-8 * abs(f)


def test_genericity_guard(ctx):
    bad = HyperParams(a=(ctx.qpow(0.3), ctx.qpow(1.3), ctx.qpow(0.7)), b2=ctx.qpow(0.2), b3=ctx.qpow(0.5))
    with pytest.raises(SpiralCollisionError):
        twisted_birkhoff(bad, 0.7 + 0.1j, ctx)


def test_log_case_merged_b_column_display(ctx):
    # b = (q,q,q): first column of the twisted matrix keeps the generic shape
    # (1/z)^(-alpha_i) p_i1 theta(a_i z)/theta(z)
    pl = HyperParams(a=(ctx.qpow(0.13), ctx.qpow(0.37), ctx.qpow(0.71)), b2=ctx.q, b3=ctx.q)
    z = 0.8 * cmath.exp(1.1j)
    B = connection_logarithmic(pl, z, ctx)
    for i in (1, 2, 3):
        expect = (
            pochhammer_coefficient(pl, i, 1, ctx)
            * theta(pl.a[i - 1] * z, ctx)
            / theta(z, ctx)
            / g_endomorphism(1.0 / z, pl.a[i - 1], ctx)
        )
        assert abs(B[i - 1, 0] - expect) < 1e-9 * abs(expect)


def test_log_case_merged_b_elliptic_core(ctx):
    pl = HyperParams(a=(ctx.qpow(0.13), ctx.qpow(0.37), ctx.qpow(0.71)), b2=ctx.q, b3=ctx.q)
    z = 0.8 * cmath.exp(2.0j)
    P = birkhoff_numeric(pl, z, ctx)
    Pq = birkhoff_numeric(pl, ctx.q * z, ctx)
    assert np.max(np.abs(P - Pq)) < 1e-6 * np.max(np.abs(P))


def test_doubly_log_core_entries(ctx):
    # a = (a,a,a), b = (q,q,q): the (3,1) core entry is
    # theta(a)^2/(q;q)^6 * theta(a z)/theta(z), and at z = 1/a the (3,2) entry
    # reduces to the theta-derivative term with the same constant
    a = ctx.qpow(0.3)
    pl = HyperParams(a=(a, a, a), b2=ctx.q, b3=ctx.q)
    qq = qpoch_inf_product([ctx.q], ctx)
    c = theta(a, ctx) ** 2 / qq ** 6
    z = 2.5 * cmath.exp(0.8j)
    core = core_numeric(pl, z, ctx)
    pred = c * theta(a * z, ctx) / theta(z, ctx)
    assert abs(core[2, 0] - pred) < 1e-5 * abs(pred)
    zq = 1.0 / a
    coreq = core_numeric(pl, zq, ctx)
    assert abs(coreq[2, 0]) < 1e-8
    pred32 = c * theta_d1(1.0, ctx) / theta(zq, ctx)
    assert abs(coreq[2, 1] - pred32) < 1e-5 * abs(pred32)


def test_doubly_log_untwisted_elliptic(ctx):
    a = ctx.qpow(0.3)
    pl = HyperParams(a=(a, a, a), b2=ctx.q, b3=ctx.q)
    z = 0.8 * cmath.exp(2.4j)
    P = birkhoff_numeric(pl, z, ctx)
    Pq = birkhoff_numeric(pl, ctx.q * z, ctx)
    assert np.max(np.abs(P - Pq)) < 1e-6 * np.max(np.abs(P))


def test_connection_eval_single_method(ctx, p):
    ev = connection_eval(p, 0.75 + 0.2j, ctx, "closed_form")
    assert ev.residual_cross is None
    assert ev.P.shape == (3, 3) and ev.P_twisted.shape == (3, 3)
