"""Scalar q-series primitives: Pochhammer symbols, theta, characters, the
q-logarithm, and the order-3 basic hypergeometric series."""

import cmath

import pytest

from qgalois import (
    DivergenceError,
    DomainError,
    PoleError,
    QContext,
    lq,
    lq_binom,
    phi3_2,
    qcharacter,
    qhyper_series,
    qpoch_inf_product,
    qpochhammer_finite,
    qpochhammer_infinite,
    theta,
    theta_d1,
    theta_d2,
    theta_triple_product,
)


def _points(rng, n=50):
    return [
        complex(r * cmath.exp(1j * t))
        for r, t in zip(rng.uniform(0.3, 2.5, n), rng.uniform(0.1, 6.1, n))
    ]


def test_pochhammer_empty_product(ctx):
    assert qpochhammer_finite(0.3 + 0.1j, ctx, 0) == 1.0


def test_pochhammer_infinite_matches_long_finite(ctx):
    a = 0.4 + 0.2j
    inf_val, rep = qpochhammer_infinite(a, ctx)
    assert rep.converged and rep.tail_bound < ctx.eps_trunc
    assert abs(inf_val - qpochhammer_finite(a, ctx, 80)) < 1e-12


def test_pochhammer_negative_n_rejected(ctx):
    with pytest.raises(DomainError):
        qpochhammer_finite(0.5, ctx, -1)


def test_theta_functional_equation(ctx, rng):
    for z in _points(rng):
        t = theta(z, ctx)
        assert abs(theta(ctx.q * z, ctx) + t / z) < 1e-12 * abs(t / z)


def test_theta_triple_product_agreement(ctx, rng):
    for z in _points(rng):
        t, tp = theta(z, ctx), theta_triple_product(z, ctx)
        assert abs(t - tp) < 1e-10 * abs(tp)


def test_theta_vanishes_on_spiral(ctx):
    for k in (-2, -1, 0, 1, 3):
        assert abs(theta(ctx.q ** k, ctx)) < 1e-12


def test_theta_zero_rejected(ctx):
    with pytest.raises(DomainError):
        theta(0.0, ctx)


def test_theta_derivatives_match_finite_differences(ctx):
    z, h = 0.63 + 0.27j, 1e-6
    d1 = (theta(z + h, ctx) - theta(z - h, ctx)) / (2 * h)
    d2 = (theta(z + h, ctx) - 2 * theta(z, ctx) + theta(z - h, ctx)) / h ** 2
    assert abs(theta_d1(z, ctx) - d1) < 1e-8
    assert abs(theta_d2(z, ctx) - d2) < 1e-4


def test_qcharacter_identity_for_lambda_one(ctx, rng):
    for z in _points(rng, 10):
        assert abs(qcharacter(1.0, z, ctx) - 1.0) < 1e-12


def test_qcharacter_laws(ctx, rng):
    lams = [ctx.qpow(0.35), 2.4 * cmath.exp(0.7j), 0.05j]
    for z in _points(rng, 15):
        for lam in lams:
            e = qcharacter(lam, z, ctx)
            assert abs(qcharacter(ctx.q * lam, z, ctx) - z * e) < 1e-10 * abs(z * e)
            assert abs(qcharacter(lam, ctx.q * z, ctx) - lam * e) < 1e-10 * abs(lam * e)


def test_qcharacter_pole_detected(ctx):
    lam = ctx.qpow(0.3)
    with pytest.raises(PoleError):
        qcharacter(lam, ctx.qpow(0.7), ctx)  # lam * z = q


def test_lq_shift_law(ctx, rng):
    for z in _points(rng, 20):
        assert abs(lq(ctx.q * z, ctx) - lq(z, ctx) - 1.0) < 1e-10


def test_lq_binom_basics(ctx):
    z = 0.7 + 0.4j
    ell = lq(z, ctx)
    assert lq_binom(z, ctx, 0) == 1.0
    assert abs(lq_binom(z, ctx, 1) - ell) < 1e-12
    assert abs(lq_binom(z, ctx, 2) - ell * (ell - 1) / 2) < 1e-12


def test_phi_reduces_to_geometric_series(ctx):
    # identical numerator and denominator tuples cancel term by term
    val, rep = phi3_2((ctx.q, 0.3, 0.4), (ctx.q, 0.3, 0.4), 0.35, ctx)
    assert rep.converged
    assert abs(val - 1.0 / (1.0 - 0.35)) < 1e-12


def test_phi_parameter_arity(ctx):
    with pytest.raises(DomainError):
        phi3_2((0.3, 0.4), (ctx.q, 0.3, 0.4), 0.2, ctx)


def test_qhyper_series_divergence_guard(ctx):
    with pytest.raises(DivergenceError):
        qhyper_series((0.3,), (0.4,), 1.2, ctx)


def test_qhyper_series_at_zero(ctx):
    val, rep = qhyper_series((0.3,), (0.4,), 0.0, ctx)
    assert val == 1.0 and rep.tail_bound == 0.0


def test_tighter_context_tightens_tail(ctx):
    loose = QContext(ctx.q, eps_trunc=1e-6)
    _, rep_l = qpochhammer_infinite(0.7, loose)
    _, rep_t = qpochhammer_infinite(0.7, ctx)
    assert rep_t.terms_used > rep_l.terms_used
    assert rep_t.tail_bound < rep_l.tail_bound


def test_qpoch_inf_product(ctx):
    vals = (0.3, 0.5 + 0.1j)
    prod = qpoch_inf_product(vals, ctx)
    expect = qpochhammer_infinite(vals[0], ctx)[0] * qpochhammer_infinite(vals[1], ctx)[0]
    assert abs(prod - expect) < 1e-14
