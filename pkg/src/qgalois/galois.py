"""Difference Galois group machinery: irreducibility, parameter normalization,
local-case taxonomy, density-theorem generators, the PGl2 obstruction residual,
and the main classifier.

The classifier is descriptor-level: the group is never computed as a variety.
The GL3 / extended-SL3 branch is a pure arithmetic condition on the parameter
spirals; the generator matrices and the obstruction residual are numerical
corroboration, reported alongside.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .context import QContext
from .errors import (
    BasePointSingularError,
    DomainError,
    InsufficientSamplesError,
    QGaloisError,
)
from .hypersystem import HyperParams, check_fuchsian_nonresonant
from .spiral import decompose, gamma1, gamma2, in_q_spiral
from . import connection

__all__ = [
    "IrreducibilityVerdict",
    "GaloisReport",
    "irreducibility",
    "normalize_parameters",
    "classify_case",
    "base_point",
    "omega_samples",
    "generators",
    "fit_relation_residual",
    "obstruction_samples",
    "pgl2_obstruction",
    "classify",
]

_RATIONAL_DEN_CAP = 10 ** 6
_RATIONAL_TOL = 1e-9


@dataclass(frozen=True)
class IrreducibilityVerdict:
    """Outcome of the six a_i/b_j spiral tests.

    witnesses lists (i, j, k, distance) for every ratio found on q^Z: the
    equation is reducible iff the list is nonempty.
    """

    irreducible: bool
    witnesses: tuple[tuple[int, int, int, float], ...]
    distances: tuple[tuple[int, int, float], ...]


@dataclass(frozen=True)
class GaloisReport:
    """Full classification report for one parameter set."""

    params: HyperParams
    normalized: HyperParams | None
    shifts: tuple[tuple[int, ...], tuple[int, ...]] | None
    q_real: bool
    irreducible: bool
    witnesses: tuple[tuple[int, int, int, float], ...]
    lie_case: str | None
    generators: tuple[tuple[str, np.ndarray], ...]
    obstruction_residual: float | None
    classification: str
    scalar_generators: tuple[complex, complex] | None
    scalar_resolution: str | None
    base_point: complex | None
    samples: tuple[complex, ...]
    notes: tuple[str, ...] = field(default=())


def irreducibility(p: HyperParams, ctx: QContext) -> IrreducibilityVerdict:
    """Reducibility happens exactly when some a_i/b_j lies on q^Z (b_1 = q
    included); returns the verdict with per-ratio spiral distances."""
    b = p.b(ctx)
    witnesses = []
    distances = []
    for i in range(1, 4):
        for j in range(1, 4):
            v = in_q_spiral(p.a[i - 1] / b[j - 1], ctx)
            distances.append((i, j, v.distance))
            if v.member:
                witnesses.append((i, j, v.k, v.distance))
    return IrreducibilityVerdict(
        irreducible=not witnesses,
        witnesses=tuple(witnesses),
        distances=tuple(distances),
    )


def _band_shift(omega: float, lo: float) -> int:
    """Integer k with omega - k in [lo, lo + 1); a 1e-12 guard absorbs the
    floating jitter of exactly-integer exponents."""
    return math.floor(omega - lo + 1e-12)


def _snap(values: list[complex], ctx: QContext) -> list[complex]:
    """Collapse values that agree to within spiral tolerance onto a common
    representative, so merged spirals become exact equalities."""
    out = list(values)
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            if abs(out[j] - out[i]) <= ctx.eps_spiral * abs(out[i]):
                out[j] = out[i]
    return out


def normalize_parameters(
    p: HyperParams, ctx: QContext
) -> tuple[HyperParams, tuple[tuple[int, ...], tuple[int, ...]]]:
    """Shift every parameter by an integer q-power into a canonical band.

    The a_i go to exponent band [0, 1) and the b_j to (0, 1], so the fixed
    first denominator parameter q is itself canonical and q-spiral b's land
    exactly on q (the representative the logarithmic constructions use).
    Shifting by q^Z does not change the Galois group; the returned shifts s
    satisfy new = old * q^s.  Parameters whose shifted values collide within
    spiral tolerance are snapped equal, removing pure-q^Z resonances.
    """
    def shifted(c: complex, half_open_low: bool) -> tuple[complex, int]:
        sp = decompose(c, ctx)
        if half_open_low:  # band [0, 1)
            k = _band_shift(sp.omega, 0.0)
        else:  # band (0, 1]
            k = math.ceil(sp.omega - 1e-12) - 1
        w = sp.omega - k
        if abs(sp.u - 1.0) < ctx.eps_spiral:
            return ctx.qpow(w), -k
        return sp.u * ctx.qpow(w), -k

    new_a, sh_a = zip(*(shifted(ai, True) for ai in p.a))
    new_b, sh_b = zip(*(shifted(bj, False) for bj in (p.b2, p.b3)))
    a = tuple(_snap(list(new_a), ctx))
    b2, b3 = _snap([complex(v) for v in new_b], ctx)
    # b's within tolerance of q itself are the logarithmic representative
    if abs(b2 - ctx.q) <= ctx.eps_spiral * abs(ctx.q):
        b2 = ctx.q
    if abs(b3 - ctx.q) <= ctx.eps_spiral * abs(ctx.q):
        b3 = ctx.q
    return HyperParams(a=a, b2=b2, b3=b3), (tuple(sh_a), tuple(sh_b))


def classify_case(p: HyperParams, ctx: QContext) -> str:
    """Local-case tag for normalized parameters.

    (i)   all a-ratios and b2, b3, b2/b3 off q^Z;
    (ii)  a-ratios off, b2 = b3 off q^Z;
    (iii) a-ratios off, b2 = b3 = q (up to q^Z);
    (iv)  a = (a,a,a) and b = (q,q,q).
    Unlisted multiplicity patterns are routed to the nearest handled analogue:
    triple a with generic b behaves like (iii), a double a-pair like (ii).
    """
    a_pairs = sum(
        1
        for i in range(3)
        for j in range(i + 1, 3)
        if in_q_spiral(p.a[i] / p.a[j], ctx).member
    )
    b2_on = in_q_spiral(p.b2, ctx).member
    b3_on = in_q_spiral(p.b3, ctx).member
    b_merged = in_q_spiral(p.b2 / p.b3, ctx).member
    if a_pairs == 0:
        if not b_merged and not b2_on and not b3_on:
            return "i"
        if b2_on and b3_on:
            return "iii"
        if b_merged:
            return "ii"
        return "i"  # one b on q^Z alone cannot happen for irreducible input
    if a_pairs == 3:
        if b2_on and b3_on:
            return "iv"
        return "iii"  # triple a, generic b: handled as the b-side case (iii)
    return "ii"  # one merged a-pair: handled as the merged-pair case (ii)


def _twisted_eval(p: HyperParams, case: str, z: complex, ctx: QContext) -> np.ndarray:
    if case in ("iii", "iv"):
        return connection.connection_logarithmic(p, z, ctx)
    return connection.twisted_birkhoff(p, z, ctx, "closed_form")


def _det_zero_anchor(p: HyperParams, ctx: QContext) -> complex:
    """The twisted determinant vanishes exactly on (b2 b3 / (q^2 a1 a2 a3)) q^Z."""
    a1, a2, a3 = p.a
    return p.b2 * p.b3 / (ctx.q ** 2 * a1 * a2 * a3)


def _spiral_clearance(z: complex, anchors: Sequence[complex], ctx: QContext) -> float:
    """Smallest relative distance from z to the discrete spirals anchor * q^Z."""
    return min(in_q_spiral(z / c, ctx).distance for c in anchors)


def _singular_anchors(p: HyperParams, ctx: QContext) -> list[complex]:
    # poles of the twisted matrix sit on q^Z (the theta(z) denominators);
    # zeros of its determinant on the anchor spiral
    return [1.0 + 0j, _det_zero_anchor(p, ctx)]


def base_point(p: HyperParams, ctx: QContext, n_scan: int = 64) -> complex:
    """Base point on |z| = |q|^(1/2) maximizing clearance from the pole
    spiral q^Z and the determinant-zero spiral."""
    anchors = _singular_anchors(p, ctx)
    r = abs(ctx.q) ** 0.5
    best, best_d = None, -1.0
    for k in range(n_scan):
        z = r * cmath.exp(2j * math.pi * (k + 0.5) / n_scan)
        d = _spiral_clearance(z, anchors, ctx)
        if d > best_d:
            best, best_d = z, d
    return best


def omega_samples(p: HyperParams, ctx: QContext, per_circle: int = 8) -> list[complex]:
    """Sample points for the connection component: per_circle points on each of
    the circles |z| = |q|^0.4 and |z| = |q|^0.6, angles chosen for clearance
    from the singular spirals."""
    anchors = _singular_anchors(p, ctx)
    out: list[complex] = []
    for expo in (0.4, 0.6):
        r = abs(ctx.q) ** expo
        ranked = sorted(
            (r * cmath.exp(2j * math.pi * (k + 0.37) / (4 * per_circle)) for k in range(4 * per_circle)),
            key=lambda z: -_spiral_clearance(z, anchors, ctx),
        )
        out.extend(ranked[:per_circle])
    return out


def _diag(values: Sequence[complex]) -> np.ndarray:
    return np.diag(np.asarray(values, dtype=complex))


def _local_unipotents(p: HyperParams, case: str, ctx: QContext) -> tuple[np.ndarray, np.ndarray]:
    """Unipotent parts U^(0), U^(infinity) of the local data, in the explicit
    forms the case displays use."""
    eye = np.eye(3, dtype=complex)
    u0 = eye
    ui = eye
    if case == "ii":
        u0 = np.array([[1, 0, 0], [0, 1, p.b2 / ctx.q], [0, 0, 1]], dtype=complex)
    elif case in ("iii", "iv"):
        u0 = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=complex)
    if case == "iv":
        a = p.a[0]
        ui = np.array([[1, a, 0], [0, 1, a], [0, 0, 1]], dtype=complex)
    return u0, ui


def generators(
    p: HyperParams,
    y0: complex,
    zs: Sequence[complex],
    ctx: QContext,
) -> list[tuple[str, np.ndarray]]:
    """Density-theorem generator matrices.

    1.a: the two semi-simple local generators at 0 (unit-circle and exponent
    projections of the b-parameters); 1.b: the local unipotent at 0; 2.a/2.b:
    the analogous matrices at infinity conjugated by the twisted connection
    matrix at the base point; 3.: connection-component samples
    inverse-twisted(y0) * twisted(z).  For the merged-b case (ii) only the
    local generators at 0 are produced (the connection data has no closed
    construction there and the classification does not need it).
    """
    case = classify_case(p, ctx)
    b = p.b(ctx)
    out: list[tuple[str, np.ndarray]] = [
        ("1.a", _diag([gamma2(bj, ctx) for bj in b])),
        ("1.a'", _diag([gamma1(bj, ctx) for bj in b])),
    ]
    u0, ui = _local_unipotents(p, case, ctx)
    out.append(("1.b", u0))
    if case == "ii":
        return out
    anchors = _singular_anchors(p, ctx)
    if _spiral_clearance(y0, anchors, ctx) < 10.0 * ctx.eps_spiral:
        raise BasePointSingularError(f"base point {y0} is on a singular spiral")
    P0 = _twisted_eval(p, case, y0, ctx)
    if abs(np.linalg.det(P0)) < 1e-10 * max(np.linalg.norm(P0), 1e-300) ** 3:
        raise BasePointSingularError(f"twisted matrix numerically singular at {y0}")

    def conj(M: np.ndarray) -> np.ndarray:
        return np.linalg.solve(P0, M @ P0)

    out.append(("2.a", conj(_diag([gamma2(ai, ctx) for ai in p.a]))))
    out.append(("2.a'", conj(_diag([gamma1(ai, ctx) for ai in p.a]))))
    out.append(("2.b", conj(ui)))
    for k, z in enumerate(zs):
        out.append((f"3.{k}", np.linalg.solve(P0, _twisted_eval(p, case, z, ctx))))
    return out


def fit_relation_residual(
    lhs: Sequence[complex], rhs: Sequence[complex]
) -> tuple[complex, float]:
    """Least-squares constant c for lhs ~ c * rhs, plus the normalized misfit
    max |lhs - c rhs| / max(|lhs|, |c rhs|)."""
    L = np.asarray(lhs, dtype=complex)
    R = np.asarray(rhs, dtype=complex)
    if L.shape != R.shape or L.ndim != 1:
        raise DomainError("lhs and rhs must be equal-length vectors")
    denom = float(np.vdot(R, R).real)
    c = complex(np.vdot(R, L)) / denom if denom > 0 else 0.0
    scale = max(float(np.max(np.abs(L))), float(np.max(np.abs(c * R))), 1e-300)
    return c, float(np.max(np.abs(L - c * R))) / scale


def obstruction_samples(p: HyperParams, ctx: QContext) -> list[complex]:
    """Sample set for the obstruction fit: the connection-component circle
    samples plus points adjacent to the spiral where the relation's left side
    vanishes (qa_1/b_2 q^Z for distinct b; 1/a_i q^Z in the merged cases)."""
    case = classify_case(p, ctx)
    zs = omega_samples(p, ctx)
    if case == "i":
        anchor = p.b2 / (ctx.q * p.a[0])
    else:
        anchor = 1.0 / p.a[0] if case == "iii" else 1.0 / p.a[0]
    sp = decompose(anchor, ctx)
    for offset in (1e-3, -1e-3):
        # land on the anchor spiral inside the working annulus, then nudge off
        w = sp.omega - math.floor(sp.omega - 0.35)
        z = sp.u * ctx.qpow(w) * (1.0 + offset)
        zs.append(z)
    return zs


def _obstruction_rows(
    p: HyperParams, case: str, zs: Sequence[complex], ctx: QContext
) -> tuple[list[complex], list[complex]]:
    """Per-sample (lhs, rhs) of the degree-2 entry relation a PSl2-conjugate
    twisted matrix would satisfy: entry2^2 = c * entry1 * entry3 along the
    relevant row (row 1 generically, row 3 in the doubly merged case)."""
    row = 2 if case == "iv" else 0
    lhs, rhs = [], []
    for z in zs:
        M = _twisted_eval(p, case, z, ctx)
        lhs.append(complex(M[row, 1] ** 2))
        rhs.append(complex(M[row, 0] * M[row, 2]))
    return lhs, rhs


def pgl2_obstruction(p: HyperParams, zs: Sequence[complex], ctx: QContext) -> float:
    """Misfit of the PSl2 entry relation over the samples.

    A residual well above zero certifies that the twisted matrix cannot be
    brought into (the normalizer of) the symmetric-square image of SL2 by
    constant and triangular twists, which forces the derived neutral component
    to be the full SL3.  A near-zero residual is inconclusive.
    """
    if len(zs) < 8:
        raise InsufficientSamplesError(f"need >= 8 samples, got {len(zs)}")
    case = classify_case(p, ctx)
    if case == "ii":
        raise DomainError("no twisted-matrix construction for the merged-b case")
    lhs, rhs = _obstruction_rows(p, case, zs, ctx)
    _, residual = fit_relation_residual(lhs, rhs)
    return residual


def _rational_part(x: float) -> Fraction | None:
    """x as a fraction with denominator <= the cap, if one matches to tolerance."""
    f = Fraction(x).limit_denominator(_RATIONAL_DEN_CAP)
    return f if abs(float(f) - x) <= _RATIONAL_TOL else None


def _scalar_data(p: HyperParams, ctx: QContext) -> tuple[tuple[complex, complex], str]:
    """The two scalar generators of the extended-SL3 branch and their
    resolved descriptor (finite mu_n extension when both phases are certified
    rational, else symbolic)."""
    beta2 = decompose(p.b2, ctx).omega
    beta3 = decompose(p.b3, ctx).omega
    _, vs = p.units(ctx)
    s1 = cmath.exp(2j * math.pi * (beta2 + beta3))
    s2 = vs[1] * vs[2]
    f1 = _rational_part((beta2 + beta3) % 1.0)
    f2 = _rational_part((cmath.phase(s2) / (2.0 * math.pi)) % 1.0)
    if f1 is None or f2 is None:
        return (s1, s2), "symbolic"
    n = math.lcm(f1.denominator, f2.denominator)
    if n == 1:
        return (s1, s2), "SL3"
    return (s1, s2), f"mu_{n} x SL3"


def classify(p: HyperParams, ctx: QContext) -> GaloisReport:
    """Full classification report.

    The GL3 / extended-SL3 decision is the arithmetic spiral test on
    a1 a2 a3/(b2 b3); everything else in the report (generators, obstruction
    residual) is corroborating numerical evidence.  Non-q-real or reducible
    input yields classification "undetermined" with a partial report.
    """
    notes: list[str] = []
    q_real = p.is_q_real(ctx)
    irr = irreducibility(p, ctx)
    if not irr.irreducible:
        return GaloisReport(
            params=p, normalized=None, shifts=None, q_real=q_real,
            irreducible=False, witnesses=irr.witnesses, lie_case=None,
            generators=(), obstruction_residual=None,
            classification="undetermined", scalar_generators=None,
            scalar_resolution=None, base_point=None, samples=(),
            notes=("reducible: a_i/b_j on q^Z", ),
        )
    pn, shifts = normalize_parameters(p, ctx)
    if any(k != 0 for k in shifts[0] + shifts[1]):
        notes.append("parameters shifted by integer q-powers before analysis")
    case = classify_case(pn, ctx)
    tag = case if not any(k != 0 for k in shifts[0] + shifts[1]) else f"shifted({case})"

    if not q_real:
        return GaloisReport(
            params=p, normalized=pn, shifts=shifts, q_real=False,
            irreducible=True, witnesses=(), lie_case=tag, generators=(),
            obstruction_residual=None, classification="undetermined",
            scalar_generators=None, scalar_resolution=None, base_point=None,
            samples=(), notes=tuple(notes + ["parameters are not q-real"]),
        )

    y0 = None
    gens: tuple[tuple[str, np.ndarray], ...] = ()
    zs: list[complex] = []
    residual: float | None = None
    if case != "ii":
        try:
            y0 = base_point(pn, ctx)
            zs = omega_samples(pn, ctx)
            gens = tuple(generators(pn, y0, zs, ctx))
            residual = pgl2_obstruction(pn, obstruction_samples(pn, ctx), ctx)
        except QGaloisError as exc:
            notes.append(f"connection data unavailable: {exc}")
    else:
        gens = tuple(generators(pn, 1.0, [], ctx))
        notes.append("merged-b case: local generators at 0 only")

    ratio = pn.a[0] * pn.a[1] * pn.a[2] / (pn.b2 * pn.b3)
    verdict = in_q_spiral(ratio, ctx)
    if not verdict.member:
        classification = "GL3"
        scalars, resolution = None, None
    else:
        classification = "SL3_extended"
        scalars, resolution = _scalar_data(pn, ctx)
    return GaloisReport(
        params=p, normalized=pn, shifts=shifts, q_real=True, irreducible=True,
        witnesses=(), lie_case=tag, generators=gens,
        obstruction_residual=residual, classification=classification,
        scalar_generators=scalars, scalar_resolution=resolution,
        base_point=y0, samples=tuple(zs), notes=tuple(notes),
    )
