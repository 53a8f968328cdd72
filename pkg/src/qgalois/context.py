"""Shared evaluation context: the deformation parameter q and numeric policy.

Every numeric routine in the package is a pure function of its inputs and a
QContext.  The context fixes q with 0 < |q| < 1, the principal branch of
tau (q = exp(-2*pi*i*tau)), and the truncation / spiral-membership
tolerances.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class QContext:
    """Deformation parameter and numeric policy.

    q          : complex with 0 < |q| < 1.
    eps_trunc  : tail bound at which series/products are truncated.
    eps_spiral : relative tolerance for q^Z spiral membership verdicts.
    n_max      : hard cap on series/product terms.
    """

    q: complex
    eps_trunc: float = 1e-12
    eps_spiral: float = 1e-9
    n_max: int = 10_000

    def __post_init__(self):
        if not 0.0 < abs(self.q) < 1.0:
            raise DomainError(f"need 0 < |q| < 1, got |q| = {abs(self.q)}")
        if self.eps_trunc <= 0 or self.eps_spiral <= 0:
            raise DomainError("tolerances must be positive")
        if self.n_max <= 0:
            raise DomainError("n_max must be positive")

    @property
    def log_q(self) -> complex:
        """Principal logarithm of q."""
        return cmath.log(self.q)

    @property
    def tau(self) -> complex:
        """tau with q = exp(-2*pi*i*tau), principal branch."""
        return self.log_q / (-2j * cmath.pi)

    def qpow(self, y: complex) -> complex:
        """q**y along the fixed branch: exp(y * log q)."""
        return cmath.exp(y * self.log_q)


@dataclass(frozen=True)
class TruncationReport:
    """How a truncated series/product evaluation went."""

    terms_used: int
    tail_bound: float
    converged: bool
