"""Photon-added and photon-subtracted squeezed vacuum states.

The state ``b†^κ|ξ⟩`` (added) or ``b^κ|ξ⟩`` (subtracted) is normalized by
``N(ξ, κ) = ⟨ξ|b^κ b†^κ|ξ⟩`` (resp. ``⟨ξ|b†^κ b^κ|ξ⟩``).  Every moment of the
renormalized state is a ratio of these normalizations, except ``⟨b²⟩`` which
has its own finite sum.  Only real squeezing parameters are supported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre

from .errors import DomainError

KAPPA_MAX = 30
# below this sinh²ξ the subtracted state is numerically 0/0
SUBTRACTION_FLOOR = 1e-12


class Sign(enum.Enum):
    ADDED = "added"
    SUBTRACTED = "subtracted"


@dataclass(frozen=True)
class PhotonOp:
    """``kappa`` photons added to or subtracted from a squeezed vacuum."""

    sign: Sign
    kappa: int

    def __post_init__(self):
        if isinstance(self.kappa, bool) or int(self.kappa) != self.kappa:
            raise DomainError(f"kappa must be an integer, got {self.kappa!r}")
        if self.kappa < 0:
            raise DomainError(f"kappa must be non-negative, got {self.kappa}")
        if self.kappa > KAPPA_MAX:
            raise OverflowError(
                f"kappa={self.kappa} exceeds the finite-sum limit {KAPPA_MAX}"
            )
        object.__setattr__(self, "kappa", int(self.kappa))


@dataclass(frozen=True)
class PasvsMoments:
    norm: float
    n_b: float
    n_b_sq: float
    b_sq: complex

    @property
    def var_b(self) -> float:
        return self.n_b_sq - self.n_b**2


def _check(xi, op: PhotonOp) -> float:
    if isinstance(xi, complex):
        if xi.imag != 0.0:
            raise DomainError(f"squeezing parameter must be real, got {xi}")
        xi = xi.real
    xi = float(xi)
    if not math.isfinite(xi):
        raise DomainError(f"squeezing parameter must be finite, got {xi}")
    if (
        op.sign is Sign.SUBTRACTED
        and op.kappa > 0
        and math.sinh(xi) ** 2 < SUBTRACTION_FLOOR
    ):
        raise DomainError(
            "cannot subtract photons from (near-)vacuum: "
            f"xi={xi}, kappa={op.kappa}"
        )
    return xi


def _xy(xi: float, sign: Sign) -> tuple[float, float]:
    x = math.cosh(xi) ** 2 if sign is Sign.ADDED else math.sinh(xi) ** 2
    y = 0.25 * math.sinh(2.0 * xi)
    return x, y


def _log_pow(base: float, exponent: int) -> float:
    """log(|base|**exponent) with 0**0 == 1 and log(0) == -inf."""
    if exponent == 0:
        return 0.0
    if base == 0.0:
        return -math.inf
    return exponent * math.log(abs(base))


def _norm(xi: float, sign: Sign, kappa: int) -> float:
    x, y = _xy(xi, sign)
    lk = math.lgamma(kappa + 1)
    logs = []
    for l in range(kappa // 2 + 1):
        coeff = 2 * lk - 2 * math.lgamma(l + 1) - math.lgamma(kappa - 2 * l + 1)
        # x^κ (y/x)^{2l} written as y^{2l} x^{κ-2l}, so x = 0 is harmless
        logs.append(coeff + _log_pow(y, 2 * l) + _log_pow(x, kappa - 2 * l))
    logs = np.array(logs)
    top = logs.max()
    if top == -math.inf:
        return 0.0
    return math.exp(top + math.log(np.exp(logs - top).sum()))


def normalization_sum(xi: float, op: PhotonOp) -> float:
    """Normalization from the finite double-factorial sum."""
    xi = _check(xi, op)
    return _norm(xi, op.sign, op.kappa)


def normalization_legendre(xi: float, op: PhotonOp) -> float:
    """Normalization from the Legendre-polynomial closed form.

    Added: ``κ! coshᵏξ P_κ(cosh ξ)``.  Subtracted: ``κ! (-i sinh ξ)ᵏ P_κ(i sinh ξ)``,
    whose imaginary part cancels exactly.
    """
    xi = _check(xi, op)
    k = op.kappa
    basis = np.zeros(k + 1)
    basis[k] = 1.0
    if op.sign is Sign.ADDED:
        z = math.cosh(xi)
        value = math.factorial(k) * z**k * legendre.legval(z, basis)
        return float(value)
    z = 1j * math.sinh(xi)
    value = math.factorial(k) * (-z) ** k * legendre.legval(z, basis)
    return float(value.real)


def _b_sq(xi: float, sign: Sign, kappa: int, norm: float) -> float:
    x, y = _xy(xi, sign)
    lk = math.lgamma(kappa + 1)
    lk2 = math.lgamma(kappa + 3)
    total = 0.0
    for l in range(kappa // 2 + 1):
        coeff = lk + lk2 - math.lgamma(l + 1) - math.lgamma(l + 2)
        coeff -= math.lgamma(kappa - 2 * l + 1)
        # x^{κ+1} (-y/x)^{2l+1} == (-y)^{2l+1} x^{κ-2l}
        mag = coeff + _log_pow(y, 2 * l + 1) + _log_pow(x, kappa - 2 * l)
        if mag == -math.inf:
            continue
        total += math.copysign(math.exp(mag - math.log(norm)), -y)
    return total


def pasvs_moments(xi: float, op: PhotonOp) -> PasvsMoments:
    """Photon-number moments and ``⟨b²⟩`` of the renormalized state."""
    xi = _check(xi, op)
    k = op.kappa
    n0 = _norm(xi, op.sign, k)
    n1 = _norm(xi, op.sign, k + 1)
    n2 = _norm(xi, op.sign, k + 2)
    if op.sign is Sign.ADDED:
        n_b = (n1 - n0) / n0
        n_b_sq = (n2 - 3.0 * n1 + n0) / n0
    else:
        n_b = n1 / n0
        n_b_sq = (n2 + n1) / n0
    b_sq = _b_sq(xi, op.sign, k, n0)
    return PasvsMoments(norm=n0, n_b=n_b, n_b_sq=n_b_sq, b_sq=complex(b_sq, 0.0))
