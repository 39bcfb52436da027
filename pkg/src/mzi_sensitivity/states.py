"""Input-state families and their analytic moment bundles.

Every bound in :mod:`mzi_sensitivity.qfi` consumes a :class:`StateMoments`,
never the state itself.  For product inputs the bundle is assembled from two
single-mode bundles (:class:`ModeMoments`); the two-mode squeezed vacuum is
the one entangled family and gets its moments written out directly.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from . import pasvs
from .errors import DomainError


class Family(enum.Enum):
    TWIN_FOCK = "twin-fock"
    CS_FOCK = "cs-fock"
    CS_CSS = "cs-css"
    CS_SVS = "cs-svs"
    TWO_SVS = "two-svs"
    TMSVS = "tmsvs"
    CS_PASVS = "cs-pasvs"
    CS_PSSVS = "cs-pssvs"


class CssMode(enum.Enum):
    # large-|β| limit: Var(b†b) = ⟨b†b⟩ = |β|²
    ASYMPTOTIC = "asymptotic"
    EXACT = "exact"


@dataclass(frozen=True)
class InputStateSpec:
    """A two-mode input state; only the fields its family uses are read.

    Mode ``a`` carries the coherent state (``alpha``) or the first squeezed
    vacuum (``xi``); mode ``b`` carries the parity-definite state.
    """

    family: Family
    alpha: complex = 0j
    beta: complex = 0j
    xi: complex = 0j
    xi_prime: complex = 0j
    zeta: complex = 0j
    kappa: int = 0
    css_mode: CssMode = CssMode.ASYMPTOTIC


@dataclass(frozen=True)
class ModeMoments:
    """``⟨n⟩``, ``Var(n)`` and ``⟨c²⟩`` of a single mode ``c``."""

    n: float
    var: float
    sq: complex

    @property
    def n_sq(self) -> float:
        return self.var + self.n**2


@dataclass(frozen=True)
class StateMoments:
    n_a: float
    n_b: float
    var_a: float
    var_b: float
    a_sq: complex
    b_sq: complex
    cross_nn: float
    mean_N: float
    mean_N_sq: float
    separable: bool

    @property
    def theta_a(self) -> float:
        return cmath.phase(self.a_sq)

    @property
    def theta_b(self) -> float:
        return cmath.phase(self.b_sq)


def product_moments(a: ModeMoments, b: ModeMoments) -> StateMoments:
    mean_N = a.n + b.n
    return StateMoments(
        n_a=a.n,
        n_b=b.n,
        var_a=a.var,
        var_b=b.var,
        a_sq=complex(a.sq),
        b_sq=complex(b.sq),
        cross_nn=a.n * b.n,
        mean_N=mean_N,
        mean_N_sq=a.var + b.var + mean_N**2,
        separable=True,
    )


# -- single-mode building blocks -------------------------------------------


def coherent_mode(alpha: complex) -> ModeMoments:
    n = abs(alpha) ** 2
    return ModeMoments(n=n, var=n, sq=complex(alpha) ** 2)


def fock_mode(n: float) -> ModeMoments:
    """Fock state |n⟩.  Real ``n`` is accepted for curve evaluation."""
    return ModeMoments(n=float(n), var=0.0, sq=0j)


def svs_mode(xi: complex) -> ModeMoments:
    r = abs(xi)
    n = math.sinh(r) ** 2
    sq = -0.5 * math.sinh(2.0 * r) * cmath.exp(1j * cmath.phase(xi)) if r else 0j
    return ModeMoments(n=n, var=2.0 * n * (1.0 + n), sq=sq)


def css_mode(beta: complex, mode: CssMode = CssMode.ASYMPTOTIC) -> ModeMoments:
    """Even cat state (|β⟩ + |-β⟩)/norm.

    ``b²`` has the cat as an eigenvector with eigenvalue β², so ⟨b²⟩ = β² and
    ⟨b†²b²⟩ = |β|⁴ hold exactly; the photon-number moments follow with
    t = tanh|β|²:  ⟨n⟩ = |β|² t,  Var(n) = |β|⁴ (1 - t²) + |β|² t.
    """
    big_b = abs(beta) ** 2
    sq = complex(beta) ** 2
    if mode is CssMode.ASYMPTOTIC:
        return ModeMoments(n=big_b, var=big_b, sq=sq)
    t = math.tanh(big_b)
    n = big_b * t
    var = big_b**2 / math.cosh(big_b) ** 2 + n
    return ModeMoments(n=n, var=var, sq=sq)


def photon_op_mode(xi: float, op: pasvs.PhotonOp) -> ModeMoments:
    pm = pasvs.pasvs_moments(xi, op)
    return ModeMoments(n=pm.n_b, var=pm.var_b, sq=pm.b_sq)


def tmsvs_moments(zeta: complex) -> StateMoments:
    """Two-mode squeezed vacuum: each mode is thermal, photon numbers locked."""
    n = math.sinh(abs(zeta)) ** 2
    var = n * (1.0 + n)
    cross = var + n**2  # ⟨n_a n_b⟩ = ⟨n_a²⟩ since n_a = n_b
    return StateMoments(
        n_a=n,
        n_b=n,
        var_a=var,
        var_b=var,
        a_sq=0j,
        b_sq=0j,
        cross_nn=cross,
        mean_N=2.0 * n,
        mean_N_sq=4.0 * cross,
        separable=False,
    )


# -- validation and dispatch ------------------------------------------------


def validate(spec: InputStateSpec) -> InputStateSpec:
    """Return ``spec`` unchanged, or raise :class:`DomainError`."""
    k = spec.kappa
    if isinstance(k, bool) or int(k) != k:
        raise DomainError(f"kappa must be an integer, got {k!r}")
    if k < 0:
        raise DomainError(f"kappa must be non-negative, got {k}")
    for name in ("alpha", "beta", "xi", "xi_prime", "zeta"):
        v = complex(getattr(spec, name))
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise DomainError(f"{name} must be finite, got {v}")
    if spec.family in (Family.CS_PASVS, Family.CS_PSSVS):
        xi = complex(spec.xi)
        if xi.imag != 0.0:
            raise DomainError(
                f"photon-added/subtracted states need a real xi, got {xi}"
            )
        if k > pasvs.KAPPA_MAX:
            raise DomainError(f"kappa={k} exceeds {pasvs.KAPPA_MAX}")
        if (
            spec.family is Family.CS_PSSVS
            and k > 0
            and math.sinh(xi.real) ** 2 < pasvs.SUBTRACTION_FLOOR
        ):
            raise DomainError(
                f"cannot subtract {k} photon(s) from the vacuum (xi={xi.real})"
            )
    return spec


def _photon_op(spec: InputStateSpec) -> pasvs.PhotonOp:
    sign = pasvs.Sign.ADDED if spec.family is Family.CS_PASVS else pasvs.Sign.SUBTRACTED
    return pasvs.PhotonOp(sign, int(spec.kappa))


def mode_pair(spec: InputStateSpec) -> tuple[ModeMoments, ModeMoments]:
    """Single-mode moments of each arm for a product family."""
    f = spec.family
    if f is Family.TWIN_FOCK:
        return fock_mode(spec.kappa), fock_mode(spec.kappa)
    if f is Family.CS_FOCK:
        return coherent_mode(spec.alpha), fock_mode(spec.kappa)
    if f is Family.CS_CSS:
        return coherent_mode(spec.alpha), css_mode(spec.beta, spec.css_mode)
    if f is Family.CS_SVS:
        return coherent_mode(spec.alpha), svs_mode(spec.xi)
    if f is Family.TWO_SVS:
        return svs_mode(spec.xi), svs_mode(spec.xi_prime)
    if f in (Family.CS_PASVS, Family.CS_PSSVS):
        xi = complex(spec.xi).real
        return coherent_mode(spec.alpha), photon_op_mode(xi, _photon_op(spec))
    raise DomainError(f"{f.value} is not a product state")


def analytic_moments(spec: InputStateSpec) -> StateMoments:
    validate(spec)
    if spec.family is Family.TMSVS:
        return tmsvs_moments(spec.zeta)
    return product_moments(*mode_pair(spec))


def moments_at(
    family: Family,
    n_a: float,
    n_b: float | None = None,
    css: CssMode = CssMode.ASYMPTOTIC,
) -> StateMoments:
    """Moment bundle parameterized by mean photon numbers with real amplitudes.

    This is how the sensitivity table and the n_b sweeps are evaluated: each
    family is placed at the requested ``(n_a, n_b)`` with all phases zero.
    Families with locked photon numbers (twin Fock, two-mode squeezed vacuum)
    use ``n_a`` for both arms; so does the twin squeezed vacuum when ``n_b``
    is ``None``.
    """
    if n_a < 0 or (n_b is not None and n_b < 0):
        raise DomainError("mean photon numbers must be non-negative")
    if family is Family.TWIN_FOCK:
        return product_moments(fock_mode(n_a), fock_mode(n_a))
    if family is Family.TMSVS:
        return tmsvs_moments(math.asinh(math.sqrt(n_a)))
    if n_b is None:
        n_b = n_a
    if family is Family.TWO_SVS:
        return product_moments(
            svs_mode(math.asinh(math.sqrt(n_a))), svs_mode(math.asinh(math.sqrt(n_b)))
        )
    a = coherent_mode(math.sqrt(n_a))
    if family is Family.CS_FOCK:
        return product_moments(a, fock_mode(n_b))
    if family is Family.CS_CSS:
        if css is CssMode.ASYMPTOTIC:
            return product_moments(a, css_mode(math.sqrt(n_b), css))
        return product_moments(a, css_mode(_css_beta_for(n_b), css))
    if family is Family.CS_SVS:
        return product_moments(a, svs_mode(math.asinh(math.sqrt(n_b))))
    if family in (Family.CS_PASVS, Family.CS_PSSVS):
        raise DomainError(
            "photon-added/subtracted families are parameterized by (xi, kappa); "
            "use xi_for_photon_number to invert n_b"
        )
    raise DomainError(f"unsupported family {family}")


def _css_beta_for(n_b: float) -> float:
    from scipy.optimize import brentq

    if n_b == 0:
        return 0.0
    # |β|² tanh|β|² = n_b; the root lies in [√n_b, √(n_b + 1)]
    f = lambda b: b * b * math.tanh(b * b) - n_b
    return brentq(f, math.sqrt(n_b), math.sqrt(n_b + 1.0), xtol=1e-15, rtol=1e-15)


def xi_for_photon_number(n_b: float, op: pasvs.PhotonOp, xi_max: float = 12.0) -> float:
    """Real ξ > 0 at which the photon-added/subtracted state has mean ``n_b``."""
    from scipy.optimize import brentq

    lo = 1e-5 if op.sign is pasvs.Sign.SUBTRACTED and op.kappa > 0 else 0.0
    f = lambda x: pasvs.pasvs_moments(x, op).n_b - n_b
    f_lo, f_hi = f(lo), f(xi_max)
    if f_lo > 0 or f_hi < 0:
        raise DomainError(
            f"n_b={n_b} is outside the reachable range "
            f"[{f_lo + n_b:.6g}, {f_hi + n_b:.6g}] for kappa={op.kappa}"
        )
    if f_lo == 0:
        return lo
    return brentq(f, lo, xi_max, xtol=1e-15, rtol=1e-15)
