"""QFI matrix, Cramér-Rao bounds and beam-splitter optimization.

Two phases are imprinted by the interferometer: the sum phase (nuisance) and
the difference phase (target).  With the first beam splitter parameterized by
the splitting angle ``tau`` and phase ``theta``, the difference-phase variance
obeys

* two-parameter bound (sum phase unknown):  ``F_ss / (υ (F_ss F_dd - F_sd²))``
* single-parameter bound (sum phase known): ``1 / (υ F_dd)``

For product inputs with one parity-definite arm, the QFI matrix depends on
the state only through a :class:`~mzi_sensitivity.states.StateMoments`
bundle, so every function here is family-agnostic.  The two-mode squeezed
vacuum is entangled and handled by the ``tmsvs_*`` helpers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SeparabilityError, SingularFisherError
from .states import Family, StateMoments, moments_at

TIE_RTOL = 1e-9
# |⟨a²⟩||⟨b²⟩| below this means the phase term vanishes and ϑ is free
PAIR_ATOL = 1e-12


class Theory(enum.Enum):
    SINGLE_PARAM = "single"
    TWO_PARAM = "two"


class TauChoice(enum.Enum):
    BALANCED = "balanced"
    FULL_TRANSMISSION = "full-transmission"
    ANY = "any"

    @property
    def tau(self) -> float | None:
        return {"balanced": math.pi / 2, "full-transmission": 0.0}.get(self.value)


@dataclass(frozen=True)
class BeamSplitterConfig:
    tau: float
    theta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.tau <= math.pi:
            raise DomainError(f"tau must lie in [0, pi], got {self.tau}")

    @property
    def transmission(self) -> float:
        return math.cos(self.tau / 2.0) ** 2

    @classmethod
    def from_transmission(cls, t: float, theta: float = 0.0) -> "BeamSplitterConfig":
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"transmission must lie in [0, 1], got {t}")
        return cls(tau=2.0 * math.acos(math.sqrt(t)), theta=theta)


@dataclass(frozen=True)
class QfiMatrix:
    f_ss: float
    f_sd: float
    f_dd: float

    @property
    def det(self) -> float:
        return self.f_ss * self.f_dd - self.f_sd**2

    def as_array(self) -> np.ndarray:
        return np.array([[self.f_ss, self.f_sd], [self.f_sd, self.f_dd]])


@dataclass(frozen=True)
class ThetaChoice:
    """Optimal beam-splitter phase: a phase-matched angle, or ``Any``."""

    angle: float | None
    solutions: tuple[float, ...] = ()

    @property
    def is_any(self) -> bool:
        return self.angle is None


ANY_THETA = ThetaChoice(angle=None)


@dataclass(frozen=True)
class OptimalBsReport:
    theory: Theory
    tau_choice: TauChoice
    theta_choice: ThetaChoice
    max_effective_qfi: float
    bound_variance: float
    competitors: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class SensitivityLimits:
    snl: float
    hl: float
    hofmann: float


def wrap_angle(x: float) -> float:
    """Map ``x`` into (-π, π]."""
    y = math.remainder(x, 2.0 * math.pi)
    return math.pi if y == -math.pi else y


def _need_separable(m: StateMoments) -> None:
    if not m.separable:
        raise SeparabilityError(
            "factorized QFI formulas need a product input; use the tmsvs_* "
            "closed forms or the Fock oracle for entangled states"
        )


# -- moment combinations ----------------------------------------------------


def frak_f(m: StateMoments, theta: float) -> float:
    """Four times the variance of the transverse spin ``J_y cosϑ + J_x sinϑ``."""
    _need_separable(m)
    pair = np.exp(2j * theta) * np.conj(m.a_sq) * m.b_sq
    return 2.0 * m.cross_nn + m.n_a + m.n_b - 2.0 * pair.real


def phase_matched_angles(m: StateMoments) -> ThetaChoice:
    if abs(m.a_sq) * abs(m.b_sq) <= PAIR_ATOL:
        return ANY_THETA
    base = 0.5 * (m.theta_a - m.theta_b + math.pi)
    sols = sorted({wrap_angle(base), wrap_angle(base - math.pi)})
    # closest to zero; on a tie take the positive one
    best = min(sols, key=lambda t: (round(abs(t), 12), -t))
    return ThetaChoice(angle=best, solutions=tuple(sols))


def frak_f_max(m: StateMoments) -> tuple[float, ThetaChoice]:
    _need_separable(m)
    value = 2.0 * m.cross_nn + m.n_a + m.n_b + 2.0 * abs(m.a_sq) * abs(m.b_sq)
    return value, phase_matched_angles(m)


def frak_g(m: StateMoments) -> float:
    """Harmonic-mean-like combination ``4 Va Vb / (Va + Vb)``; 0 when both vanish."""
    _need_separable(m)
    total = m.var_a + m.var_b
    if total == 0.0:
        return 0.0
    return 4.0 * m.var_a * m.var_b / total


def four_var_jz(m: StateMoments) -> float:
    _need_separable(m)
    return m.var_a + m.var_b


def qfi_matrix(m: StateMoments, bs: BeamSplitterConfig) -> QfiMatrix:
    _need_separable(m)
    c, s = math.cos(bs.tau), math.sin(bs.tau)
    total = m.var_a + m.var_b
    return QfiMatrix(
        f_ss=total,
        f_sd=(m.var_a - m.var_b) * c,
        f_dd=total * c * c + frak_f(m, bs.theta) * s * s,
    )


# -- bounds -----------------------------------------------------------------


def _check_upsilon(upsilon: int) -> None:
    if int(upsilon) != upsilon or upsilon < 1:
        raise DomainError(f"upsilon must be a positive integer, got {upsilon}")


def bound_v2(q: QfiMatrix, upsilon: int = 1) -> float:
    """Two-parameter bound on the difference-phase variance.

    With ``F_ss = 0`` the total photon number is sharp, the sum phase carries
    no information, and the bound falls back to ``1 / (υ F_dd)``.
    """
    _check_upsilon(upsilon)
    if q.f_dd <= 0.0:
        raise SingularFisherError("F_dd = 0: difference phase not identifiable")
    if q.f_ss == 0.0:
        return 1.0 / (upsilon * q.f_dd)
    det = q.det
    if det <= 1e-12 * q.f_ss * q.f_dd:
        raise SingularFisherError(
            f"singular QFI matrix (det={det:.3g}): phases not jointly identifiable"
        )
    return q.f_ss / (upsilon * det)


def bound_v1(q: QfiMatrix, upsilon: int = 1) -> float:
    _check_upsilon(upsilon)
    if q.f_dd <= 0.0:
        raise SingularFisherError("F_dd = 0: difference phase not identifiable")
    return 1.0 / (upsilon * q.f_dd)


def optimize_bs(m: StateMoments, theory: Theory) -> OptimalBsReport:
    """Best (τ, ϑ) for a product input.

    After phase matching, the inverse bound is ``A cos²τ + B sin²τ`` with
    ``B`` the maximal transverse variance and ``A`` either ``𝔊`` (sum phase
    unknown) or ``4 Var(J_z)`` (sum phase known); the optimum sits at an
    endpoint of τ, or anywhere when ``A = B``.
    """
    _need_separable(m)
    a = frak_g(m) if theory is Theory.TWO_PARAM else four_var_jz(m)
    b, theta = frak_f_max(m)
    best = max(a, b)
    if best <= 0.0:
        raise SingularFisherError("no phase information for this input")
    if abs(a - b) <= TIE_RTOL * max(a, b, 1.0):
        tau_choice = TauChoice.ANY
    elif b > a:
        tau_choice = TauChoice.BALANCED
    else:
        tau_choice = TauChoice.FULL_TRANSMISSION
        theta = ANY_THETA
    return OptimalBsReport(
        theory=theory,
        tau_choice=tau_choice,
        theta_choice=theta,
        max_effective_qfi=best,
        bound_variance=1.0 / best,
        competitors={"tau0": a, "balanced": b},
    )


# -- two-mode squeezed vacuum ----------------------------------------------


def tmsvs_frak_f(m: StateMoments) -> float:
    """Transverse variance for the two-mode squeezed vacuum, any ϑ.

    ``⟨a†² b²⟩`` vanishes because the state only populates |n, n⟩, which
    leaves ``2⟨n_a n_b⟩ + ⟨N⟩ = 4(n² + n)``.
    """
    return 2.0 * m.cross_nn + m.mean_N


def tmsvs_qfi_matrix(m: StateMoments, bs: BeamSplitterConfig) -> QfiMatrix:
    """General (non-factorized) QFI elements, specialized to ``⟨a†²b²⟩ = 0``."""
    c, s = math.cos(bs.tau), math.sin(bs.tau)
    corr = 2.0 * (m.cross_nn - m.n_a * m.n_b)
    return QfiMatrix(
        f_ss=m.var_a + m.var_b + corr,
        f_sd=(m.var_a - m.var_b) * c,
        f_dd=(m.var_a + m.var_b - corr) * c * c + tmsvs_frak_f(m) * s * s,
    )


def tmsvs_optimal(m: StateMoments, theory: Theory) -> OptimalBsReport:
    # Var(J_z) = 0 and F_sd = 0, so both bounds are 1/(𝔉 sin²τ)
    f = tmsvs_frak_f(m)
    if f <= 0.0:
        raise SingularFisherError("no phase information for this input")
    return OptimalBsReport(
        theory=theory,
        tau_choice=TauChoice.BALANCED,
        theta_choice=ANY_THETA,
        max_effective_qfi=f,
        bound_variance=1.0 / f,
        competitors={"tau0": 0.0, "balanced": f},
    )


def optimal(m: StateMoments, theory: Theory) -> OptimalBsReport:
    """:func:`optimize_bs` for product inputs, :func:`tmsvs_optimal` otherwise."""
    return optimize_bs(m, theory) if m.separable else tmsvs_optimal(m, theory)


def qfi_matrix_any(m: StateMoments, bs: BeamSplitterConfig) -> QfiMatrix:
    return qfi_matrix(m, bs) if m.separable else tmsvs_qfi_matrix(m, bs)


# -- reference limits and figures of merit ----------------------------------


def sensitivity_limits(m: StateMoments) -> SensitivityLimits:
    if m.mean_N <= 0.0:
        raise DomainError("reference limits need a non-zero mean photon number")
    return SensitivityLimits(
        snl=1.0 / m.mean_N, hl=1.0 / m.mean_N**2, hofmann=1.0 / m.mean_N_sq
    )


def gain(variance: float, upsilon: int, mean_N: float, std_convention: bool = False) -> float:
    """Sensitivity gain in dB, ``-10 log10(V sqrt(υ⟨N⟩))``.

    ``std_convention=True`` uses the standard deviation ``sqrt(V)`` in place
    of ``V``.
    """
    if variance <= 0 or upsilon <= 0 or mean_N <= 0:
        raise DomainError("gain needs positive variance, upsilon and mean_N")
    v = math.sqrt(variance) if std_convention else variance
    return -10.0 * math.log10(v * math.sqrt(upsilon * mean_N))


# -- sensitivity table and the state hierarchy --------------------------------

TABLE1_FAMILIES = (
    Family.TWIN_FOCK,
    Family.CS_FOCK,
    Family.CS_CSS,
    Family.CS_SVS,
    Family.TWO_SVS,
    Family.TMSVS,
)


@dataclass(frozen=True)
class Table1Row:
    family: Family
    n_a: float
    n_b: float
    frak_g: float | None
    four_var_jz: float
    frak_f: float
    tau_opt: TauChoice
    theta_opt: ThetaChoice


def table1_row(family: Family, n_a: float, n_b: float) -> Table1Row:
    """One row of the sensitivity table at real amplitudes.

    Twin states (twin Fock, twin squeezed vacuum, two-mode squeezed vacuum)
    put ``n_a`` photons in both arms and ignore ``n_b``.
    """
    if family is Family.TWO_SVS:
        m = moments_at(family, n_a, n_a)
    else:
        m = moments_at(family, n_a, n_b)
    if m.separable:
        rep = optimize_bs(m, Theory.TWO_PARAM)
        f, _ = frak_f_max(m)
        return Table1Row(family, m.n_a, m.n_b, frak_g(m), four_var_jz(m), f,
                         rep.tau_choice, rep.theta_choice)
    corr = 2.0 * (m.cross_nn - m.n_a * m.n_b)
    rep = tmsvs_optimal(m, Theory.TWO_PARAM)
    return Table1Row(family, m.n_a, m.n_b, None, m.var_a + m.var_b - corr,
                     tmsvs_frak_f(m), rep.tau_choice, rep.theta_choice)


def table1(n_a: float, n_b: float) -> list[Table1Row]:
    return [table1_row(f, n_a, n_b) for f in TABLE1_FAMILIES]


HIERARCHY = (
    (Family.TWIN_FOCK, Family.CS_FOCK),
    (Family.CS_CSS,),
    (Family.CS_SVS,),
    (Family.TWO_SVS, Family.TMSVS),
)


@dataclass(frozen=True)
class HierarchyResult:
    n: float
    values: tuple[tuple[Family, float], ...]  # ascending
    holds: bool


def hierarchy_check(n: float, rtol: float = 1e-12) -> HierarchyResult:
    """Maximal transverse variance of each sensitivity-table family at ``n_a = n_b = n``.

    ``holds`` is True when the values follow the expected ordering: the
    members of each group in :data:`HIERARCHY` are equal and each group is
    strictly below the next.
    """
    if n <= 0:
        raise DomainError("n must be positive")
    value = {f: table1_row(f, n, n).frak_f for f in TABLE1_FAMILIES}
    ordered = tuple(sorted(value.items(), key=lambda kv: kv[1]))
    holds = True
    prev = -math.inf
    for group in HIERARCHY:
        vals = [value[f] for f in group]
        lo, hi = min(vals), max(vals)
        if hi - lo > rtol * max(abs(hi), 1.0):
            holds = False
        if lo - prev <= rtol * max(abs(lo), 1.0):
            holds = False
        prev = hi
    return HierarchyResult(n=n, values=ordered, holds=holds)


def single_param_crossover(moments_of_nb, lo: float, hi: float) -> float:
    """``n_b`` where ``4 Var(J_z)`` overtakes the maximal transverse variance.

    ``moments_of_nb`` maps ``n_b`` to a :class:`StateMoments`; the root is
    bracketed in ``[lo, hi]``.
    """
    from scipy.optimize import brentq

    def gap(nb):
        m = moments_of_nb(nb)
        return four_var_jz(m) - frak_f_max(m)[0]

    return brentq(gap, lo, hi, xtol=1e-13, rtol=1e-15)
