"""Truncated two-mode Fock-space oracle.

States are stored as an amplitude matrix ``psi[n_a, n_b]`` and operators act
by index shifts, never as materialized matrices.  Nothing here reuses the
closed-form moments of :mod:`mzi_sensitivity.states`: amplitudes come from
the textbook number-basis expansions, moments from direct sums, and the QFI
elements from the variance/covariance definitions with the rotated generator
``M = J_z cos τ + (J_y cos ϑ + J_x sin ϑ) sin τ``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationError
from .qfi import BeamSplitterConfig, QfiMatrix
from .states import Family, InputStateSpec, StateMoments, validate

DEFAULT_TOL = 1e-10
CUTOFF_TARGET = 1e-12
CUTOFF_CAP = 256
SEPARABLE_SV_TOL = 1e-10
_MAX_GRID = 8192


@dataclass(frozen=True)
class FockStateVector:
    cutoff: int
    amplitudes: np.ndarray  # flat, row-major over (n_a, n_b)
    tail_mass: float

    @property
    def matrix(self) -> np.ndarray:
        c = self.cutoff + 1
        return self.amplitudes.reshape(c, c)


@dataclass(frozen=True)
class TailReport:
    cutoff_used: int
    tail_mass: float
    highest_occupied_level_mass: float
    tolerance: float = DEFAULT_TOL

    @property
    def flagged(self) -> bool:
        return self.tail_mass >= self.tolerance


# -- single-mode number-basis vectors on an open-ended grid ------------------


def _coherent(alpha: complex, size: int) -> np.ndarray:
    v = np.zeros(size, dtype=complex)
    v[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, size):
        v[n] = v[n - 1] * alpha / math.sqrt(n)
    return v


def _fock(k: int, size: int) -> np.ndarray:
    v = np.zeros(size, dtype=complex)
    v[k] = 1.0
    return v


def _squeezed(xi: complex, size: int) -> np.ndarray:
    r = abs(xi)
    ratio = -cmath.exp(1j * cmath.phase(xi)) * math.tanh(r)
    v = np.zeros(size, dtype=complex)
    v[0] = 1.0 / math.sqrt(math.cosh(r))
    for n in range(2, size, 2):
        v[n] = v[n - 2] * ratio * math.sqrt((n - 1) / n)
    return v


def _cat(beta: complex, size: int) -> np.ndarray:
    return _coherent(beta, size) + _coherent(-beta, size)


def _raise(v: np.ndarray, k: int) -> np.ndarray:
    """b†ᵏ v, dropping whatever leaves the grid."""
    n = np.arange(len(v))
    for _ in range(k):
        out = np.zeros_like(v)
        out[1:] = np.sqrt(n[1:]) * v[:-1]
        v = out
    return v


def _lower(v: np.ndarray, k: int) -> np.ndarray:
    n = np.arange(len(v))
    for _ in range(k):
        out = np.zeros_like(v)
        out[:-1] = np.sqrt(n[1:]) * v[1:]
        v = out
    return v


def _mode_vector(spec: InputStateSpec, mode: str, size: int) -> np.ndarray:
    f = spec.family
    if mode == "a":
        if f is Family.TWIN_FOCK:
            return _fock(spec.kappa, size)
        if f is Family.TWO_SVS:
            return _squeezed(spec.xi, size)
        return _coherent(spec.alpha, size)
    if f in (Family.TWIN_FOCK, Family.CS_FOCK):
        return _fock(spec.kappa, size)
    if f is Family.CS_CSS:
        return _cat(spec.beta, size)
    if f is Family.CS_SVS:
        return _squeezed(spec.xi, size)
    if f is Family.TWO_SVS:
        return _squeezed(spec.xi_prime, size)
    if f is Family.CS_PASVS:
        return _raise(_squeezed(spec.xi, size), spec.kappa)
    if f is Family.CS_PSSVS:
        return _lower(_squeezed(spec.xi, size + spec.kappa), spec.kappa)[:size]
    raise DomainError(f"no single-mode vector for {f.value}")


def _tmsvs_diagonal(zeta: complex, size: int) -> np.ndarray:
    r = abs(zeta)
    ratio = -cmath.exp(1j * cmath.phase(zeta)) * math.tanh(r)
    d = np.zeros(size, dtype=complex)
    d[0] = 1.0 / math.cosh(r)
    for n in range(1, size):
        d[n] = d[n - 1] * ratio
    return d


def _level_probabilities(spec: InputStateSpec, min_size: int):
    """Normalized level distributions, one per independent factor.

    The grid is doubled until the last quarter carries negligible weight, so
    the normalization (and hence the tail estimate) is effectively exact.
    """
    size = max(64, 2 * min_size)
    while True:
        if spec.family is Family.TMSVS:
            vecs = [_tmsvs_diagonal(spec.zeta, size)]
        else:
            vecs = [_mode_vector(spec, "a", size), _mode_vector(spec, "b", size)]
        probs = [np.abs(v) ** 2 for v in vecs]
        settled = all(p[-size // 4:].sum() <= 1e-30 * p.sum() for p in probs)
        if settled or size >= _MAX_GRID:
            return vecs, [p / p.sum() for p in probs]
        size *= 2


def _tail(probs: list[np.ndarray], cutoff: int) -> float:
    tail = 0.0
    for p in probs:
        t = float(p[cutoff + 1:].sum())
        # 1 - Π(1 - t_i) without cancellation
        tail = tail + t - tail * t
    return tail


def _weighted_tail(probs: list[np.ndarray], cutoff: int) -> float:
    """Largest relative share of ``⟨(n+1)²⟩`` discarded in any factor."""
    worst = 0.0
    for p in probs:
        w = (np.arange(len(p)) + 1.0) ** 2 * p
        worst = max(worst, float(w[cutoff + 1:].sum() / w.sum()))
    return worst


def choose_cutoff(
    spec: InputStateSpec, target: float = CUTOFF_TARGET, cap: int = CUTOFF_CAP
) -> int:
    """Smallest per-mode cutoff that discards less than ``target``.

    Both the probability and the share of ``⟨(n+1)²⟩`` beyond the cutoff must
    be below ``target``, since second moments weight the tail by ``n²``.
    """
    validate(spec)
    _, probs = _level_probabilities(spec, cap + 1)
    for c in range(4, cap + 1):
        if _tail(probs, c) < target and _weighted_tail(probs, c) < target:
            return c
    raise TruncationError(
        f"no cutoff <= {cap} reaches tail mass {target:g} for {spec.family.value}",
        tail_mass=_tail(probs, cap),
        suggested_cutoff=None,
    )


def build_fock_state(
    spec: InputStateSpec,
    cutoff: int | None = None,
    tol: float = DEFAULT_TOL,
    strict: bool = True,
) -> FockStateVector:
    """Truncated, renormalized amplitude array for ``spec``.

    ``cutoff=None`` picks :func:`choose_cutoff`.  With ``strict=False`` a
    state whose tail exceeds ``tol`` is returned anyway (for diagnostics).
    """
    validate(spec)
    if cutoff is None:
        cutoff = choose_cutoff(spec)
    if cutoff < 4:
        raise DomainError(f"cutoff must be at least 4, got {cutoff}")
    vecs, probs = _level_probabilities(spec, cutoff + 1)
    tail = _tail(probs, cutoff)
    if strict and tail >= tol:
        try:
            better = choose_cutoff(spec, target=min(tol, CUTOFF_TARGET))
        except TruncationError:
            better = None
        hint = f"; try cutoff {better}" if better else ""
        raise TruncationError(
            f"cutoff {cutoff} leaves tail mass {tail:.3g} >= {tol:g}{hint}",
            tail_mass=tail,
            suggested_cutoff=better,
        )
    k = cutoff + 1
    if spec.family is Family.TMSVS:
        psi = np.diag(vecs[0][:k])
    else:
        psi = np.outer(vecs[0][:k], vecs[1][:k])
    psi = psi / np.linalg.norm(psi)
    return FockStateVector(cutoff=cutoff, amplitudes=psi.ravel(), tail_mass=tail)


def truncation_diagnostics(state: FockStateVector, tol: float = DEFAULT_TOL) -> TailReport:
    p = np.abs(state.matrix) ** 2
    edge = float(p[-1, :].sum() + p[:, -1].sum() - p[-1, -1])
    return TailReport(
        cutoff_used=state.cutoff,
        tail_mass=state.tail_mass,
        highest_occupied_level_mass=edge,
        tolerance=tol,
    )


# -- expectation values -----------------------------------------------------


def _levels(d: int) -> np.ndarray:
    return np.arange(d, dtype=float)


def numeric_moments(state: FockStateVector) -> StateMoments:
    psi = state.matrix
    d = psi.shape[0]
    n = _levels(d)[:, None]
    m = _levels(d)[None, :]
    p = np.abs(psi) ** 2
    n_a = float((n * p).sum())
    n_b = float((m * p).sum())
    var_a = float((n**2 * p).sum()) - n_a**2
    var_b = float((m**2 * p).sum()) - n_b**2
    up = np.sqrt((n[:-2] + 1) * (n[:-2] + 2))
    a_sq = complex((np.conj(psi[:-2, :]) * up * psi[2:, :]).sum())
    vp = np.sqrt((m[:, :-2] + 1) * (m[:, :-2] + 2))
    b_sq = complex((np.conj(psi[:, :-2]) * vp * psi[:, 2:]).sum())
    cross = float((n * m * p).sum())
    mean_N = n_a + n_b
    mean_N_sq = float(((n + m) ** 2 * p).sum())
    sv = np.linalg.svd(psi, compute_uv=False)
    separable = bool(len(sv) < 2 or sv[1] < SEPARABLE_SV_TOL)
    return StateMoments(
        n_a=n_a,
        n_b=n_b,
        var_a=var_a,
        var_b=var_b,
        a_sq=a_sq,
        b_sq=b_sq,
        cross_nn=cross,
        mean_N=mean_N,
        mean_N_sq=mean_N_sq,
        separable=separable,
    )


def _padded(state: FockStateVector) -> np.ndarray:
    psi = state.matrix
    d = psi.shape[0]
    out = np.zeros((d + 1, d + 1), dtype=complex)
    out[:d, :d] = psi
    return out


def _spin_actions(psi: np.ndarray) -> dict[str, np.ndarray]:
    """J_0, J_x, J_y, J_z applied to a padded amplitude array.

    The padding row/column absorbs the one-level spill of a†b and ab†, so
    the actions are exact for the truncated state.
    """
    d = psi.shape[0]
    n = _levels(d)[:, None]
    m = _levels(d)[None, :]
    adag_b = np.zeros_like(psi)
    adag_b[1:, :-1] = np.sqrt(n[1:] * (m[:, :-1] + 1)) * psi[:-1, 1:]
    a_bdag = np.zeros_like(psi)
    a_bdag[:-1, 1:] = np.sqrt((n[:-1] + 1) * m[:, 1:]) * psi[1:, :-1]
    return {
        "J0": 0.5 * (n + m) * psi,
        "Jx": 0.5 * (adag_b + a_bdag),
        "Jy": -0.5j * (adag_b - a_bdag),
        "Jz": 0.5 * (n - m) * psi,
    }


def _inner(u: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.vdot(u, v))


def spin_expectations(state: FockStateVector) -> dict[str, float]:
    psi = _padded(state)
    acts = _spin_actions(psi)
    return {k: _inner(psi, v).real for k, v in acts.items()}


def rotated_generator(psi: np.ndarray, bs: BeamSplitterConfig) -> np.ndarray:
    acts = _spin_actions(psi)
    transverse = math.cos(bs.theta) * acts["Jy"] + math.sin(bs.theta) * acts["Jx"]
    return math.cos(bs.tau) * acts["Jz"] + math.sin(bs.tau) * transverse


def qfi_matrix_numeric(state: FockStateVector, bs: BeamSplitterConfig) -> QfiMatrix:
    psi = _padded(state)
    j0 = _spin_actions(psi)["J0"]
    mv = rotated_generator(psi, bs)
    e0 = _inner(psi, j0).real
    em = _inner(psi, mv).real
    return QfiMatrix(
        f_ss=4.0 * (_inner(j0, j0).real - e0**2),
        f_sd=4.0 * (_inner(j0, mv).real - e0 * em),
        f_dd=4.0 * (_inner(mv, mv).real - em**2),
    )
