"""Point evaluations and parameter sweeps shared by the CLI and the demos."""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import qfi
from .errors import DomainError
from .pasvs import PhotonOp, Sign
from .qfi import BeamSplitterConfig, Theory
from .states import (
    Family,
    InputStateSpec,
    StateMoments,
    analytic_moments,
    moments_at,
    xi_for_photon_number,
)

SWEEP_PARAMS = ("nb", "xi", "kappa")

THEORIES = {"two": (Theory.TWO_PARAM,), "single": (Theory.SINGLE_PARAM,),
            "both": (Theory.TWO_PARAM, Theory.SINGLE_PARAM)}


def sweep_columns(theories: tuple[Theory, ...]) -> list[str]:
    cols = ["sweep_value", "n_a", "n_b", "mean_N", "mean_N_sq",
            "frak_G", "four_var_Jz", "frak_F_max"]
    for t in theories:
        cols += [f"F_max_{t.value}", f"V_{t.value}", f"gain_{t.value}"]
    return cols + ["snl", "hl", "hofmann"]


def configured_bs(m: StateMoments, tau: float, theta: float | None) -> BeamSplitterConfig:
    """Beam splitter at ``tau``; ``theta=None`` means phase matched (0 if free)."""
    if theta is None:
        choice = qfi.phase_matched_angles(m) if m.separable else qfi.ANY_THETA
        theta = 0.0 if choice.is_any else choice.angle
    return BeamSplitterConfig(tau=tau, theta=theta)


def bound_at(m: StateMoments, theory: Theory, upsilon: int,
             tau: float | None = None, theta: float | None = None) -> float:
    """Variance bound at ``tau``, or at the optimal beam splitter when ``tau`` is None."""
    if tau is None:
        return qfi.optimal(m, theory).bound_variance / upsilon
    q = qfi.qfi_matrix_any(m, configured_bs(m, tau, theta))
    if theory is Theory.TWO_PARAM:
        return qfi.bound_v2(q, upsilon)
    return qfi.bound_v1(q, upsilon)


def evaluate_row(
    m: StateMoments,
    sweep_value: float,
    theories: tuple[Theory, ...],
    upsilon: int = 1,
    tau: float | None = None,
    theta: float | None = None,
    gain_alt: bool = False,
) -> dict[str, float]:
    if m.separable:
        g, fourvz = qfi.frak_g(m), qfi.four_var_jz(m)
        fmax = qfi.frak_f_max(m)[0]
    else:
        g = math.nan
        fourvz = m.var_a + m.var_b - 2.0 * (m.cross_nn - m.n_a * m.n_b)
        fmax = qfi.tmsvs_frak_f(m)
    row = {
        "sweep_value": float(sweep_value),
        "n_a": m.n_a,
        "n_b": m.n_b,
        "mean_N": m.mean_N,
        "mean_N_sq": m.mean_N_sq,
        "frak_G": g,
        "four_var_Jz": fourvz,
        "frak_F_max": fmax,
    }
    for t in theories:
        v = bound_at(m, t, upsilon, tau, theta)
        row[f"F_max_{t.value}"] = 1.0 / (upsilon * v)
        row[f"V_{t.value}"] = v
        row[f"gain_{t.value}"] = qfi.gain(v, upsilon, m.mean_N, std_convention=gain_alt)
    lim = qfi.sensitivity_limits(m)
    row.update(snl=lim.snl, hl=lim.hl, hofmann=lim.hofmann)
    return row


def parse_range(text: str) -> tuple[float, float, int]:
    try:
        start, stop, steps = text.split(":")
        start, stop, steps = float(start), float(stop), int(steps)
    except ValueError as exc:
        raise ValueError(f"range must look like start:stop:steps, got {text!r}") from exc
    if steps < 2:
        raise ValueError("range needs at least 2 steps")
    if not start < stop:
        raise ValueError("range needs start < stop")
    return start, stop, steps


def grid(start: float, stop: float, steps: int) -> np.ndarray:
    return np.linspace(start, stop, steps)


def moments_for(spec: InputStateSpec, param: str, value: float,
                n_a: float | None = None) -> StateMoments:
    """Moment bundle for one sweep point.

    ``nb`` places mode b at mean photon number ``value`` (mode a at ``n_a``,
    or ``|alpha|²`` when ``n_a`` is None); ``xi`` sets the squeezing of mode b;
    ``kappa`` sets the Fock occupation or number of added/subtracted photons.
    """
    f = spec.family
    if param == "nb":
        if f is Family.TWO_SVS:
            na = n_a if n_a is not None else math.sinh(abs(spec.xi)) ** 2
        else:
            na = n_a if n_a is not None else abs(spec.alpha) ** 2
        if f in (Family.CS_PASVS, Family.CS_PSSVS):
            sign = Sign.ADDED if f is Family.CS_PASVS else Sign.SUBTRACTED
            xi = xi_for_photon_number(value, PhotonOp(sign, spec.kappa))
            spec = dataclasses.replace(spec, alpha=complex(math.sqrt(na)), xi=complex(xi))
            return analytic_moments(spec)
        if f in (Family.TWIN_FOCK, Family.TMSVS):
            raise DomainError(f"{f.value} locks n_a = n_b; sweep n_b is undefined")
        return moments_at(f, na, value, spec.css_mode)
    if n_a is not None:
        spec = _with_na(spec, n_a)
    if param == "xi":
        if f is Family.TWO_SVS:
            return analytic_moments(dataclasses.replace(spec, xi_prime=complex(value)))
        if f not in (Family.CS_SVS, Family.CS_PASVS, Family.CS_PSSVS):
            raise DomainError(f"{f.value} has no squeezing parameter to sweep")
        return analytic_moments(dataclasses.replace(spec, xi=complex(value)))
    if param == "kappa":
        if f not in (Family.TWIN_FOCK, Family.CS_FOCK, Family.CS_PASVS, Family.CS_PSSVS):
            raise DomainError(f"{f.value} has no photon count to sweep")
        if value != round(value):
            raise DomainError(f"kappa grid point {value} is not an integer")
        return analytic_moments(dataclasses.replace(spec, kappa=int(round(value))))
    raise DomainError(f"unknown sweep parameter {param!r}")


def _with_na(spec: InputStateSpec, n_a: float) -> InputStateSpec:
    if spec.family is Family.TWO_SVS:
        return dataclasses.replace(spec, xi=complex(math.asinh(math.sqrt(n_a))))
    return dataclasses.replace(spec, alpha=complex(math.sqrt(n_a)))


def sweep(
    spec: InputStateSpec,
    param: str,
    values,
    theories: tuple[Theory, ...],
    upsilon: int = 1,
    n_a: float | None = None,
    tau: float | None = None,
    theta: float | None = None,
    gain_alt: bool = False,
) -> list[dict[str, float]]:
    return [
        evaluate_row(moments_for(spec, param, v, n_a), v, theories, upsilon,
                     tau, theta, gain_alt)
        for v in values
    ]
