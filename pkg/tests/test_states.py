import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mzi_sensitivity.errors import DomainError
from mzi_sensitivity.pasvs import PhotonOp, Sign
from mzi_sensitivity.states import (
    CssMode,
    Family,
    InputStateSpec,
    analytic_moments,
    css_mode,
    moments_at,
    svs_mode,
    validate,
    xi_for_photon_number,
)

import dense_oracle


def test_cs_svs_reference_values():
    m = analytic_moments(InputStateSpec(Family.CS_SVS, alpha=2, xi=0.5))
    assert (m.n_a, m.var_a, m.a_sq) == (4.0, 4.0, 4.0)
    assert m.n_b == pytest.approx(0.271540, abs=5e-7)
    # 2 sinh²(0.5)(1 + sinh²(0.5)) = 0.690549
    assert m.var_b == pytest.approx(0.690549, abs=5e-7)
    assert m.b_sq.real == pytest.approx(-0.587601, abs=5e-7)


def test_twin_fock_and_tmsvs():
    m = analytic_moments(InputStateSpec(Family.TWIN_FOCK, kappa=3))
    assert (m.n_a, m.n_b, m.var_a, m.var_b, m.a_sq, m.b_sq) == (3, 3, 0, 0, 0, 0)
    t = analytic_moments(InputStateSpec(Family.TMSVS, zeta=0.5))
    assert t.n_a == t.n_b == pytest.approx(math.sinh(0.5) ** 2)
    assert not t.separable
    assert t.a_sq == t.b_sq == 0


@pytest.mark.parametrize(
    "spec",
    [
        InputStateSpec(Family.CS_SVS, alpha=2, xi=0.5),
        InputStateSpec(Family.TWIN_FOCK, kappa=0),
        InputStateSpec(Family.CS_PSSVS, xi=0.0, kappa=0),
    ],
)
def test_validate_accepts(spec):
    assert validate(spec) is spec


@pytest.mark.parametrize(
    "spec",
    [
        InputStateSpec(Family.CS_PSSVS, xi=0.0, kappa=1),
        InputStateSpec(Family.CS_FOCK, kappa=-1),
        InputStateSpec(Family.CS_PASVS, xi=0.3 + 0.2j, kappa=1),
        InputStateSpec(Family.CS_SVS, alpha=complex(math.inf, 0)),
        InputStateSpec(Family.CS_PASVS, xi=0.3, kappa=31),
    ],
)
def test_validate_rejects(spec):
    with pytest.raises(DomainError):
        validate(spec)


def _dense_mode(spec, which, dim=140):
    f = spec.family
    if which == "a":
        if f is Family.TWIN_FOCK:
            v = np.zeros(dim, complex)
            v[spec.kappa] = 1
            return v
        if f is Family.TWO_SVS:
            return dense_oracle.squeezed(spec.xi, dim)
        return dense_oracle.displaced(spec.alpha, dim)
    if f in (Family.TWIN_FOCK, Family.CS_FOCK):
        v = np.zeros(dim, complex)
        v[spec.kappa] = 1
        return v
    if f is Family.CS_CSS:
        v = dense_oracle.displaced(spec.beta, dim) + dense_oracle.displaced(-spec.beta, dim)
        return v / np.linalg.norm(v)
    if f is Family.CS_SVS:
        return dense_oracle.squeezed(spec.xi, dim)
    if f is Family.TWO_SVS:
        return dense_oracle.squeezed(spec.xi_prime, dim)
    return dense_oracle.photon_op(spec.xi.real, spec.kappa, f is Family.CS_PASVS, dim)


PRODUCT_SPECS = [
    InputStateSpec(Family.TWIN_FOCK, kappa=2),
    InputStateSpec(Family.CS_FOCK, alpha=1.5 * cmath.exp(0.4j), kappa=3),
    InputStateSpec(Family.CS_CSS, alpha=1.2, beta=1.3 * cmath.exp(-0.7j), css_mode=CssMode.EXACT),
    InputStateSpec(Family.CS_CSS, alpha=1.0, beta=0.4, css_mode=CssMode.EXACT),
    InputStateSpec(Family.CS_SVS, alpha=2 * cmath.exp(1j), xi=0.8 * cmath.exp(-0.5j)),
    InputStateSpec(Family.TWO_SVS, xi=0.6, xi_prime=0.9 * cmath.exp(2j)),
    InputStateSpec(Family.CS_PASVS, alpha=1.0, xi=0.7, kappa=2),
    InputStateSpec(Family.CS_PSSVS, alpha=0.5j, xi=0.9, kappa=3),
]


@pytest.mark.parametrize("spec", PRODUCT_SPECS, ids=lambda s: s.family.value)
def test_single_mode_moments_match_dense_expm(spec):
    m = analytic_moments(spec)
    na, va, sa = dense_oracle.single_mode_moments(_dense_mode(spec, "a"))
    nb, vb, sb = dense_oracle.single_mode_moments(_dense_mode(spec, "b"))
    for got, want in [(m.n_a, na), (m.var_a, va), (m.n_b, nb), (m.var_b, vb)]:
        assert got == pytest.approx(want, rel=1e-8, abs=1e-12)
    assert abs(m.a_sq - sa) <= 1e-8 * max(abs(sa), 1e-4)
    assert abs(m.b_sq - sb) <= 1e-8 * max(abs(sb), 1e-4)


@pytest.mark.parametrize("spec", PRODUCT_SPECS, ids=lambda s: s.family.value)
def test_product_invariants(spec):
    m = analytic_moments(spec)
    assert m.mean_N == pytest.approx(m.n_a + m.n_b)
    assert m.cross_nn == pytest.approx(m.n_a * m.n_b)
    assert m.mean_N_sq >= m.mean_N**2 - 1e-12
    assert abs(m.a_sq) <= math.sqrt(m.n_a * (m.n_a + 1)) + 1e-12
    assert abs(m.b_sq) <= math.sqrt(m.n_b * (m.n_b + 1)) + 1e-12


@settings(max_examples=50, deadline=None)
@given(r=st.floats(0.0, 3.0), phi=st.floats(-math.pi, math.pi))
def test_svs_saturates_moment_bound(r, phi):
    xi = r * cmath.exp(1j * phi)
    mm = svs_mode(xi)
    assert abs(mm.sq) ** 2 == pytest.approx(mm.n * (mm.n + 1), rel=1e-12, abs=1e-14)
    if r > 0.01:
        diff = cmath.phase(mm.sq) - (phi + math.pi)
        assert abs(math.remainder(diff, 2 * math.pi)) < 1e-9


@settings(max_examples=50, deadline=None)
@given(r=st.floats(0.01, 4.0), phi=st.floats(-math.pi, math.pi))
def test_coherent_phase(r, phi):
    m = analytic_moments(InputStateSpec(Family.CS_FOCK, alpha=r * cmath.exp(1j * phi)))
    assert abs(math.remainder(m.theta_a - 2 * phi, 2 * math.pi)) < 1e-9


@pytest.mark.parametrize("sign_family", [Family.CS_PASVS, Family.CS_PSSVS])
@pytest.mark.parametrize("xi", [0.2, 0.9])
def test_kappa_zero_reproduces_svs(sign_family, xi):
    a = analytic_moments(InputStateSpec(sign_family, alpha=1.5, xi=xi, kappa=0))
    b = analytic_moments(InputStateSpec(Family.CS_SVS, alpha=1.5, xi=xi))
    assert a.n_b == pytest.approx(b.n_b, rel=1e-13)
    assert a.var_b == pytest.approx(b.var_b, rel=1e-13)
    assert a.b_sq.real == pytest.approx(b.b_sq.real, rel=1e-13)


def test_css_modes():
    asym = css_mode(3.0, CssMode.ASYMPTOTIC)
    assert asym.n == asym.var == 9.0
    exact = css_mode(3.0, CssMode.EXACT)
    # |β|² = 9: tanh is within 1e-7 of one
    assert exact.n == pytest.approx(9.0, rel=1e-7)
    assert exact.sq == 9.0


def test_moments_at_places_photon_numbers():
    for fam in (Family.CS_FOCK, Family.CS_CSS, Family.CS_SVS, Family.TWO_SVS):
        m = moments_at(fam, 4.0, 2.5)
        assert (m.n_a, m.n_b) == pytest.approx((4.0, 2.5), rel=1e-12)
    m = moments_at(Family.CS_CSS, 3.0, 0.7, CssMode.EXACT)
    assert m.n_b == pytest.approx(0.7, rel=1e-12)
    with pytest.raises(DomainError):
        moments_at(Family.CS_PASVS, 1.0, 1.0)


@pytest.mark.parametrize("sign", [Sign.ADDED, Sign.SUBTRACTED])
@pytest.mark.parametrize("target", [1.5, 4.0, 12.0])
def test_xi_inversion(sign, target):
    op = PhotonOp(sign, 1)
    xi = xi_for_photon_number(target, op)
    m = analytic_moments(
        InputStateSpec(Family.CS_PASVS if sign is Sign.ADDED else Family.CS_PSSVS,
                       alpha=1.0, xi=xi, kappa=1)
    )
    assert m.n_b == pytest.approx(target, rel=1e-10)


def test_xi_inversion_out_of_reach():
    # a single added photon never leaves fewer than one photon
    with pytest.raises(DomainError):
        xi_for_photon_number(0.5, PhotonOp(Sign.ADDED, 1))
