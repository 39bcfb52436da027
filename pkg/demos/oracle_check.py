"""Closed-form QFI matrices against the truncated Fock-space oracle.

Every family is built as an explicit two-mode state vector, and its QFI
matrix is compared with the analytic one over a grid of beam splitters.
"""

from mzi_sensitivity import Family, InputStateSpec
from mzi_sensitivity.cli import ORACLE_RTOL, oracle_check
from mzi_sensitivity.states import CssMode

STATES = [
    InputStateSpec(Family.CS_FOCK, alpha=1.5 + 0.5j, kappa=3),
    InputStateSpec(Family.CS_SVS, alpha=2.0, xi=0.6j),
    InputStateSpec(Family.CS_CSS, alpha=1.0, beta=2.0, css_mode=CssMode.EXACT),
    InputStateSpec(Family.TWIN_FOCK, kappa=4),
    InputStateSpec(Family.TWO_SVS, xi=0.5, xi_prime=-0.3),
    InputStateSpec(Family.TMSVS, zeta=0.7),
    InputStateSpec(Family.CS_PASVS, alpha=1.0, xi=0.5, kappa=2),
    InputStateSpec(Family.CS_PSSVS, alpha=1.0, xi=0.5, kappa=2),
]


def main():
    worst_all = 0.0
    for spec in STATES:
        worst, where, state, _ = oracle_check(spec)
        worst_all = max(worst_all, worst)
        print(f"{spec.family.value:<10} cutoff {state.cutoff:4d}  max dev {worst:.2e}"
              f"  at tau={where[0]:.3f} theta={where[1]:.3f}")
    verdict = "PASS" if worst_all < ORACLE_RTOL else "FAIL"
    print(f"{verdict}: worst {worst_all:.2e} against tolerance {ORACLE_RTOL:g}")


if __name__ == "__main__":
    main()
