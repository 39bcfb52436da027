"""Gain of a coherent state mixed with photon-added or -subtracted squeezed vacuum.

At α = 25 the squeeze parameter ξ is swept and the optimal gain of the
two-parameter bound is printed for κ = 0..3 and both operations.
"""

import numpy as np

from mzi_sensitivity import Family, InputStateSpec
from mzi_sensitivity.evaluation import THEORIES, sweep

ALPHA = 25.0
XI = np.array([0.05, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0])


def gains(family, kappa):
    if kappa == 0:
        spec = InputStateSpec(Family.CS_SVS, alpha=ALPHA)
    else:
        spec = InputStateSpec(family, alpha=ALPHA, kappa=kappa)
    return [r["gain_two"] for r in sweep(spec, "xi", XI, THEORIES["two"])]


def main():
    print(f"alpha = {ALPHA:g}: optimal two-parameter gain in dB")
    print(f"{'':<16}" + "".join(f"{x:>9.2f}" for x in XI))
    print(f"{'svs':<16}" + "".join(f"{g:9.3f}" for g in gains(None, 0)))
    for family, label in ((Family.CS_PASVS, "added"), (Family.CS_PSSVS, "subtracted")):
        for kappa in (1, 2, 3):
            row = gains(family, kappa)
            print(f"{label + f' k={kappa}':<16}" + "".join(f"{g:9.3f}" for g in row))


if __name__ == "__main__":
    main()
