import csv
import io
import math

import numpy as np
import pytest

from mzi_sensitivity import evaluation
from mzi_sensitivity.errors import DomainError
from mzi_sensitivity.states import Family, InputStateSpec, moments_at
from mzi_sensitivity.cli import render_csv

BOTH = evaluation.THEORIES["both"]


@pytest.mark.parametrize(
    "text, ok",
    [("0:1:2", True), ("0.1:40:200", True), ("5:1:10", False), ("0:1:1", False),
     ("a:b:c", False), ("0:1", False), ("1:1:5", False)],
)
def test_parse_range(text, ok):
    if ok:
        start, stop, steps = evaluation.parse_range(text)
        assert start < stop and steps >= 2
    else:
        with pytest.raises(ValueError):
            evaluation.parse_range(text)


def test_columns():
    cols = evaluation.sweep_columns(BOTH)
    assert cols[:8] == ["sweep_value", "n_a", "n_b", "mean_N", "mean_N_sq",
                        "frak_G", "four_var_Jz", "frak_F_max"]
    assert "F_max_two" in cols and "gain_single" in cols
    assert cols[-3:] == ["snl", "hl", "hofmann"]


def test_nb_sweep_hits_table_value():
    spec = InputStateSpec(Family.CS_SVS)
    rows = evaluation.sweep(spec, "nb", [10.0], BOTH, n_a=10)
    assert rows[0]["F_max_two"] == pytest.approx(220 + 20 * math.sqrt(110), rel=1e-12)


def test_fixed_splitter_matches_direct_bound():
    m = moments_at(Family.CS_SVS, 4.0, 2.0)
    row = evaluation.evaluate_row(m, 0.0, BOTH, tau=math.pi / 3)
    want = 1 / (12 * 0.25 + (22 + 8 * math.sqrt(6)) * 0.75)
    assert row["V_two"] == pytest.approx(want, rel=1e-12)
    assert row["V_single"] <= row["V_two"]


def test_xi_and_kappa_sweeps():
    spec = InputStateSpec(Family.CS_PASVS, alpha=2.0, kappa=1)
    rows = evaluation.sweep(spec, "xi", np.linspace(0.1, 1.0, 4), BOTH)
    assert [r["n_a"] for r in rows] == pytest.approx([4.0] * 4)
    assert np.all(np.diff([r["n_b"] for r in rows]) > 0)
    rows = evaluation.sweep(InputStateSpec(Family.CS_FOCK, alpha=1.0), "kappa", [0, 1, 2], BOTH)
    assert [r["n_b"] for r in rows] == [0.0, 1.0, 2.0]


@pytest.mark.parametrize(
    "family, param, value",
    [(Family.TMSVS, "nb", 1.0), (Family.TWIN_FOCK, "nb", 1.0), (Family.CS_FOCK, "xi", 0.5),
     (Family.CS_SVS, "kappa", 1.0), (Family.CS_FOCK, "kappa", 1.5)],
)
def test_undefined_sweeps(family, param, value):
    with pytest.raises(DomainError):
        evaluation.moments_for(InputStateSpec(family, alpha=1.0), param, value)


def test_tmsvs_row():
    m = moments_at(Family.TMSVS, 0.5)
    row = evaluation.evaluate_row(m, 0.5, BOTH)
    assert math.isnan(row["frak_G"])
    assert row["frak_F_max"] == pytest.approx(4 * (0.25 + 0.5))


def test_csv_round_trip():
    spec = InputStateSpec(Family.CS_SVS)
    values = evaluation.grid(0.1, 40, 25)
    rows = evaluation.sweep(spec, "nb", values, BOTH, n_a=10)
    cols = evaluation.sweep_columns(BOTH)
    text = render_csv(rows, cols)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert len(parsed) == len(rows)
    for rec in parsed:
        m = moments_at(Family.CS_SVS, float(rec["n_a"]), float(rec["n_b"]))
        again = evaluation.evaluate_row(m, float(rec["sweep_value"]), BOTH)
        for c in cols:
            assert float(rec[c]) == pytest.approx(again[c], rel=1e-12)


def test_hofmann_never_beaten_by_twin_svs():
    rows = evaluation.sweep(InputStateSpec(Family.TWO_SVS), "nb",
                            evaluation.grid(0.0, 40.0, 401), BOTH, n_a=10)
    for r in rows:
        assert r["F_max_two"] <= r["mean_N_sq"] * (1 + 1e-12)
