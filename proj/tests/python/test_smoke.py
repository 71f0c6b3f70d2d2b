import json
import math

import pytest

import aniso_content as ac


def test_body_presets():
    sq = ac.body("square")
    assert sq.volume == pytest.approx(4.0)
    assert sq.inradius == pytest.approx(1.0)
    assert sq.gauge([0.5, -0.25]) == pytest.approx(0.5)
    disk = ac.body("disk64")
    assert disk.support([1.0, 0.0]) == pytest.approx(1.0)


def test_gasket_limits_chain():
    L = ac.gasket_limits("disk64")
    assert L["D"] == pytest.approx(math.log2(3))
    assert L["S_lower_coef"] == pytest.approx(1.107, abs=1e-3)
    assert L["M_lower_coef"] == pytest.approx(1.148, abs=1e-3)
    assert L["M_upper_coef"] == pytest.approx(1.150, abs=1e-3)
    assert L["S_upper_coef"] == pytest.approx(1.170, abs=1e-3)
    assert L["S_lower"] < L["M_lower"] < L["M_upper"] < L["S_upper"]


def test_point_square_profile():
    radii = ac.geometric_radii(0.02, 0.1, 4)
    p = ac.profile("point", "square", h=0.002, radii=radii)
    for r, v, b in zip(p["r"], p["V"], p["err_budget"]):
        assert abs(v - 4 * r * r) <= b


def test_triangle_closed_form_matches_grid():
    p = ac.profile("triangle", "disk64", h=1 / 512, radii=[0.05])
    exact = ac.triangle_volume(0.05, "disk64")
    assert p["V"][0] == pytest.approx(exact, rel=1e-2)


def test_errors_are_translated():
    with pytest.raises(ac.AnisoError):
        ac.body("[[0, 0]]")
    with pytest.raises(ac.AnisoError):
        ac.gasket_volume(-1.0)


def test_cli_round_trip(tmp_path):
    out = tmp_path / "run"
    code = ac.run_cli(["gasket-exact", "--out", str(out), "--rmax", "0.5"])
    assert code == 0
    meta = json.loads((out / "gasket.json").read_text())
    assert meta["config"]["command"] == "gasket-exact"
    assert meta["limits"]["strict_chain"] is True
    assert (out / "gasket.csv").read_bytes().startswith(b"r,V_exact,S_exact\r\n")
    assert ac.run_cli(["profile", "--rmax", "-1", "--out", str(out)]) == 3
