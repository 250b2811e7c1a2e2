import json
import random
from fractions import Fraction

import pytest

from igusa.cli import main
from igusa.errors import BadCharacterString, ScenarioError, UnsupportedFamily
from igusa.lattice_orbits import ANALYTIC, UNEXTENDABLE, SmoothCharacter, pairing
from igusa.pipeline import Requests, run_pipeline
from igusa.scenarios import build_scenario, custom_scenario, load_scenario, scenario_from_json


def test_build_examples():
    t = build_scenario("tate", 1, 2, -1, "trivial")
    assert t.f.terms == ((1, (1,)),)
    assert t.nu.exponents == (1,) and t.measure.twist == -1
    s = build_scenario("pairing_space", 2, 2, -1, "(u:1,u:0,u:-1)")
    assert s.f.terms == ((1, (0, 1, 0, 1)), (1, (1, 0, 1, 0)))
    assert s.nu.exponents == (1, 0, -1)
    d = build_scenario("matrix_det", 2, 3, 0, "trivial")
    assert d.nu.exponents == (1, -1) and d.f.nvars == 4
    assert d.chi == SmoothCharacter.trivial(2)


def test_orbit_lists():
    s1 = build_scenario("pairing_space", n=1)
    assert sorted(s1.stratification.orbit_names()) == ["O_01", "O_10", "{0}"]
    s2 = build_scenario("pairing_space", n=2)
    assert sorted(s2.stratification.orbit_names()) == ["O_01", "O_10", "Q^x", "{0}"]
    assert s2.orbit("Q^x").psi_generators == ((1, -1, 1),)
    assert [o.name for o in s2.open_orbits] == ["V_f"]
    d = build_scenario("matrix_det", n=3)
    assert d.stratification.orbit_names() == ["O_0", "O_1", "O_2"]
    assert all(d.orbit(f"O_{r}").psi_generators == () for r in range(3))


@pytest.mark.parametrize("family,n", [("tate", 1), ("monomial", 1), ("matrix_det", 2), ("pairing_space", 2)])
def test_semi_invariance_spot_check(family, n):
    s = build_scenario(family, n=n, p=3)
    rng = random.Random(1)
    for k in range(s.group.rank):
        g = s.element(tuple(int(i == k) for i in range(s.group.rank)))
        w = s.action.coordinate_weights(g)
        e = pairing(g.lam(), s.nu)
        for _ in range(5):
            x = [Fraction(rng.randint(-20, 20)) for _ in range(s.f.nvars)]
            gx = [xi * Fraction(3) ** wi for xi, wi in zip(x, w)]
            assert s.f(gx) == Fraction(3) ** e * s.f(x)


def test_errors():
    with pytest.raises(UnsupportedFamily):
        build_scenario("cubic")
    with pytest.raises(BadCharacterString):
        build_scenario("matrix_det", n=2, chi="(u:1*r:a,u:0)")
    with pytest.raises(ScenarioError):
        build_scenario("matrix_det", n=0)


def test_json_roundtrip(tmp_path):
    for s in (build_scenario("tate"), build_scenario("pairing_space", n=2, chi="(u:1,u:0,u:-1)"),
              build_scenario("matrix_det", n=2, p=3, twist=-1), build_scenario("monomial", a=3)):
        assert scenario_from_json(json.loads(json.dumps(s.to_json()))) == s
        path = tmp_path / "s.json"
        path.write_text(json.dumps(s.to_json()))
        assert load_scenario(path) == s


def _custom_pairing1():
    ref = build_scenario("pairing_space", n=1)
    return ref, {
        "family": "custom", "p": 2, "n": 1, "measure_twist": -1, "chi": "auto",
        "f": ref.f.to_json(), "group": "Gm,GL1,Gm", "weights": ref.action.to_json(),
        "orbits": [o.to_json() for o in ref.orbits],
        "open_orbits": [o.to_json() for o in ref.open_orbits],
        "stratification": ref.stratification.to_json(), "uniform_pole_bound": 2,
    }


def test_custom_scenario_matches_builtin():
    ref, data = _custom_pairing1()
    s = custom_scenario(data)
    assert s.nu == ref.nu and s.zeta().Z == ref.zeta().Z
    assert scenario_from_json(s.to_json()) == s
    r = run_pipeline(s, Requests(verdict=True)).to_json()
    assert r["verdict"]["conclusion"] == UNEXTENDABLE and r["verdict"]["ell_chi"] == 2


def test_custom_scenario_validation():
    _, data = _custom_pairing1()
    bad = dict(data, stratification=[{"orbits": ["{0}"], "fiberizable": True}])
    with pytest.raises(ScenarioError):
        custom_scenario(bad)
    with pytest.raises(ScenarioError):
        custom_scenario(dict(data, nu=[1, 1, 1]))
    with pytest.raises(ScenarioError):
        custom_scenario({"family": "custom"})


# pipeline -------------------------------------------------------------------

def _no_floats(x):
    if isinstance(x, float):
        return False
    if isinstance(x, dict):
        return all(_no_floats(v) for v in x.values())
    if isinstance(x, list):
        return all(_no_floats(v) for v in x)
    return True


def test_pipeline_examples():
    r = run_pipeline(build_scenario("tate"), Requests(laurent=(0,), verdict=True)).to_json()
    assert r["zeta"]["pole_order_at_0"] == 1 and r["laurent"][0]["pole_order"] == 1
    assert (r["verdict"]["conclusion"], r["verdict"]["ell_chi"]) == (UNEXTENDABLE, 1)
    r = run_pipeline(build_scenario("pairing_space", n=1), Requests(verdict=True)).to_json()
    assert (r["zeta"]["pole_order_at_0"], r["verdict"]["ell_chi"]) == (2, 2)
    assert r["verdict"]["conclusion"] == UNEXTENDABLE
    r = run_pipeline(build_scenario("matrix_det", n=2, twist=0), Requests(verdict=True)).to_json()
    assert r["verdict"]["conclusion"] == ANALYTIC and r["zeta"]["pole_order_at_0"] == 0
    assert r["zeta"]["igusa_relation"] is True


def test_pipeline_deterministic():
    req = Requests(laurent=(0, -1), verdict=True, identities=("igu-inv",), cocycle=("identity",))
    a = run_pipeline(build_scenario("pairing_space", n=1), req).dumps()
    b = run_pipeline(build_scenario("pairing_space", n=1), req).dumps()
    assert a == b
    data = json.loads(a)
    assert "timing" not in data and _no_floats(data)


def test_pipeline_embeds_errors():
    req = Requests(verdict=True, cocycle=("nonvanishing",), g=((1, 0, 0),))
    r = run_pipeline(build_scenario("pairing_space", n=1), req)
    assert r.errors["cocycle"]["type"] == "WrongArity"
    assert r.to_json()["verdict"]["conclusion"] == UNEXTENDABLE
    assert r.exit_code == 1


def test_pipeline_stage_dependency():
    s = build_scenario("matrix_det", n=2, budget=100)
    r = run_pipeline(s, Requests(laurent=(0,), verdict=True))
    assert r.errors["zeta"]["type"] == "BudgetExceeded"
    assert r.errors["verdict"]["type"] == "Skipped"


def test_report_echo_rebuilds_scenario():
    s = build_scenario("pairing_space", n=2, chi="(u:1,u:0,u:-1)")
    echo = json.loads(run_pipeline(s, Requests()).dumps())["scenario"]
    assert scenario_from_json(echo) == s


# CLI ------------------------------------------------------------------------

def test_cli_zeta_text(capsys):
    assert main(["zeta", "--scenario", "matrix_det", "--n", "2", "--p", "3", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "(1 - q^-1)(1 - q^-2) / ((1 - q^-1 t)(1 - q^-2 t))" in out


def test_cli_json_and_laurent(capsys):
    assert main(["laurent", "--scenario", "tate", "--at", "0", "--terms", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["laurent"][0]["series"]["leading"] == -1
    assert len(data["laurent"][0]["series"]["coeffs"]) == 3


def test_cli_exit_codes(capsys):
    assert main(["verdict", "--scenario", "pairing_space", "--n", "2", "--chi", "(u:1,u:0,u:-1)"]) == 0
    assert main(["verdict", "--scenario", "tate", "--chi", "(u:1)"]) == 2
    assert main(["verdict", "--scenario", "matrix_det", "--n", "2", "--chi", "(u:0*r:a,u:0)"]) == 1
    assert "ramified" in capsys.readouterr().err


def test_cli_checks(capsys):
    assert main(["cocycle", "--scenario", "pairing_space", "--check", "nonvanishing",
                 "--g", "1,0,0", "--g", "0,0,1", "--format", "text"]) == 0
    assert "delta_nonzero" in capsys.readouterr().out
    assert main(["cocycle", "--scenario", "matrix_det", "--n", "2", "--twist", "-1",
                 "--check", "nonvanishing", "--g", "(pI,I)"]) == 0
    assert json.loads(capsys.readouterr().out)["cocycle"]["nonvanishing"]["result"] == "delta_nonzero"
    assert main(["identities", "--scenario", "tate", "--check", "igu-inv", "--check", "equivariance"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert all(v["holds"] for v in data["identities"].values())


def test_cli_scenario_file(tmp_path, capsys):
    _, data = _custom_pairing1()
    path = tmp_path / "custom.json"
    path.write_text(json.dumps(data))
    assert main(["verdict", "--scenario-file", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"]["ell_chi"] == 2
    assert main(["zeta", "--scenario-file", str(tmp_path / "missing.json")]) == 1
