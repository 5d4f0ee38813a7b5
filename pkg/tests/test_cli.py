import io
import json
import shutil
import subprocess

import pytest

from opstat.cli import run
from opstat.ftt import FTTParams, interference_excess

GIST = '{"iota_t":0,"sigma_t":1,"nu_r":0,"sigma_r":1}'


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    return code, json.loads(out), err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


class TestManual:
    def test_validate(self, tmp_path):
        f = write(tmp_path, "m.json", {"operations": [["a", "b"], ["b", "c"]]})
        code, obj, _ = call_json("manual", "validate", f)
        assert code == 0 and obj == {"valid": True, "operations": 2, "outcomes": 3}

    def test_validate_subset(self, tmp_path):
        f = write(tmp_path, "m.json", {"operations": [["a", "b"], ["a"]]})
        code, obj, err = call_json("manual", "validate", f)
        assert code == 1
        assert obj["error"] == "RedundantOperation"
        assert json.loads(err)["error"] == "RedundantOperation"

    def test_logic(self):
        nine = {"operations": [[f"{y}_{z}", f"{y}'_{z}"] for y in "TRU" for z in "TRU"]}
        code, obj, _ = call_json("manual", "logic", json.dumps(nine))
        assert code == 0
        assert obj["elements"] == 20 and obj["atoms"] == 18 and obj["orthomodular"] is True

    def test_logic_degenerate(self):
        m = {"operations": [["c", "e"], ["f", "g"], ["b", "c", "f"], ["b", "e", "g"]]}
        code, obj, _ = call_json("manual", "logic", json.dumps(m))
        assert code == 1 and obj["degenerate"] and obj["reason"] == "order not antisymmetric"

    def test_logic_not_orthomodular(self):
        m = {"operations": [["a", "c", "e"], ["b", "e", "g"], ["c", "d", "g"]]}
        code, obj, _ = call_json("manual", "logic", json.dumps(m))
        assert code == 1 and obj["violated_law"] == "orthogonal join"

    def test_coarsen_then_validate(self, tmp_path):
        m = write(tmp_path, "m.json", {"operations": [["T", "R", "U"]]})
        code, out, _ = call("manual", "coarsen", m, "--op", "0", "--pack", "R,U", "--new-id", "T'")
        assert code == 0
        assert sorted(json.loads(out)["operations"][0]) == ["T", "T'"]
        assert call("manual", "validate", out)[0] == 0

    def test_identify(self):
        m = '{"operations": [["a","b"],["c","d"]]}'
        code, obj, _ = call_json("manual", "identify", m, "--identification", '{"identify":{"c":"a"}}')
        assert code == 0 and obj["operations"] == [["a", "b"], ["a", "d"]]


class TestWeights:
    def test_canonical_feeds_check(self):
        code, states, _ = call_json("ftt", "canonical")
        assert code == 0 and set(states) == {"omega_p", "omega_0", "omega_g"}
        for w in states.values():
            code, obj, _ = call_json("weights", "check", json.dumps(w))
            assert code == 0 and obj["valid"] and obj["dof"] == 9

    def test_check_violation(self):
        w = {"manual": {"operations": [["a", "b"]]}, "weights": {"a": 0.7, "b": 0.7}}
        code, obj, _ = call_json("weights", "check", json.dumps(w))
        assert code == 1 and not obj["valid"]
        assert obj["violations"][0]["sum"] == pytest.approx(1.4)

    def test_superposition(self):
        _, states, _ = call_json("ftt", "canonical")
        s = {k: json.dumps(v) for k, v in states.items()}
        code, obj, _ = call_json("weights", "superposition", s["omega_p"], "--generators", s["omega_0"], s["omega_g"])
        assert code == 0 and obj["superposition"] is True
        assert obj["common_zero_set"] == ["R_U", "T_U", "U'_U"]

    def test_event_prob(self):
        _, states, _ = call_json("ftt", "canonical")
        g = json.dumps(states["omega_g"])
        code, obj, _ = call_json("weights", "event-prob", g, "--event", "R_T")
        assert code == 0 and obj["probability"] == 1.0
        code, obj, _ = call_json("weights", "event-prob", g, "--event", "R_T,U_T")
        assert code == 1 and obj["event"] is False


class TestSpin:
    def test_pipeline(self):
        code, frames, _ = call("spin", "frames", "--seed", "1", "--count", "6")
        assert code == 0 and len(json.loads(frames)) == 6
        code, rho, _ = call("spin", "density", "--seed", "2")
        code, weights, _ = call("spin", "weights", "--density", rho, "--frames", frames)
        assert code == 0
        code, fit, _ = call_json("spin", "fit-density", "--frames", frames, "--weights", weights)
        assert code == 0 and fit["residual"] <= 1e-10 and not fit["not_positive"]
        want = json.loads(rho)
        for r in range(3):
            for c in range(3):
                for k in range(2):
                    assert abs(fit["density"][r][c][k] - want[r][c][k]) <= 1e-6

    def test_underdetermined(self):
        _, frames, _ = call("spin", "frames", "--seed", "1", "--count", "1")
        code, obj, _ = call_json("spin", "fit-density", "--frames", frames, "--weights", "[[0.2,0.3,0.5]]")
        assert code == 1 and obj["null_dim"] == 6

    def test_reproducible(self):
        assert call("spin", "frames", "--seed", "5")[1] == call("spin", "frames", "--seed", "5")[1]


class TestFTT:
    def test_predict(self):
        code, obj, _ = call_json("ftt", "predict", "--params", GIST)
        assert code == 0 and obj["T_T"] == 1 and obj["U_T"] == 0

    def test_sums(self):
        assert call_json("ftt", "sums", "--params", GIST)[1] == {"T": 2.0, "R": 2.0, "U": 1.0}

    def test_interference(self):
        code, obj, _ = call_json("ftt", "interference", "--params", GIST)
        assert obj["excess_T"] == 1.0 and obj["excess_R"] == 1.0


class TestEstimation:
    def test_simulate_fit_gof(self, tmp_path):
        params = '{"iota_t":0.6,"sigma_t":0.5,"nu_r":0.4,"sigma_r":0.5}'
        code, csv_text, _ = call("est", "simulate", "--params", params, "--n", "100000", "--seed", "3")
        assert code == 0 and csv_text.startswith("discrimination,probe_type,yes,total")
        counts = write(tmp_path, "c.csv", csv_text)
        code, fit_text, _ = call("est", "fit", "--counts", counts)
        fit = json.loads(fit_text)
        assert code == 0 and fit["converged"] and abs(fit["params"]["iota_t"] - 0.6) < 0.01
        code, gof, _ = call_json("est", "gof", "--counts", counts, "--fit", fit_text)
        assert code == 0 and len(gof["cells"]) == 9 and gof["dof"] == 5

    def test_simulate_json(self):
        code, obj, _ = call_json("est", "simulate", "--params", GIST, "--n", "10", "--seed", "0", "--format", "json")
        assert code == 0 and obj["generator"] == "numpy.random.PCG64" and len(obj["counts"]) == 9

    def test_infeasible_fit_exit(self, tmp_path):
        params = '{"iota_t":0.5,"sigma_t":0.5,"nu_r":0.5,"sigma_r":0.5,"bias":{"b_T":0.3,"b_R":0.3,"b_U":0.4}}'
        _, csv_text, _ = call("est", "simulate", "--params", params, "--n", "100", "--seed", "1")
        code, obj, _ = call_json("est", "fit", "--counts", write(tmp_path, "c.csv", csv_text))
        assert code == 1 and obj["log_likelihood"] == "-inf" and obj["diagnostic"]


class TestDemo:
    def test_gist_interference(self):
        code, obj, _ = call_json("demo", "interference", "--params", GIST)
        assert code == 1
        assert obj["sums"] == {"T": 2.0, "R": 2.0, "U": 1.0}
        assert [v["sum"] for v in obj["violations"]] == [2.0, 2.0]
        assert all(v["error"] == "OperationSumViolation" for v in obj["violations"])

    def test_perfect_verbatim_passes(self):
        params = '{"iota_t":1,"sigma_t":0.4,"nu_r":1,"sigma_r":0.9}'
        code, obj, _ = call_json("demo", "interference", "--params", params)
        assert code == 0 and obj["valid"] and obj["violations"] == []

    def test_excess_matches_model(self):
        p = FTTParams(0.3, 0.7, 0.2, 0.4)
        params = json.dumps(dict(zip(("iota_t", "sigma_t", "nu_r", "sigma_r"), p.as_tuple())))
        _, obj, _ = call_json("demo", "interference", "--params", params)
        et, er = interference_excess(p)
        assert abs(obj["violations"][0]["excess"] - et) <= 1e-12
        assert abs(obj["violations"][1]["excess"] - er) <= 1e-12

    def test_spin_additivity(self):
        code, obj, _ = call_json("demo", "spin-additivity", "--seed", "4", "--count", "50")
        assert code == 0
        assert obj["max_merged_discrepancy"] <= 1e-10
        assert obj["max_untouched_discrepancy"] <= 1e-12


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["ftt", "predict", "--params", "{not json"],
            ["spin", "frames"],
            ["est", "simulate", "--params", GIST, "--n", "0", "--seed", "1"],
            ["est", "fit", "--counts", "/nonexistent/counts.csv"],
            ["manual", "validate", '{"ops": []}'],
            ["nope"],
            ["ftt", "predict", "--params", GIST, "--bogus"],
        ],
        ids=["json", "no-seed", "n-zero", "missing-file", "bad-shape", "group", "flag"],
    )
    def test_exit_two(self, argv):
        code, out, err = call(*argv)
        assert code == 2 and out == ""
        lines = err.strip().splitlines()
        assert len(lines) == 1 and json.loads(lines[0])["error"] == "usage"

    def test_bad_csv(self, tmp_path):
        f = write(tmp_path, "c.csv", "a,b\n1,2\n")
        assert call("est", "fit", "--counts", f)[0] == 2

    def test_param_out_of_range_is_domain(self):
        code, obj, _ = call_json("ftt", "predict", "--params", '{"iota_t":2,"sigma_t":0,"nu_r":0,"sigma_r":0}')
        assert code == 1 and obj["error"] == "ParamOutOfRange"


@pytest.mark.skipif(shutil.which("opstat") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["opstat", "ftt", "sums", "--params", GIST], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["T"] == 2.0
