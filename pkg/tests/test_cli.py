"""Command line surface: canonical output, JSON round-trips, exit codes."""

import json

from openwdvv.cli import _emit_report, main
from openwdvv.coxeter import classify_I2, open_family
from openwdvv.exactalg import MPoly
from openwdvv.openext import open_potential_D
from openwdvv.report import Report
from openwdvv.saito import frobenius_structure


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConstructiveVerbs:
    def test_potential_text_is_canonical(self, capsys):
        code, out, _ = run(capsys, "potential", "D", "4")
        assert code == 0
        assert out.strip() == frobenius_structure("D", 4).potential.text()

    def test_potential_json_round_trip(self, capsys):
        code, out, _ = run(capsys, "potential", "A", "3", "--format", "json")
        assert code == 0
        assert MPoly.from_json(out) == frobenius_structure("A", 3).potential

    def test_open_potential_lambda_and_branch(self, capsys):
        code, out, _ = run(
            capsys, "open-potential", "I2", "4", "--branch", "minus",
            "--lambda", "1/2",
        )
        assert code == 0
        want = open_family("I2(4)").member("1/2", "minus")
        assert out.strip() == want.text()

    def test_open_potential_d_pole(self, capsys):
        code, out, _ = run(capsys, "open-potential", "D", "5", "--format", "json")
        assert code == 0
        assert MPoly.from_json(out) == open_potential_D(5).potential

    def test_printed_source(self, capsys):
        code, out, _ = run(capsys, "potential", "D", "5", "--source", "printed")
        assert code == 0
        assert out.strip() == frobenius_structure("D", 5).potential.text()

    def test_coords_invert_each_other(self, capsys):
        code, out, _ = run(capsys, "flat-coords", "A", "4", "--format", "json")
        assert code == 0
        fwd = json.loads(out)
        code, out, _ = run(capsys, "invert-coords", "A", "4", "--format", "json")
        assert code == 0
        bwd = json.loads(out)
        assert [c["name"] for c in fwd["coords"]] == ["t1", "t2", "t3", "t4"]
        assert [c["name"] for c in bwd["coords"]] == ["v1", "v2", "v3", "v4"]
        fs = frobenius_structure("A", 4)
        for c, p in zip(fwd["coords"], fs.t_of_v):
            assert MPoly.from_json(json.dumps(c["expr"])) == p

    def test_correlators_text(self, capsys):
        code, out, _ = run(capsys, "correlators", "A", "2", "--max-n", "2")
        assert code == 0
        lines = out.strip().splitlines()
        assert "<sigma^4> = 2" in lines
        assert "<tau_2 tau_2 sigma^0> = 1" in lines

    def test_classify_json(self, capsys):
        code, out, _ = run(
            capsys, "classify", "I2", "4", "--branch", "minus", "--format", "json"
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["domain"] == "C" and obj["branches"] == ["plus", "minus"]
        betas = [b[0] for b in obj["coefficients"]]
        assert betas == [[6, 1], [2, 1], [1, 1]]
        member = MPoly.from_json(json.dumps(obj["member"]))
        assert member == classify_I2(4).member(1, "minus")


class TestVerifyVerbs:
    def test_verify_passes(self, capsys):
        for argv in (
            ("verify", "wdvv", "A", "3"),
            ("verify", "wdvv", "H", "3"),
            ("verify", "open-wdvv", "D", "4"),
            ("verify", "open-wdvv", "I2", "6", "--branch", "minus"),
            ("verify", "extension", "D", "4"),
            ("verify", "foan", "A", "4"),
            ("verify", "extract", "D", "4"),
            ("verify", "vector", "B", "2"),
            ("verify", "omega", "D", "4"),
            ("obstruction", "E", "6"),
        ):
            code, out, _ = run(capsys, *argv)
            assert code == 0, argv
            assert "pass" in out

    def test_verify_all_json(self, capsys):
        code, out, _ = run(
            capsys, "verify", "all", "--max-rank", "3", "--format", "json"
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["ok"] and obj["checked"] > 100
        assert all(r["ok"] for r in obj["reports"])

    def test_failing_report_maps_to_exit_1(self, capsys):
        rep = Report("demo", 3, ("broken",))
        assert _emit_report(rep, "text") == 1
        out = capsys.readouterr().out
        assert "FAIL" in out


class TestUsageErrors:
    def test_exit_codes(self, capsys):
        for argv in (
            ("potential", "E", "6"),
            ("potential", "Q", "9"),
            ("open-potential", "A", "2", "--lambda", "0"),
            ("open-potential", "A", "2", "--lambda", "0.5"),
            ("open-potential", "A", "3", "--branch", "minus"),
            ("flat-coords", "B", "3"),
            ("correlators", "D", "4"),
            ("verify", "foan", "D", "4"),
            ("verify", "wdvv"),
            ("classify", "A", "3"),
            ("obstruction", "A", "3"),
        ):
            code, _, err = run(capsys, *argv)
            assert code == 2, argv
            assert err.strip(), argv

    def test_lambda_zero_admissible_family(self, capsys):
        code, out, _ = run(capsys, "open-potential", "B", "2", "--lambda", "0")
        assert code == 0
        assert out.strip() == "t1*s + 1/2*t2^2*s"
