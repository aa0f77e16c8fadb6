import json
import subprocess
import sys

import pytest

from cark.cli import Config, build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


class TestPoly:
    def test_table_rows(self, capsys):
        assert run(capsys, "poly", "A", "1", "--doubled")[:2] == (0, "x1*y1 + 2")
        assert run(capsys, "poly", "C", "1", "--doubled")[:2] == (0, "i*(x1 - y1)")

    def test_eval(self, capsys):
        assert run(capsys, "poly", "lucas", "2", "--eval", "1,1,1,1")[:2] == (0, "7")

    def test_eval_arity(self, capsys):
        assert run(capsys, "poly", "lucas", "2", "--eval", "1,1")[0] == 2

    def test_cap(self, capsys, monkeypatch):
        assert run(capsys, "poly", "A", "9")[0] == 2
        assert run(capsys, "poly", "A", "3", "--k-cap", "2")[0] == 2
        monkeypatch.setenv("CARK_K_CAP", "2")
        assert run(capsys, "poly", "A", "3")[0] == 2
        assert run(capsys, "poly", "A", "3", "--k-cap", "3")[0] == 0

    def test_json_terms_round_trip(self, capsys):
        from cark.algebra import MultiPoly, parse_poly

        code, out, _ = run(capsys, "--format", "json", "poly", "B", "2")
        data = json.loads(out)
        assert code == 0 and MultiPoly.from_json(data["terms"]) == parse_poly(data["text"])

    def test_latex(self, capsys):
        code, out, _ = run(capsys, "poly", "C", "1", "--format", "latex")
        assert code == 0 and "\\sqrt{-1}" in out


class TestPell:
    def test_values(self, capsys):
        code, out, _ = run(capsys, "pell", "--d", "30")
        assert code == 0 and "delta 120" in out and "(22, 2)" in out
        assert "(3, 1)" in run(capsys, "pell", "--d", "5")[1]

    def test_square(self, capsys):
        assert run(capsys, "pell", "--delta", "49")[0] == 2

    def test_json(self, capsys):
        data = json.loads(run(capsys, "pell", "--delta", "120", "--format", "json")[1])
        assert data["x"] == "22" and data["z"] == "2"


class TestClassGroup:
    def test_d30(self, capsys):
        data = json.loads(run(capsys, "classgroup", "--d", "30", "--format", "json")[1])
        assert data["h_plus"] == 4 and data["structure"] == [2, 2]
        assert sorted(data["tuple_lengths"]) == [1, 1, 2, 2]

    def test_small(self, capsys):
        assert "h+ = 1" in run(capsys, "classgroup", "--d", "5")[1]
        assert "h+ = 2" in run(capsys, "classgroup", "--d", "3")[1]

    def test_bad_d(self, capsys):
        assert run(capsys, "classgroup", "--d", "12")[0] == 2


class TestTupleAndCark:
    def test_tuple(self, capsys):
        data = json.loads(run(capsys, "tuple", "--matrix", "11,30,4,11", "--format", "json")[1])
        assert data["tuple"] == [2, 1, 4, 1] and data["form"] == [2, 0, -15] and data["trace"] == "22"

    def test_elliptic(self, capsys):
        assert run(capsys, "tuple", "--matrix", "0,-1,1,0")[0] == 2

    def test_dot_spine(self, capsys):
        code, out, _ = run(capsys, "cark", "--tuple", "4,1,2,1", "--format", "dot")
        assert code == 0 and out.count("weight=10") == 16

    def test_form_gives_same_graph(self, capsys):
        a = run(capsys, "cark", "--tuple", "4,1,2,1", "--format", "dot")[1]
        b = run(capsys, "cark", "--d", "30", "--form", "2,0,-15", "--format", "dot")[1]
        assert a == b

    def test_minimal_json(self, capsys):
        data = json.loads(run(capsys, "cark", "--tuple", "1,1", "--format", "json")[1])
        assert data["tuple"] == [1, 1] and len(data["spine"]) == 4

    def test_depth_flag(self, capsys):
        data = json.loads(run(capsys, "cark", "--tuple", "1,1", "--depth", "0", "--format", "json")[1])
        assert all("child" not in b["tree"] for b in data["branches"])

    def test_wrong_disc(self, capsys):
        assert run(capsys, "cark", "--d", "30", "--form", "1,0,-2")[0] == 2


class TestSurface:
    def test_d30(self, capsys):
        code, out, _ = run(capsys, "surface", "--d", "30", "--format", "json")
        data = json.loads(out)
        assert code == 0 and data["bijection"] and data["fundamental_orbits"] == 4

    def test_unfiltered(self, capsys):
        data = json.loads(run(capsys, "surface", "--d", "2", "--unfiltered", "--format", "json")[1])
        assert len(data["points"]) == 3 and data["nonmaximal_count"] == 2

    def test_d5(self, capsys):
        data = json.loads(run(capsys, "surface", "--d", "5", "--format", "json")[1])
        assert data["fundamental_orbits"] == 1

    def test_failing_bijection_exits_one(self, capsys):
        code, out, _ = run(capsys, "surface", "--d", "34")
        assert code == 1 and "finding" in out

    def test_bad_z(self, capsys):
        assert run(capsys, "surface", "--d", "5", "--z", "x")[0] == 2


class TestVerify:
    def test_empty(self, capsys):
        code, out, _ = run(capsys, "verify", "--d-range", "4..4")
        assert code == 0 and out.startswith("0 checks")

    def test_passing_range(self, capsys):
        data = json.loads(run(capsys, "verify", "--d-range", "2..15", "--format", "json")[1])
        assert data["failures"] == 0 and [f["d"] for f in data["fields"]] == [2, 3, 5, 6, 7, 10, 11, 13, 14, 15]

    def test_failing_range(self, capsys):
        code, out, _ = run(capsys, "verify", "--d-range", "33..35")
        assert code == 1 and "d=34" in out

    def test_identities(self, capsys):
        code, out, _ = run(capsys, "verify", "--identities", "--k", "4", "--format", "json")
        data = json.loads(out)
        assert code == 1
        assert all(f.endswith("d_swap_rotation fails") for f in data["findings"])
        assert {f.split(":")[0] for f in data["findings"]} == {"k=3", "k=4"}

    def test_bad_range(self, capsys):
        assert run(capsys, "verify", "--d-range", "2-6")[0] == 2


class TestIdeal:
    def test_norm_and_form(self, capsys):
        data = json.loads(run(capsys, "ideal", "--d", "30", "--basis", "2,0;0,1", "--format", "json")[1])
        assert data["norm"] == "2" and data["form"] == [2, 0, -15]


class TestConfig:
    def test_precedence(self):
        args = build_parser().parse_args(["poly", "A", "1"])
        assert Config.resolve(args, env={}).k_cap == 8
        assert Config.resolve(args, env={"CARK_K_CAP": "5"}).k_cap == 5
        args = build_parser().parse_args(["--k-cap", "3", "poly", "A", "1"])
        assert Config.resolve(args, env={"CARK_K_CAP": "5"}).k_cap == 3

    def test_deterministic(self, capsys):
        a = run(capsys, "classgroup", "--d", "79", "--format", "json")
        b = run(capsys, "classgroup", "--d", "79", "--format", "json")
        assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cark", "pell", "--d", "5"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "(3, 1)" in proc.stdout
