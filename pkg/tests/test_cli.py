"""End-to-end CLI tests: argument handling, CSV round-trips, exit codes,
and the verification subcommand's JSON document."""

import json

import numpy as np
import pytest

import fraccalc as fc
from fraccalc.cli import main, read_grid_csv, write_grid_csv

GAMMA_3_2 = 0.8862269254527580136


def run_cli(*args):
    """Invoke the CLI in-process; argparse rejections surface as SystemExit."""
    try:
        return main(list(args))
    except SystemExit as exc:
        return int(exc.code or 0)


class TestCatalogCommand:
    def test_list(self, capsys):
        assert run_cli("catalog", "list") == 0
        out = capsys.readouterr().out.split()
        assert out == ["constant", "ml_exp", "power", "step", "weierstrass_shifted"]

    def test_describe(self, capsys):
        assert run_cli("catalog", "describe", "power") == 0
        text = capsys.readouterr().out
        assert "p (required)" in text

    def test_describe_unknown(self, capsys):
        assert run_cli("catalog", "describe", "spline") == 2
        assert "unknown catalog entry" in capsys.readouterr().err


class TestCsvFormat:
    def test_round_trip_is_lossless(self, tmp_path):
        rng = np.random.default_rng(21)
        g = fc.GridFunction(0.0, 1.0, rng.standard_normal(65))
        p = tmp_path / "g.csv"
        write_grid_csv(str(p), g)
        back = read_grid_csv(str(p))
        assert np.array_equal(back.values, g.values)
        write_grid_csv(str(tmp_path / "g2.csv"), back)
        assert (tmp_path / "g.csv").read_bytes() == (tmp_path / "g2.csv").read_bytes()

    def test_singular_marker_round_trip(self, tmp_path):
        g = fc.GridFunction(0.0, 1.0, np.r_[np.nan, np.ones(64)], singular_start=True)
        p = tmp_path / "s.csv"
        write_grid_csv(str(p), g)
        assert p.read_text().splitlines()[1] == "0,sing"
        back = read_grid_csv(str(p))
        assert back.singular_start
        assert np.array_equal(back.values[1:], g.values[1:])

    @pytest.mark.parametrize(
        "content",
        [
            "time,value\n0,1\n1,2\n",          # wrong header
            "t,value\n0,1\n0.5,2\n0.7,3\n",     # non-uniform spacing
            "t,value\n0,1\n0.5,sing\n1,2\n",    # marker not on the first row
            "t,value\n0,1\n0.5,inf\n1,2\n",     # non-finite value
            "t,value\n0,1\n",                    # too short
            "t,value\n1,1\n0,2\n",               # decreasing t
            "t,value\n0,1,9\n1,2\n",             # too many columns
        ],
    )
    def test_malformed_files_exit_3(self, tmp_path, content, capsys):
        p = tmp_path / "bad.csv"
        p.write_text(content)
        code = run_cli("transform", "--input", str(p), "--op", "J",
                       "--alpha", "0.5", "--output", str(tmp_path / "o.csv"))
        assert code == 3
        assert capsys.readouterr().err.startswith("fraccalc: error:")


class TestTransformCommand:
    def test_derivative_of_sqrt(self, tmp_path):
        out = tmp_path / "d.csv"
        assert run_cli("transform", "--fn", "power:p=0.5", "--op", "D",
                       "--alpha", "0.5", "--output", str(out)) == 0
        g = read_grid_csv(str(out))
        assert g.n == 1025  # default sampling
        assert abs(g.values[-1] - GAMMA_3_2) <= 1e-3

    def test_caputo_of_constant_is_zero(self, tmp_path):
        out = tmp_path / "c.csv"
        assert run_cli("transform", "--fn", "constant:c=7", "--op", "cD",
                       "--alpha", "0.4", "--n", "257", "--output", str(out)) == 0
        assert np.all(read_grid_csv(str(out)).values == 0.0)

    def test_order_zero_identity_bytes(self, tmp_path):
        src = tmp_path / "in.csv"
        dst = tmp_path / "out.csv"
        assert run_cli("transform", "--fn", "power:p=0.5", "--op", "D",
                       "--alpha", "0.5", "--n", "257", "--output", str(src)) == 0
        assert run_cli("transform", "--input", str(src), "--op", "J",
                       "--alpha", "0", "--output", str(dst)) == 0
        assert src.read_bytes() == dst.read_bytes()

    def test_singular_output_then_reintegration(self, tmp_path):
        marked = tmp_path / "m.csv"
        assert run_cli("transform", "--fn", "constant", "--op", "D",
                       "--alpha", "0.5", "--n", "257", "--output", str(marked)) == 0
        assert marked.read_text().splitlines()[1] == "0,sing"
        # J^0.5 of the marked data exists (integrable singularity) and should
        # land back near the constant 1.
        out = tmp_path / "r.csv"
        assert run_cli("transform", "--input", str(marked), "--op", "J",
                       "--alpha", "0.5", "--output", str(out)) == 0
        g = read_grid_csv(str(out))
        assert not g.singular_start
        # Frozen profile: 5.1e-3 at node 8 decaying to 1.6e-3 by node 64.
        assert np.max(np.abs(g.values[8:] - 1.0)) <= 6e-3
        assert np.max(np.abs(g.values[64:] - 1.0)) <= 2e-3

    def test_caputo_from_csv_uses_first_row(self, tmp_path):
        src = tmp_path / "f.csv"
        t = np.linspace(0.0, 1.0, 257)
        write_grid_csv(str(src), fc.GridFunction(0.0, 1.0, np.sqrt(t) + 3.0))
        out = tmp_path / "o.csv"
        assert run_cli("transform", "--input", str(src), "--op", "cD",
                       "--alpha", "0.5", "--output", str(out)) == 0
        g = read_grid_csv(str(out))
        assert np.max(np.abs(g.values[8:] - GAMMA_3_2)) <= 2e-3

    def test_custom_interval(self, tmp_path):
        out = tmp_path / "o.csv"
        assert run_cli("transform", "--fn", "power:p=1,t0=1", "--op", "J",
                       "--alpha", "1", "--t0", "1", "--t1", "2",
                       "--n", "129", "--output", str(out)) == 0
        g = read_grid_csv(str(out))
        assert g.t0 == 1.0 and g.t1 == 2.0
        assert g.values[-1] == pytest.approx(0.5, abs=1e-12)

    def test_leibniz(self, tmp_path):
        out = tmp_path / "l.csv"
        assert run_cli("transform", "--fn", "power:p=0.6", "--fn2", "power:p=0.8",
                       "--op", "leibniz", "--alpha", "0.5", "--n", "257",
                       "--output", str(out)) == 0
        g = read_grid_csv(str(out))
        closed = fc.builtin("power", {"p": 1.4}).rl_derivative(0.5, g.times())
        assert np.max(np.abs(g.values[8:] - closed[8:])) <= 1.2e-4

    @pytest.mark.parametrize(
        "args",
        [
            # usage errors, exit 2
            ("transform", "--fn", "nosuch", "--op", "J", "--alpha", "0.5"),
            ("transform", "--fn", "power:p", "--op", "J", "--alpha", "0.5"),
            ("transform", "--fn", "power:p=0.5", "--op", "J", "--alpha", "0.5",
             "--fn2", "power:p=1"),
            ("transform", "--fn", "power:p=0.5", "--op", "leibniz", "--alpha", "0.5"),
            ("transform", "--fn", "power:p=0.5", "--op", "cD", "--alpha", "0.5",
             "--taylor", "a,b"),
            ("transform", "--fn", "power:p=0.5", "--op", "J", "--alpha", "0.5",
             "--method", "marchaud"),
        ],
    )
    def test_usage_errors(self, tmp_path, args):
        assert run_cli(*args, "--output", str(tmp_path / "o.csv")) == 2

    def test_sampling_flags_refused_for_csv_input(self, tmp_path):
        src = tmp_path / "in.csv"
        write_grid_csv(str(src), fc.GridFunction(0.0, 1.0, np.ones(65)))
        assert run_cli("transform", "--input", str(src), "--op", "J", "--alpha", "0.5",
                       "--n", "129", "--output", str(tmp_path / "o.csv")) == 2

    def test_csv_caputo_above_order_one_needs_taylor(self, tmp_path):
        src = tmp_path / "in.csv"
        write_grid_csv(str(src), fc.GridFunction(0.0, 1.0, np.linspace(0.0, 1.0, 65) ** 2))
        assert run_cli("transform", "--input", str(src), "--op", "cD", "--alpha", "1.3",
                       "--output", str(tmp_path / "o.csv")) == 2
        assert run_cli("transform", "--input", str(src), "--op", "cD", "--alpha", "1.3",
                       "--taylor", "0,0", "--output", str(tmp_path / "o.csv")) == 0

    def test_precondition_errors_exit_4(self, tmp_path):
        # Marchaud outside (0, 1)
        assert run_cli("transform", "--fn", "power:p=0.5", "--op", "D", "--alpha", "1.5",
                       "--method", "marchaud", "--output", str(tmp_path / "o.csv")) == 4
        # Taylor data of the wrong length for the requested order
        assert run_cli("transform", "--fn", "power:p=0.5", "--op", "cD", "--alpha", "0.5",
                       "--taylor", "0,1", "--output", str(tmp_path / "o.csv")) == 4
        # Caputo of singular-start CSV data cannot infer its Taylor value
        marked = tmp_path / "m.csv"
        assert run_cli("transform", "--fn", "constant", "--op", "D", "--alpha", "0.5",
                       "--n", "257", "--output", str(marked)) == 0
        assert run_cli("transform", "--input", str(marked), "--op", "cD", "--alpha", "0.5",
                       "--output", str(tmp_path / "o.csv")) == 4


class TestVerifyCommand:
    def test_single_check_with_prefix(self, capsys):
        assert run_cli("verify", "--suite", "check_semigroup", "--n", "257") == 0
        out = capsys.readouterr().out
        assert "[PASS] semigroup" in out
        assert "1/1 checks passed" in out

    def test_unknown_check_exits_2(self):
        assert run_cli("verify", "--suite", "nope") == 2

    def test_json_document(self, tmp_path, capsys):
        p = tmp_path / "rep.json"
        assert run_cli("verify", "--suite", "semigroup", "inversion",
                       "--n", "257", "--json", str(p)) == 0
        doc = json.loads(p.read_text())
        assert doc["schema"] == 1
        assert doc["tool_version"] == fc.__version__
        assert doc["aggregate_pass"] is True
        assert doc["config_echo"]["suite"] == ["semigroup", "inversion"]
        assert doc["config_echo"]["n"] == 257
        assert doc["config_echo"]["seed"] == 7
        assert [r["check_id"] for r in doc["reports"]] == ["semigroup", "inversion"]
        for r in doc["reports"]:
            assert r["passed"] is True

    def test_reruns_are_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            assert run_cli("verify", "--suite", "semigroup", "leibniz_rl",
                           "--n", "257", "--json", str(p)) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
