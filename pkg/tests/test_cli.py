"""Command-line behavior: outputs, determinism, exit codes."""

import json

import pytest

from branegauge.cli import main

MODELS = "models"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


class TestSchubertCommands:
    def test_order_has_eight_edges(self, capsys):
        code, report, _ = run_json(capsys, "schubert", "order", "--n", "3")
        assert code == 0
        assert report["results"]["edge_count"] == 8
        assert report["results"]["incomparable_pairs"] == [
            ["132", "213"],
            ["231", "312"],
        ]

    def test_smooth_with_witness(self, capsys):
        code, report, _ = run_json(capsys, "schubert", "smooth", "--perm", "3412")
        assert code == 0
        assert report["results"]["singular"] is True
        assert report["results"]["witness_positions"] == [1, 2, 3, 4]

    def test_closure(self, capsys):
        code, report, _ = run_json(capsys, "schubert", "closure", "--perm", "312")
        assert code == 0
        assert report["results"]["closure"] == ["123", "132", "213", "312"]

    def test_strata_verdict(self, capsys):
        code, report, _ = run_json(capsys, "schubert", "strata", "--flag3")
        assert code == 0
        results = report["results"]
        assert len(results["generators"]) == 6
        assert results["verdict"] == "at_most_one"
        assert [t["dimension"] for t in results["tower"]] == [3, 2, 1, 0]

    def test_table_output(self, capsys):
        code, out, _ = run(capsys, "--output", "table", "schubert", "order", "--n", "3")
        assert code == 0
        assert "edge_count" in out


class TestDeterminism:
    def test_byte_identical_reports(self, capsys):
        _, first, _ = run(capsys, "ym", "solve", "--model", f"{MODELS}/nilpotent_pair.json")
        _, second, _ = run(capsys, "ym", "solve", "--model", f"{MODELS}/nilpotent_pair.json")
        assert first == second


class TestComplexCommands:
    def test_gauge_solve_line_bundle(self, capsys):
        code, report, _ = run_json(
            capsys, "complex", "gauge", "solve", "--model", f"{MODELS}/line_bundle.json"
        )
        assert code == 0
        assert report["results"]["affine_dimension"] == 4
        assert report["results"]["verified"] is True

    def test_gauge_solve_obstructed_exit4(self, capsys):
        code, report, _ = run_json(
            capsys, "complex", "gauge", "solve", "--model", f"{MODELS}/obstructed.json"
        )
        assert code == 4
        assert report["results"]["exists"] is False

    def test_gauge_dimension_matches_hom(self, capsys):
        code, solve, _ = run_json(
            capsys, "complex", "gauge", "solve", "--model", f"{MODELS}/three_term.json"
        )
        assert code == 0
        code, hom, _ = run_json(
            capsys, "complex", "hom", "--model", f"{MODELS}/three_term.json"
        )
        assert code == 0
        assert solve["results"]["affine_dimension"] == hom["results"]["h0_rank"]

    def test_cohomology_acyclic(self, capsys):
        code, report, _ = run_json(
            capsys, "complex", "cohomology", "--model", f"{MODELS}/acyclic_pair.json"
        )
        assert code == 0
        assert report["results"]["ranks"] == {"0": 0, "1": 0}

    def test_rank_jump_exit3(self, capsys, tmp_path):
        model = {
            "ring": {"n_vars": 1, "trunc_degree": 3},
            "modules": [{"index": 0, "rank": 1}, {"index": 1, "rank": 1}],
            "differentials": [{"from_index": 0, "matrix": [["x1"]]}],
            "eval_points": [["0"], ["1"]],
        }
        path = tmp_path / "jump.json"
        path.write_text(json.dumps(model))
        code, _, err = run(capsys, "complex", "cohomology", "--model", str(path))
        assert code == 3
        assert "rank" in err.lower()

    def test_parse_error_exit2(self, capsys, tmp_path):
        model = {
            "ring": {"n_vars": 1, "trunc_degree": 3},
            "modules": [{"index": 0, "rank": 1}],
            "differentials": [],
            "base_connections": [
                {"index": 0, "one_form_matrix": [[["x9"]]]}
            ],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(model))
        code, _, err = run(capsys, "complex", "cohomology", "--model", str(path))
        assert code == 2
        assert "x9" in err or "col" in err


class TestYmCommands:
    def test_polynomial_nilpotent(self, capsys):
        code, report, _ = run_json(
            capsys, "ym", "polynomial", "--model", f"{MODELS}/nilpotent_pair.json"
        )
        assert code == 0
        results = report["results"]
        assert results["coefficients"] == {"2,2": "2"}
        assert results["degree"] == 4
        assert all(d <= 3 for d in results["gradient_degrees"])

    def test_solve_nilpotent_nonisolated(self, capsys):
        code, report, _ = run_json(
            capsys, "ym", "solve", "--model", f"{MODELS}/nilpotent_pair.json"
        )
        assert code == 0
        cs = report["results"]["critical_set"]
        assert cs["nonisolated"] is True
        assert cs["bezout_bound"] == 9
        assert cs["witnesses"]

    def test_value_flat_zero(self, capsys):
        code, report, _ = run_json(
            capsys, "ym", "value", "--model", f"{MODELS}/line_bundle.json"
        )
        assert code == 0
        assert report["results"]["value"] == "0"

    def test_value_acyclic_brane_zero(self, capsys):
        code, report, _ = run_json(
            capsys, "ym", "value", "--model", f"{MODELS}/acyclic_pair.json"
        )
        assert code == 0
        assert report["results"]["value"] == "0"

    def test_check_flat_variation(self, capsys):
        code, report, _ = run_json(
            capsys, "ym", "check", "--model", f"{MODELS}/line_bundle.json",
            "--variation", "E1",
        )
        assert code == 0
        st = report["results"]["stationarity"]
        assert st["exactly_zero"] is True
        assert report["results"]["orthogonality"]["passed"] is True


class TestCheckCommand:
    def test_shipped_models_pass(self, capsys):
        for name in ("line_bundle", "nilpotent_pair", "acyclic_pair", "three_term"):
            code, report, _ = run_json(
                capsys, "check", "--model", f"{MODELS}/{name}.json"
            )
            assert code == 0, name
            assert report["results"]["all_passed"] is True

    def test_corrupted_delta_fails_with_entry(self, capsys):
        code, report, _ = run_json(
            capsys, "check", "--model", f"{MODELS}/corrupted_delta.json"
        )
        assert code == 1
        first = report["results"]["checks"][0]
        assert first["status"] == "fail"
        assert "x1" in first["detail"]

    def test_fuzz_passes(self, capsys):
        code, report, _ = run_json(capsys, "--seed", "5", "check", "--fuzz", "3")
        assert code == 0
        assert report["results"]["all_passed"] is True
        assert len(report["results"]["fuzz_runs"]) == 3
