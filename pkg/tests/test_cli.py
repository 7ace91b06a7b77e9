"""Tests for CLI commands."""

import json
from pathlib import Path

from toricchow.cli import app

BENT_FUNCTION = """\
pieces:
  - {cell: 2, m: [0], l: 0}
  - {cell: 3, m: [-1], l: 0}
  - {cell: 4, m: [0], l: -1}
"""


def invoke_json(runner, args: list[str]) -> dict:
    result = runner.invoke(app, [*args, "--format", "json"])
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


def invoke_both(runner, args: list[str]) -> tuple[list[str], dict]:
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    return result.stdout.splitlines(), invoke_json(runner, args)


def table_after(lines: list[str], header: int, nrows: int) -> list[list[str]]:
    """Whitespace-split column header and rows of a matrix printed below ``lines[header]``."""
    return [line.split() for line in lines[header + 1 : header + 2 + nrows]]


class TestVersion:
    """Tests for the version command."""

    def test_version(self, runner, workdir):
        result = runner.invoke(app, ["version"])
        assert result.exit_code == 0
        assert "toricchow v" in result.stdout


class TestChowCommands:
    """Tests for the Chow group commands."""

    def test_verify_p1(self, runner, workdir):
        result = runner.invoke(app, ["verify", "--fixture", "p1:4"])
        assert result.exit_code == 0
        assert "rank formula: OK (1 + 4z)" in result.stdout
        assert "[FAIL]" not in result.stdout

    def test_chow_json(self, runner, workdir):
        data = invoke_json(runner, ["chow", "--fixture", "blp2-model", "--all"])
        assert [item["dim"] for item in data["chow"]] == [0, 3, 4, 1]
        assert data["summary"]["skeleton_sizes"] == [3, 10, 8]

    def test_text_matches_json(self, runner, workdir):
        lines, data = invoke_both(runner, ["chow", "--fixture", "blp2-model", "--all"])
        assert "CH_2: dim 4 (rank 3 on 7 generators)" in lines
        for item in data["chow"]:
            generators, relations = item["generators"], item["relations"]
            start = lines.index(
                f"CH_{item['k']}: dim {item['dim']} "
                f"(rank {item['rank']} on {len(generators)} generators)"
            )
            assert lines[start + 1].split() == ["generators:", *(generators or ["(none)"])]
            assert lines[start + 2] == "  relations:"
            if relations:
                assert table_after(lines, start + 2, len(relations)) == [generators, *relations]
                free = lines[start + 4 + len(relations)]
            else:
                assert lines[start + 3] == "    (no rows)"
                free = lines[start + 4]
            free_labels = item["free_generators"] or ["(none)"]
            assert free.split() == ["free", "generators:", *free_labels]
            for label, expression in item["expressions"].items():
                if label not in item["free_generators"]:
                    assert f"    {label} = {expression}" in lines

    def test_fiber_text_matches_json(self, runner, workdir):
        lines, data = invoke_both(runner, ["special-fiber", "--fixture", "blp2-model"])
        assert len(data["fibers"]) == 4
        for f in data["fibers"]:
            verdict = "ok" if f["holds"] else "FAILS"
            assert (
                f"  k={f['k']}: generic {f['generic']}, total {f['total']}, "
                f"special {f['special']} ({verdict})"
            ) in lines
        assert f"special fiber CH_0 from the edge incidence: dim {data['ch0_special']}" in lines

    def test_specialization_text_matches_json(self, runner, workdir):
        lines, data = invoke_both(runner, ["specialize", "--fixture", "blp2-model", "--all"])
        for sp in data["specialization"]:
            start = lines.index(f"specialization at k={sp['k']}:")
            if not sp["matrix"]:
                assert lines[start + 1] == "    (no rows)"
                continue
            expected = [
                [label, *(str(x) for x in row)] for label, row in zip(sp["rows"], sp["matrix"])
            ]
            assert table_after(lines, start, len(sp["matrix"])) == [sp["columns"], *expected]

    def test_output_is_deterministic(self, runner, workdir):
        first = runner.invoke(app, ["chow", "--fixture", "p2-model", "--all"])
        second = runner.invoke(app, ["chow", "--fixture", "p2-model", "--all"])
        assert first.exit_code == 0
        assert first.stdout == second.stdout

    def test_k_out_of_range(self, runner, workdir):
        for k in ("5", "-1"):
            data = invoke_json(runner, ["chow", "--fixture", "p1:2", f"--k={k}"])
            item = data["chow"][0]
            assert (item["k"], item["dim"], item["rank"]) == (int(k), 0, 0)
            assert item["generators"] == []
            assert item["relations"] == []
        result = runner.invoke(app, ["chow", "--fixture", "p1:2", "--k", "5"])
        assert result.exit_code == 0
        assert "CH_5: dim 0 (rank 0 on 0 generators)" in result.stdout

    def test_specialize_out_of_range(self, runner, workdir):
        data = invoke_json(runner, ["specialize", "--fixture", "p1:2", "--k", "7"])
        assert data["specialization"][0]["matrix"] == []

    def test_rank_poly(self, runner, workdir):
        data = invoke_json(runner, ["rank-poly", "--fixture", "blp2-model"])
        assert data["rank_polynomial"]["polynomial"] == "1 + 4z + 3z^2"
        assert data["rank_polynomial"]["coefficients"] == [1, 4, 3, 0]

    def test_generic_fiber(self, runner, workdir):
        data = invoke_json(runner, ["generic-fiber", "--fixture", "p2-model"])
        assert [f["generic"] for f in data["fibers"]] == [0, 1, 1, 1]
        assert all(f["holds"] for f in data["fibers"])

    def test_special_fiber(self, runner, workdir):
        data = invoke_json(runner, ["special-fiber", "--fixture", "p2-model"])
        assert [f["special"] for f in data["fibers"]][:3] == [1, 2, 2]
        assert data["ch0_special"] == 1

    def test_specialize(self, runner, workdir):
        data = invoke_json(runner, ["specialize", "--fixture", "p1-half", "--k", "1"])
        assert data["specialization"][0]["matrix"] == [[1], [2], [1]]

    def test_p2_model_warning(self, runner, workdir):
        result = runner.invoke(app, ["chow", "--fixture", "p2-model", "--k", "1"])
        assert result.exit_code == 0
        assert "p2-model: the rank-one CH_1" in result.stdout

    def test_matrix_limit_from_environment(self, runner, workdir, monkeypatch):
        monkeypatch.setenv("TORICHOW_TEXT_MATRIX_LIMIT", "1")
        result = runner.invoke(app, ["chow", "--fixture", "p1:3", "--k", "1"])
        assert result.exit_code == 0
        assert "(2 x 5 matrix elided; use --format json)" in result.stdout


class TestNonRegularInput:
    """Tests for refusing and forcing non-regular complexes."""

    def test_refused(self, runner, workdir, non_regular_file):
        result = runner.invoke(app, ["chow", "--input", str(non_regular_file)])
        assert result.exit_code == 2
        assert "not regular" in result.output

    def test_forced(self, runner, workdir, non_regular_file):
        result = runner.invoke(app, ["chow", "--input", str(non_regular_file), "--force"])
        assert result.exit_code == 0
        assert "warning: the complex is not regular" in result.stdout

    def test_check_does_not_need_regularity(self, runner, workdir, non_regular_file):
        data = invoke_json(runner, ["check", "--input", str(non_regular_file)])
        assert data["summary"]["regular"] is False
        assert data["summary"]["complete"] is True


class TestInputs:
    """Tests for choosing and validating the input complex."""

    def test_fixture_document_feeds_back(self, runner, workdir):
        result = runner.invoke(app, ["fixture", "--fixture", "p1:3"])
        assert result.exit_code == 0
        path = workdir / "p1-3.json"
        path.write_text(result.stdout)
        data = invoke_json(runner, ["chow", "--input", str(path), "--k", "1"])
        assert data["chow"][0]["dim"] == 3

    def test_neither_input_nor_fixture(self, runner, workdir):
        result = runner.invoke(app, ["chow"])
        assert result.exit_code == 1
        assert "✗" in result.output
        assert "exactly one of --input or --fixture" in result.output

    def test_both_input_and_fixture(self, runner, workdir, non_regular_file):
        result = runner.invoke(
            app, ["chow", "--input", str(non_regular_file), "--fixture", "p1:2"]
        )
        assert result.exit_code == 1
        assert "✗" in result.output

    def test_unknown_fixture(self, runner, workdir):
        result = runner.invoke(app, ["check", "--fixture", "nope"])
        assert result.exit_code == 1
        assert "unknown fixture" in result.output

    def test_missing_file(self, runner, workdir):
        result = runner.invoke(app, ["check", "--input", str(workdir / "missing.yaml")])
        assert result.exit_code == 1
        assert "no such file" in result.output

    def test_invalid_settings_file(self, runner, workdir: Path):
        (workdir / "toricchow.yaml").write_text("log_level: loud\n")
        result = runner.invoke(app, ["check", "--fixture", "p1:2"])
        assert result.exit_code == 1
        assert "Invalid settings" in result.output

    def test_seed_from_settings_file(self, runner, workdir: Path):
        (workdir / "toricchow.yaml").write_text("audit_seed: 99\n")
        data = invoke_json(runner, ["check", "--fixture", "p1:2"])
        assert data["summary"]["audit_seed"] == 99

    def test_seed_option_wins(self, runner, workdir: Path):
        (workdir / "toricchow.yaml").write_text("audit_seed: 99\n")
        data = invoke_json(runner, ["check", "--fixture", "p1:2", "--seed", "5"])
        assert data["summary"]["audit_seed"] == 5


class TestDivisorCommands:
    """Tests for the divisor commands."""

    def test_monomial_divisor(self, runner, workdir):
        data = invoke_json(runner, ["divisor", "--fixture", "p1:2", "--m", "1", "--l", "0"])
        divisor = data["divisor"]
        assert divisor["vector"] == ["-1", "1", "0", "1"]
        assert divisor["principal"] is True
        assert divisor["in_relations"] is True

    def test_piecewise_divisor(self, runner, workdir: Path):
        path = workdir / "bent.yaml"
        path.write_text(BENT_FUNCTION)
        data = invoke_json(
            runner, ["pa-divisor", "--fixture", "p1:2", "--function", str(path)]
        )
        divisor = data["divisor"]
        assert divisor["vector"] == ["0", "0", "0", "1"]
        assert divisor["principal"] is False
        assert divisor["in_relations"] is False

    def test_piecewise_divisor_bad_document(self, runner, workdir: Path):
        path = workdir / "bent.yaml"
        path.write_text("pieces:\n  - {cell: 2, m: [0], l: 0}\n")
        result = runner.invoke(
            app, ["pa-divisor", "--fixture", "p1:2", "--function", str(path)]
        )
        assert result.exit_code == 1
        assert "no affine piece" in result.output


class TestOrbits:
    """Tests for the orbits command."""

    def test_orbits_of_p2_model(self, runner, workdir):
        data = invoke_json(runner, ["orbits", "--fixture", "p2-model"])
        orbits = data["orbits"]
        assert len(orbits["cones"]) == 7
        assert len(orbits["cells"]) == 13
        assert [entry["dimension"] for entry in orbits["intersections"]] == [1]

    def test_orbits_text(self, runner, workdir):
        result = runner.invoke(app, ["orbits", "--fixture", "p2-model"])
        assert result.exit_code == 0
        assert "component intersections:" in result.stdout
