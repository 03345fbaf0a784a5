"""Command line front end: reports, exit codes, determinism."""

import json
import shutil

import pytest
from click.testing import CliRunner

from heartglue.cli import (CORPUS_NAMES, JobSpec, corpus_path, load_corpus,
                           main, run)
from heartglue.glue import check_sequence
from heartglue.jsonio import dump_json
from heartglue.reps import projective


@pytest.fixture()
def runner():
    return CliRunner()


def corpus(name):
    return str(corpus_path(name))


def objects_file(tmp_path, specs, name="objs.json"):
    p = tmp_path / name
    p.write_text(dump_json({"objects": specs}), encoding="utf-8")
    return str(p)


class TestExtTable:
    def test_kronecker_projectives(self, runner):
        r = runner.invoke(main, ["ext-table", corpus("kronecker"),
                                 "--window", "4"])
        assert r.exit_code == 0
        assert "Hom(1, 2[0]) = 2" in r.output
        assert "window=4" in r.output

    def test_json_report(self, runner):
        r = runner.invoke(main, ["ext-table", corpus("kronecker"),
                                 "--window", "4", "--format", "json"])
        assert r.exit_code == 0
        rep = json.loads(r.output)
        assert rep["window"] == 4
        assert rep["ok"] is True
        assert {"source": 1, "target": 2, "shift": 0, "dim": 2} \
            in rep["entries"]

    def test_custom_objects(self, runner, tmp_path):
        objs = objects_file(tmp_path, [{"type": "simple", "vertex": 2},
                                       {"type": "simple", "vertex": 1}])
        r = runner.invoke(main, ["ext-table", corpus("a2"),
                                 "--objects", objs, "--format", "json"])
        assert r.exit_code == 0
        rep = json.loads(r.output)
        assert rep["objects"] == ["simple 2", "simple 1"]
        assert {"source": 1, "target": 2, "shift": 1, "dim": 1} \
            in rep["entries"]


class TestCheckExceptional:
    def test_projectives_are_strong(self, runner):
        r = runner.invoke(main, ["check-exceptional", corpus("a3rel")])
        assert r.exit_code == 0
        assert "strong: yes" in r.output

    def test_simple_pair_fails_strongness(self, runner):
        r = runner.invoke(main, ["check-exceptional", corpus("a2"),
                                 "--objects", corpus("s1s2")])
        assert r.exit_code == 1
        assert "exceptional: yes" in r.output
        assert "strong: no" in r.output
        assert "Hom(1, 2[1]) = 1 breaks strongness" in r.output

    def test_strongness_witness_in_json(self, runner):
        r = runner.invoke(main, ["check-exceptional", corpus("a2"),
                                 "--objects", corpus("s1s2"),
                                 "--format", "json"])
        assert r.exit_code == 1
        rep = json.loads(r.output)
        assert rep["exceptional"] is True
        assert rep["strong"] is False
        assert rep["ok"] is False
        assert rep["shifted_entries"] == [{"source": 1, "target": 2,
                                           "shift": 1, "dim": 1}]

    def test_wrong_order_not_exceptional(self, runner, tmp_path):
        objs = objects_file(tmp_path, [{"type": "simple", "vertex": 1},
                                       {"type": "simple", "vertex": 2}])
        r = runner.invoke(main, ["check-exceptional", corpus("a2"),
                                 "--objects", objs, "--format", "json"])
        assert r.exit_code == 1
        rep = json.loads(r.output)
        assert rep["exceptional"] is False
        assert rep["failure"]["position"] == [2, 1]
        assert rep["failure"]["dim"] == 1


class TestGlueHearts:
    def test_tilted_staircase(self, runner):
        r = runner.invoke(main, ["glue-hearts", corpus("a3rel"),
                                 "--format", "json"])
        assert r.exit_code == 0
        rep = json.loads(r.output)
        cohs = [g["cohomology"] for g in rep["generators"]]
        assert cohs == [{"0": [0, 1, 1]},
                        {"-1": [1, 1, 0]},
                        {"-2": [1, 0, 0]}]

    def test_incompatible_objects_fail(self, runner, tmp_path):
        # reversed order is not exceptional, so gluing is refused
        objs = objects_file(tmp_path, [{"type": "simple", "vertex": 1},
                                       {"type": "simple", "vertex": 2}])
        r = runner.invoke(main, ["glue-hearts", corpus("a2"),
                                 "--objects", objs])
        assert r.exit_code == 1
        assert "failed:" in r.output


class TestDimFormula:
    def test_kronecker_headline(self, runner):
        r = runner.invoke(main, ["dim-formula", corpus("kronecker")])
        assert r.exit_code == 0
        assert "lhs=1 rhs=1 OK" in r.output
        assert "rhs = max(left=0, right=0, rel+1=1)" in r.output

    def test_three_term_chain(self, runner):
        r = runner.invoke(main, ["dim-formula", corpus("a3rel"),
                                 "--format", "json"])
        assert r.exit_code == 0
        rep = json.loads(r.output)
        assert rep["pieces"] == 3
        assert rep["lhs"] == rep["rhs"]

    def test_needs_two_objects(self, runner, tmp_path):
        objs = objects_file(tmp_path, [{"type": "projective", "vertex": 1}])
        r = runner.invoke(main, ["dim-formula", corpus("kronecker"),
                                 "--objects", objs])
        assert r.exit_code == 2
        assert "at least two objects" in r.output


class TestYonedaOracle:
    def test_default_objects(self, runner):
        r = runner.invoke(main, ["yoneda-oracle", corpus("a3rel"),
                                 "--format", "json"])
        assert r.exit_code == 0
        rep = json.loads(r.output)
        assert rep["ok"] is True
        assert rep["classes_checked"] == 5
        assert all(e["round_trip"] for e in rep["entries"])

    def test_rejects_shifted_objects(self, runner, tmp_path):
        objs = objects_file(tmp_path, [
            {"type": "shift", "by": 1, "of": {"type": "simple",
                                              "vertex": 1}},
            {"type": "simple", "vertex": 2}])
        r = runner.invoke(main, ["yoneda-oracle", corpus("a2"),
                                 "--objects", objs])
        assert r.exit_code == 2
        assert "plain modules" in r.output


class TestBondalCheck:
    def test_kronecker(self, runner):
        r = runner.invoke(main, ["bondal-check", corpus("kronecker"),
                                 "--format", "json"])
        assert r.exit_code == 0
        rep = json.loads(r.output)
        assert rep["end_dim"] == 4
        assert rep["algebra_dim"] == 4
        assert len(rep["arrows"]) == 2
        assert rep["relations"] == []
        assert rep["faithful_ok"] and rep["table_ok"] and rep["ok"]

    def test_commsquare_relation_recovered(self, runner):
        r = runner.invoke(main, ["bondal-check", corpus("commsquare")])
        assert r.exit_code == 0
        assert "relation: -1*x1.x3 + 1*x2.x4 = 0" in r.output

    def test_non_strong_sequence_refused(self, runner):
        r = runner.invoke(main, ["bondal-check", corpus("a2"),
                                 "--objects", corpus("s1s2")])
        assert r.exit_code == 1
        assert "failed:" in r.output


class TestRemarkCounterexamples:
    def test_both_cases_reproduce(self, runner):
        r = runner.invoke(main, ["remark-counterexamples",
                                 "--format", "json"])
        assert r.exit_code == 0
        rep = json.loads(r.output)
        assert rep["ok"] is True
        names = [c["name"] for c in rep["cases"]]
        assert names == ["kronecker-shifted-pair", "branching-three-term"]
        first, second = rep["cases"]
        assert first["space_dim"] == 2
        assert first["factoring_dim"] == 0
        assert first["basis_classes_factor"] == [False, False]
        assert first["zero_class_factors"] is True
        assert second["space_dim"] == 1
        assert second["class_factors"] is False

    def test_text_says_reproduced(self, runner):
        r = runner.invoke(main, ["remark-counterexamples"])
        assert r.exit_code == 0
        assert r.output.count("reproduced") == 2
        assert "NOT reproduced" not in r.output


class TestPlumbing:
    def test_parse_error_is_line_anchored(self, runner, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text('{"vertices": 2,\n "arrows": }\n', encoding="utf-8")
        r = runner.invoke(main, ["ext-table", str(p)])
        assert r.exit_code == 2
        assert "broken.json:2" in r.output

    def test_missing_file(self, runner):
        r = runner.invoke(main, ["ext-table", "/no/such/file.json"])
        assert r.exit_code == 2

    def test_reports_are_deterministic(self, runner):
        args = ["glue-hearts", corpus("a3rel"), "--format", "json"]
        assert runner.invoke(main, args).output \
            == runner.invoke(main, args).output
        args = ["bondal-check", corpus("a3"), "--format", "text"]
        assert runner.invoke(main, args).output \
            == runner.invoke(main, args).output

    def test_json_reports_round_trip(self, runner):
        for cmd in ("ext-table", "check-exceptional", "glue-hearts",
                    "dim-formula", "yoneda-oracle", "bondal-check"):
            r = runner.invoke(main, [cmd, corpus("a3rel"),
                                     "--format", "json"])
            assert dump_json(json.loads(r.output)) == r.output, cmd

    def test_out_writes_file_and_quiets_stdout(self, runner, tmp_path):
        out = tmp_path / "report.json"
        r = runner.invoke(main, ["dim-formula", corpus("kronecker"),
                                 "--format", "json", "--out", str(out)])
        assert r.exit_code == 0
        assert r.output == ""
        rep = json.loads(out.read_text(encoding="utf-8"))
        assert rep["lhs"] == rep["rhs"] == 1

    def test_run_api_matches_cli(self, runner):
        job = JobSpec(command="dim-formula",
                      algebra_path=corpus("kronecker"), output="text")
        code, rendered = run(job)
        assert code == 0
        assert rendered == runner.invoke(
            main, ["dim-formula", corpus("kronecker")]).output

    def test_unknown_command_via_run(self):
        code, rendered = run(JobSpec(command="make-coffee"))
        assert code == 2
        assert "unknown command" in rendered

    def test_window_must_be_positive(self):
        code, rendered = run(JobSpec(command="ext-table",
                                     algebra_path=corpus("a2"), window=0))
        assert code == 2


class TestCorpus:
    def test_exactly_five_algebras(self):
        algs = load_corpus()
        assert sorted(algs) == sorted(CORPUS_NAMES)
        assert len(algs) == 5
        assert {n: a.dim for n, a in algs.items()} == {
            "a2": 3, "a3": 6, "a3rel": 5, "commsquare": 9, "kronecker": 4}

    def test_projectives_are_strong_everywhere(self):
        for name, alg in load_corpus().items():
            ps = [projective(alg, i)
                  for i in range(1, alg.vertex_count + 1)]
            es = check_sequence(ps, strong=True)
            assert es.strong, name

    def test_directory_override(self, runner, tmp_path, monkeypatch):
        for name in CORPUS_NAMES:
            shutil.copy(corpus_path(name), tmp_path)
        monkeypatch.setenv("HEARTGLUE_CORPUS_DIR", str(tmp_path))
        algs = load_corpus()
        assert sorted(algs) == sorted(CORPUS_NAMES)
        assert str(corpus_path("a2")).startswith(str(tmp_path))
        # remark-counterexamples reads the extra branching quiver too
        shutil.copy(_bundled("branching.json"), tmp_path)
        r = runner.invoke(main, ["remark-counterexamples"])
        assert r.exit_code == 0


def _bundled(filename):
    import heartglue.cli as cli
    return str(cli.Path(cli.__file__).parent / "corpus" / filename)
