"""Command-line behavior: output, warnings and exit codes."""

import pytest

from cplogic import corpus
from cplogic.cli import main


@pytest.fixture
def files(tmp_path):
    """Corpus files written to disk for the CLI to read."""
    out = {}
    for name in (
        "suzy_billy.cpl", "suzy_billy_suzy_first.story",
        "forest_conj.cpl", "hall_right.cpl",
        "bogus_prevention.cpl", "bogus_prevention_coh_first.story",
    ):
        path = tmp_path / name
        path.write_text(corpus.read_text(name), encoding="utf-8")
        out[name] = str(path)
    return out


class TestValidate:
    def test_lists_laws_with_labels(self, files, capsys):
        assert main(["validate", files["suzy_billy.cpl"]]) == 0
        out = capsys.readouterr().out
        assert "r1" in out and "r2" in out and "2 laws" in out

    def test_double_negation_loop_exits_2_with_witness(self, tmp_path, capsys):
        path = tmp_path / "loop.cpl"
        path.write_text("p:0.5 <- ~q.\nq:0.5 <- ~p.\n", encoding="utf-8")
        assert main(["validate", str(path)]) == 2
        err = capsys.readouterr().err
        assert "double-negation-loop" in err and "p" in err and "q" in err

    def test_malformed_probability_exits_1(self, tmp_path, capsys):
        path = tmp_path / "bad.cpl"
        path.write_text("a:1.2.\n", encoding="utf-8")
        assert main(["validate", str(path)]) == 1

    def test_missing_file_exits_1(self, tmp_path):
        assert main(["validate", str(tmp_path / "nope.cpl")]) == 1


class TestProb:
    def test_exact_rational_with_decimal(self, files, capsys):
        code = main([
            "prob", files["suzy_billy.cpl"],
            "--query", "shatters",
            "--context", "throws_suzy,throws_billy",
        ])
        assert code == 0
        assert "49/50 (0.98)" in capsys.readouterr().out

    def test_constant_query(self, files, capsys):
        assert main(["prob", files["suzy_billy.cpl"], "--query", "true"]) == 0
        assert capsys.readouterr().out.strip() == "1 (1)"

    def test_lone_match_cannot_burn(self, tmp_path, capsys):
        path = tmp_path / "forest.cpl"
        path.write_text(corpus.read_text("forest_conj.cpl"), encoding="utf-8")
        code = main(["prob", str(path), "--query", "burn", "--context", "match1"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "0 (0)"

    def test_symbolic_probabilities_warn(self, files, capsys):
        assert main(["prob", files["bogus_prevention.cpl"], "--query", "death"]) == 0
        captured = capsys.readouterr()
        assert "1/4" in captured.out
        assert "placeholder" in captured.err

    def test_unknown_atom_exits_2(self, files):
        assert main(["prob", files["suzy_billy.cpl"], "--query", "zz_missing"]) == 2


class TestTree:
    def test_policies_change_shape_not_distribution(self, files, capsys):
        assert main([
            "tree", files["suzy_billy.cpl"],
            "--context", "throws_suzy,throws_billy", "--policy", "r1,r2",
        ]) == 0
        first = capsys.readouterr().out
        assert main([
            "tree", files["suzy_billy.cpl"],
            "--context", "throws_suzy,throws_billy", "--policy", "r2,r1",
        ]) == 0
        second = capsys.readouterr().out
        assert first.splitlines()[1].strip().startswith("r1")
        assert second.splitlines()[1].strip().startswith("r2")
        footer = "distribution over final states:"
        assert first.split(footer)[1] == second.split(footer)[1]
        assert "49/50" in first

    def test_dot_output(self, files, capsys):
        assert main([
            "tree", files["suzy_billy.cpl"],
            "--context", "throws_suzy,throws_billy", "--dot",
        ]) == 0
        out = capsys.readouterr().out
        assert out.startswith("digraph")
        assert out.count("->") == 6

    def test_empty_theory_tree(self, tmp_path, capsys):
        path = tmp_path / "empty.cpl"
        path.write_text("", encoding="utf-8")
        assert main(["tree", str(path)]) == 0
        assert "{}" in capsys.readouterr().out

    def test_unknown_policy_label_exits_2(self, files):
        assert main([
            "tree", files["suzy_billy.cpl"], "--policy", "zz",
        ]) == 2


class TestCause:
    def test_first_hit_reported_as_cause_with_witness(self, files, capsys):
        code = main([
            "cause", files["suzy_billy.cpl"],
            "--story", files["suzy_billy_suzy_first.story"],
            "--cause", "throws_suzy", "--effect", "shatters", "--explain",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "verdict: CAUSE" in out
        assert "shatters <- throws_suzy" in out

    def test_preempted_thrower_not_a_cause(self, files, capsys):
        code = main([
            "cause", files["suzy_billy.cpl"],
            "--story", files["suzy_billy_suzy_first.story"],
            "--cause", "throws_billy", "--effect", "shatters",
        ])
        assert code == 0
        assert "verdict: NOT-CAUSE" in capsys.readouterr().out

    def test_needless_antidote_not_a_cause(self, files, capsys):
        code = main([
            "cause", files["bogus_prevention.cpl"],
            "--story", files["bogus_prevention_coh_first.story"],
            "--cause", "antidote", "--effect", "~death",
        ])
        assert code == 0
        assert "verdict: NOT-CAUSE" in capsys.readouterr().out

    def test_self_cause_exits_3(self, files):
        assert main([
            "cause", files["suzy_billy.cpl"],
            "--story", files["suzy_billy_suzy_first.story"],
            "--cause", "shatters", "--effect", "shatters",
        ]) == 3


class TestCauses:
    def test_two_throwers_possible_only(self, files, capsys):
        code = main([
            "causes", files["suzy_billy.cpl"],
            "--outcome", "throws_suzy,throws_billy,shatters",
            "--effect", "shatters",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "branches matching the outcome: 6" in out
        for line in out.splitlines():
            if line.startswith("throws_"):
                assert "possible" in line and "3/6" in line

    def test_self_defusing_threat_not_possible(self, files, capsys):
        code = main([
            "causes", files["hall_right.cpl"],
            "--outcome", "a,b,c,d,e", "--effect", "e", "--candidates", "c,a",
        ])
        assert code == 0
        out = capsys.readouterr().out
        rows = {line.split()[0]: line for line in out.splitlines() if line and line[0] in "ac"}
        assert "not-possible" in rows["c"]
        assert "certain" in rows["a"]

    def test_unreachable_outcome_warns(self, files, capsys):
        code = main([
            "causes", files["suzy_billy.cpl"],
            "--outcome", "throws_suzy,shatters",
            "--effect", "shatters",
            "--context", "throws_suzy,throws_billy",
        ])
        assert code == 0
        captured = capsys.readouterr()
        assert "branches matching the outcome: 0" in captured.out
        assert "warning" in captured.err
