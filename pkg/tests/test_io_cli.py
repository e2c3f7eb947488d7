from __future__ import annotations

import pytest
from builders import c5, claw, models, net
from hypothesis import given, settings

from clawfree.cli import BENCH_HEADER, EXIT_CLAW, EXIT_INPUT, main
from clawfree.io import ParseError, parse, render
from clawfree.oracle import GenModel, gen_instance


class TestParse:
    def test_k2(self):
        g = parse("p mwss 2 1\ne 1 2\n")
        assert g.edges() == [(0, 1)] and g.weight == [1, 1]
        assert g.tags_of(g.alive) == [1, 2]

    def test_comments_and_weights(self):
        g = parse("c hello\n\np mwss 3 0\nv 2 7\n")
        assert g.weight == [1, 7, 1] and g.edges() == []

    def test_negative_weight_reports_line(self):
        with pytest.raises(ParseError) as info:
            parse("p mwss 2 0\nv 1 -3\n")
        assert info.value.line == 2

    @pytest.mark.parametrize(
        "text, line",
        [
            ("p mwss 2 2\ne 1 2\ne 1 2\n", 3),
            ("p mwss 2 1\ne 1 3\n", 2),
            ("p mwss 2 0\np mwss 2 0\n", 2),
            ("e 1 2\np mwss 2 1\n", 1),
            ("p mwss 2 1\ne 2 1\n", 2),
            ("p mwss 2 1\ne 1 1\n", 2),
            ("p mwss 2 0\nv 1 2\nv 1 3\n", 3),
            ("p mwss 2 0\nx 1\n", 2),
            ("p mwss 2 0\nv 1 a\n", 2),
            ("p graph 2 0\n", 1),
            ("p mwss 2 2\ne 1 2\n", 0),
            ("c only a comment\n", 0),
        ],
    )
    def test_malformed(self, text, line):
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.line == line

    def test_render(self):
        assert render(net([1, 2, 3, 4, 5, 6]), "net") == (
            "c net\np mwss 6 6\nv 1 1\nv 2 2\nv 3 3\nv 4 4\nv 5 5\nv 6 6\n"
            "e 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 5\ne 3 6\n"
        )


@given(models(max_n=40))
@settings(max_examples=60)
def test_round_trip(model):
    text = render(gen_instance(model))
    assert render(parse(text)) == text


def _write(tmp_path, g, name="g.txt"):
    path = tmp_path / name
    path.write_text(render(g))
    return str(path)


class TestCli:
    def test_solve_c5(self, tmp_path, capsys):
        assert main(["solve", _write(tmp_path, c5())]) == 0
        out = capsys.readouterr().out
        assert out.startswith("weight: 2\nset: ")

    def test_solve_net_certified(self, tmp_path, capsys):
        assert main(["solve", "--certify", "--ledger", _write(tmp_path, net([1, 1, 1, 5, 5, 5]))]) == 0
        out = capsys.readouterr().out
        assert out.startswith("weight: 15\nset: 4 5 6\n")
        assert "oracle: match" in out

    def test_root_instance_file(self, tmp_path, capsys):
        target = tmp_path / "root.txt"
        g = gen_instance(_line(30))
        assert main(["solve", _write(tmp_path, g), "--root-instance", str(target)]) == 0
        assert target.read_text().startswith("p root ")

    def test_claw_exit(self, tmp_path, capsys):
        assert main(["solve", _write(tmp_path, claw())]) == EXIT_CLAW
        err = capsys.readouterr().err
        assert "witness: 1 2 3 4" in err

    def test_bad_input(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("p mwss 2 1\ne 1 5\n")
        assert main(["solve", str(path)]) == EXIT_INPUT
        assert "line 2" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["solve", str(tmp_path / "absent.txt")]) == EXIT_INPUT

    def test_gen_is_deterministic(self, capsys):
        argv = ["gen", "--model", "circular", "--n", "25", "--seed", "9"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first
        assert first.startswith("c generated model=circular n=25 seed=9 weights=1..100\n")
        parse(first)

    def test_oracle(self, tmp_path, capsys):
        assert main(["oracle", _write(tmp_path, c5())]) == 0
        assert capsys.readouterr().out.startswith("weight: 2\n")

    def test_decompose_dot(self, tmp_path, capsys):
        dot = tmp_path / "g.dot"
        assert main(["decompose", _write(tmp_path, gen_instance(_line(30))), "--dot", str(dot)]) == 0
        assert capsys.readouterr().out.startswith("component 0:")
        assert dot.read_text().startswith("graph ")

    def test_bench(self, capsys):
        assert main(["bench", "--sizes", "10,20,30"]) == 0
        rows = capsys.readouterr().out.splitlines()
        assert rows[0] == BENCH_HEADER and len(rows) == 4
        assert [r.split(",")[1] for r in rows[1:]] == ["10", "20", "30"]

    def test_bad_sizes(self, capsys):
        with pytest.raises(SystemExit):
            main(["bench", "--sizes", "10,x"])

    def test_solve_is_deterministic(self, tmp_path, capsys):
        path = _write(tmp_path, gen_instance(_line(40)))
        main(["solve", path, "--ledger"])
        first = capsys.readouterr().out
        main(["solve", path, "--ledger"])
        assert capsys.readouterr().out == first


def _line(n: int) -> GenModel:
    return GenModel("line", n, 3)
