"""Command-line interface: dispatch, JSON documents, exit codes."""

import json

import pytest

from igusa_zeta.cli import build_parser, load_golden_pieces, main
from igusa_zeta._golden import reference_pieces


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(argv, capsys):
    code, out = run(argv, capsys)
    return code, json.loads(out)


def test_count_subcommand(capsys):
    code, doc = run_json(
        ["count", "--poly", "x^3+y^4*z^2+z^6", "--p", "3", "--level", "1"], capsys
    )
    assert code == 0
    assert doc["schema"] == 1
    assert doc["result"]["N_i"] == 9
    assert doc["result"]["evals"] == 27
    assert doc["config"]["subcommand"] == "count"


def test_count_structured_flag(capsys):
    code, doc = run_json(
        ["count", "--poly", "x^3+y^4*z^2+z^6", "--p", "3", "--level", "2",
         "--structured"], capsys
    )
    assert code == 0 and doc["result"]["N_i"] == 171


def test_zeta_subcommand(capsys):
    code, doc = run_json(["zeta", "--poly", "x^2", "--p", "5", "--domain", "any"], capsys)
    assert code == 0
    assert doc["result"]["text_ut"] == "4*u/(1 - u*t^2)"
    assert doc["result"]["text_qs"] == "4*q^{-1}/(1 - q^{-1-2s})"
    assert doc["result"]["ratfun"]["den"] == [[1, 2, 1]]


def test_zeta_domain_and_char(capsys):
    code, doc = run_json(
        ["zeta", "--poly", "x", "--p", "3", "--domain", "unit", "--char-exp", "1"],
        capsys,
    )
    assert code == 0
    # v-term of a unit-restricted linear polynomial under an order-2
    # character: chi(1) + chi(2) = 0
    assert doc["result"]["ratfun"]["num"] == []


def test_hybrid_pieces(capsys):
    code, doc = run_json(
        ["hybrid", "--p", "3", "--k", "3", "--l", "2", "--t", "1",
         "--emit", "pieces"], capsys
    )
    assert code == 0
    assert sorted(doc["result"]["pieces"]) == [f"A{i}" for i in range(1, 8)]
    assert doc["result"]["diagonal"]["alpha"] == 2


def test_hybrid_poles(capsys):
    code, doc = run_json(
        ["hybrid", "--p", "3", "--k", "3", "--l", "2", "--emit", "poles"], capsys
    )
    assert code == 0
    assert {(p["re"], p["period"]) for p in doc["result"]["poles"]} == {
        ("-1", 1), ("-2/3", 6), ("-7/12", 12), ("-5/6", 6),
    }


def test_newton_subcommand(capsys):
    code, doc = run_json(
        ["newton", "--poly", "x^2 + y^3", "--p", "5", "--gnd-bound", "1"], capsys
    )
    assert code == 0
    assert [[3, 2], 6] in [[f[0], f[1]] for f in doc["result"]["facets"]]
    assert {"re": "-5/6", "period": 6, "source": "facet (3, 2)"} in doc["result"]["poles"]
    assert doc["result"]["gnd"]["status"] == "non_degenerate"


def test_validation_exit_code(capsys):
    code, _ = run(["hybrid", "--p", "3", "--k", "2", "--l", "2"], capsys)
    assert code == 2
    code, _ = run(["zeta", "--poly", "x/y", "--p", "3"], capsys)
    assert code == 2


def test_budget_exit_code(capsys):
    code, _ = run(
        ["count", "--poly", "x^3+y^4*z^2+z^6", "--p", "3", "--level", "9",
         "--budget", "1000"], capsys
    )
    assert code == 3


def test_deterministic_output_modulo_ms(tmp_path, capsys):
    docs = []
    out = tmp_path / "run.json"
    for _ in range(2):
        code, _ = run(
            ["zeta", "--poly", "x^2+y^3", "--p", "3", "--out", str(out)], capsys
        )
        assert code == 0
        doc = json.loads(out.read_text())
        doc.pop("ms")
        docs.append(doc)
    assert docs[0] == docs[1]


def test_check_example(capsys):
    code, out = run(["check-example", "--level", "1"], capsys)
    assert code == 0
    assert "A2       pass" in out
    assert "oracle supports computed" in out
    assert "overall: PASS" in out


def test_check_example_json(tmp_path, capsys):
    out = tmp_path / "doc.json"
    code, _ = run(["check-example", "--level", "1", "--out", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    variants = doc["result"]["variants"]
    assert variants["1"]["pieces_match_reference"]["A2"] is True
    assert variants["1"]["pieces_match_reference"]["A6"] is False
    assert variants["1"]["escalations"]["A6"]["oracle_supports"] == "computed"
    assert doc["result"]["passed"] is True


def test_golden_file_matches_constructors():
    shipped = load_golden_pieces()
    built = reference_pieces()
    assert set(shipped) == set(built)
    for label in built:
        assert shipped[label] == built[label]


def test_parser_rejects_unknown_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate"])
