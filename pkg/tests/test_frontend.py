import json
import random
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings

from generators import concepts, random_ontology, random_tbox_ontology
from paralc import answer, load_ontology, para_entails, parse_concept, parse_ontology, parse_query
from paralc.frontend import ParseError, ReservedIdentifierError, emit_trace, is_faithful, recompute_closed
from paralc.frontend.cli import EXIT_FALSE, EXIT_LIMIT, EXIT_TRUE, EXIT_USAGE, run_cli
from paralc.reasoner import Consistency, Instance, Subsumes

ONTOLOGIES = Path(__file__).resolve().parent.parent / "ontologies"
EXAMPLE = str(ONTOLOGIES / "example1.onto")

# -- parser -------------------------------------------------------------------


@given(concepts())
@settings(max_examples=300, deadline=None)
def test_concept_round_trip(c):
    assert parse_concept(str(c)) == c


def test_ontology_round_trip():
    rng = random.Random(41)
    for i in range(100):
        o = random_tbox_ontology(rng) if i % 2 else random_ontology(rng)
        assert parse_ontology(str(o)) == o


def test_precedence():
    assert parse_concept("not A or B and C") == parse_concept("(not A) or (B and C)")
    assert parse_concept("some R . A and B") == parse_concept("(some R . A) and B")
    assert parse_concept("A or B or C") == parse_concept("(A or B) or C")


def test_queries():
    assert isinstance(parse_query("consistent"), Consistency)
    assert isinstance(parse_query("A subsumedby B"), Subsumes)
    assert parse_query("(some R . A)(a)") == Instance(parse_concept("some R . A"), "a")


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("abox: A(a", 1, 10),
        ("abox: and(a) .", 1, 7),
        ("abox:\n  A(a) .\n  B(a) )", 3, 8),
        ("tbox: A subclassof . abox:", 1, 20),
    ],
)
def test_parse_errors_have_positions(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_ontology(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_reserved_identifiers():
    with pytest.raises(ReservedIdentifierError):
        parse_ontology("abox: A(_fresh0) .")
    with pytest.raises(ReservedIdentifierError):
        parse_concept("_A")


def test_comments_ignored():
    o = parse_ontology("# header\nabox:  # section\n  A(a) . # fact\n")
    assert o == parse_ontology("abox: A(a) .")


# -- cli ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv, code",
    [
        (["check", EXAMPLE, "--query", "Fly(tweety)"], EXIT_TRUE),
        (["check", EXAMPLE, "--query", "Haswing(tweety)"], EXIT_FALSE),
        (["check", EXAMPLE, "--query", "Haswing(tweety)", "--mode", "classical"], EXIT_TRUE),
        (["consistent", EXAMPLE], EXIT_FALSE),
        (["subsumes", str(ONTOLOGIES / "birds_tbox.onto"), "--sub", "Penguin", "--sup", "Bird"], EXIT_TRUE),
        (["check", EXAMPLE, "--query", "Fly(tweety"], EXIT_USAGE),
        (["check", "missing.onto", "--query", "A(a)"], EXIT_USAGE),
        (["frobnicate"], EXIT_USAGE),
        (["consistent", str(ONTOLOGIES / "cyclic.onto"), "--max-nodes", "1"], EXIT_LIMIT),
    ],
)
def test_cli_exit_codes(argv, code, capsys):
    assert run_cli(argv) == code


def test_cli_prints_verdict(capsys):
    run_cli(["check", EXAMPLE, "--query", "not Fly(tweety)"])
    assert capsys.readouterr().out.strip() == "ENTAILED"
    run_cli(["consistent", str(ONTOLOGIES / "cyclic.onto")])
    assert capsys.readouterr().out.strip() == "CONSISTENT"


def test_cli_as_subprocess(tmp_path):
    out = tmp_path / "t.json"
    cmd = [sys.executable, "-m", "paralc.frontend.cli", "check", EXAMPLE, "--query", "Fly(tweety)", "--trace", str(out)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "ENTAILED"
    doc = json.loads(out.read_text())
    assert doc["verdict"] and doc["exhaustive"] and is_faithful(doc)


# -- traces -------------------------------------------------------------------


@pytest.mark.parametrize("query", ["Fly(tweety)", "Haswing(tweety)", "(some HasFood . Fish)(tweety)"])
def test_exhaustive_trace_is_faithful(query):
    o = load_ontology(EXAMPLE)
    doc = emit_trace(answer(o, parse_query(query), exhaustive=True))
    assert is_faithful(doc)
    assert recompute_closed(doc) == doc["closed"] == doc["verdict"]
    # branches with a second-class conflict stop early, so the count varies
    assert 1 <= len(doc["branches"]) <= 8


def test_trace_layout():
    o = load_ontology(EXAMPLE)
    doc = emit_trace(answer(o, parse_query("Haswing(tweety)"), exhaustive=True))
    assert doc["mode"] == "para" and doc["query"] == "Haswing(tweety)"
    br = doc["branches"][0]
    assert set(br) >= {"id", "classification", "settled", "nodes", "edges", "conflicts"}
    node = br["nodes"][0]
    assert set(node) >= {"id", "root", "parent", "blocked", "blocked_by", "label"}
    json.dumps(doc)


def test_tampered_trace_is_caught():
    o = load_ontology(EXAMPLE)
    doc = emit_trace(answer(o, parse_query("Fly(tweety)"), exhaustive=True))
    doc["branches"][0]["classification"] = "open"
    assert not is_faithful(doc)


def test_partial_trace():
    o = load_ontology(EXAMPLE)
    doc = emit_trace(para_entails(o, parse_query("Fly(tweety)")))
    assert not doc["exhaustive"] and is_faithful(doc)
    with pytest.raises(ValueError):
        recompute_closed(doc)


def test_cli_jobs_gives_the_same_trace(tmp_path):
    one, two = tmp_path / "1.json", tmp_path / "2.json"
    base = ["check", EXAMPLE, "--query", "Haswing(tweety)", "--trace"]
    assert run_cli(base + [str(one)]) == run_cli(base + [str(two), "--jobs", "2"]) == EXIT_FALSE
    assert json.loads(one.read_text()) == json.loads(two.read_text())
    assert run_cli(base + [str(two), "--jobs", "0"]) == EXIT_USAGE


def test_jobs_with_random_order_rejected():
    o = load_ontology(EXAMPLE)
    with pytest.raises(ValueError):
        para_entails(o, parse_query("Fly(tweety)"), exhaustive=True, jobs=2, rng=random.Random(0))
