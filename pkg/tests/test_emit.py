from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from helpers import L, S, clause, leaf
from tempobench.checkers import GrammarError, check_intohylo, check_ladr, check_target, check_tptp
from tempobench.core import (
    And,
    ClauseKind,
    Formula,
    Implies,
    Leaf,
    Literal,
    Not,
    Or,
    Task,
    TemporalClause,
    clause_kind_counts,
)
from tempobench.emit import (
    EncodingMode,
    FolProblem,
    InvariantViolationError,
    MalformedTaskError,
    SolverProblem,
    UnknownVersionError,
    emit_canonical,
    emit_intohylo,
    emit_ladr,
    emit_tptp,
    encode_fol,
    goal_transform,
    parse_canonical,
    split_goal,
    task_filename,
)


def task_of(body, problem="P1", subcase=None, n=50, seed=7):
    return Task(problem, subcase, n, seed, body)


def test_standard_translation_of_liveness_clause():
    t = task_of(leaf(clause(L, 1, -2)))
    text = emit_tptp(encode_fol(t, EncodingMode.STANDARD))
    assert "?[T]: (p1(T) | ~p2(T))" in text
    assert text.count("fof(") == 1
    assert "conjecture" not in text


def test_abstraction_erases_operator():
    t = task_of(leaf(clause(S, 1)))
    text = emit_tptp(encode_fol(t, EncodingMode.ABSTRACTION))
    assert "p1" in text
    assert "![T]" not in text and "(T)" not in text


def test_implication_translates_homomorphically():
    body = Implies(leaf(clause(S, 1)), leaf(clause(L, 1)))
    t = task_of(body, problem="P7", subcase="a")
    fol = encode_fol(t, EncodingMode.STANDARD)
    assert fol.goal == "entailment"
    text = emit_tptp(fol)
    assert "fof(goal, conjecture," in text
    assert text.count("fof(") == 2  # one axiom, one conjecture


def test_tptp_satcheck_single_axiom_entailment_split():
    sat_task = task_of(leaf(clause(L, 1), clause(S, 2, 3)))
    text = emit_tptp(encode_fol(sat_task, EncodingMode.STANDARD))
    assert text.count("axiom") == 1 and "conjecture" not in text

    g = And((leaf(clause(S, 1)), leaf(clause(S, 2)), leaf(clause(L, 1, 2))))
    p7 = task_of(Implies(g, leaf(clause(L, 1, 2))), problem="P7", subcase="c")
    text = emit_tptp(encode_fol(p7, EncodingMode.STANDARD))
    assert text.count("axiom") == 3
    assert text.count("conjecture") == 1


def test_ladr_blocks():
    sat_task = task_of(leaf(clause(L, 1, -2)))
    text = emit_ladr(encode_fol(sat_task, EncodingMode.STANDARD))
    assert text.startswith("formulas(sos).")
    assert "goals" not in text
    assert "(exists T (p1(T) | -p2(T)))" in text

    p7 = task_of(
        Implies(leaf(clause(S, 1)), leaf(clause(L, 1))), problem="P7", subcase="a"
    )
    text = emit_ladr(encode_fol(p7, EncodingMode.STANDARD))
    assert text.count("formulas(goals).") == 1


def test_intohylo_operators():
    t = task_of(leaf(clause(L, 1, -2), clause(S, 3), pool=3))
    text = emit_intohylo(t)
    assert text.startswith("begin\n") and text.endswith("\nend\n")
    assert "<r1>(p1 | -p2)" in text
    assert "[r1](p3)" in text


def test_intohylo_entailment_negates():
    p7 = task_of(
        Implies(leaf(clause(S, 1)), leaf(clause(L, 1))), problem="P7", subcase="a"
    )
    text = emit_intohylo(p7)
    # satisfiability of (antecedent AND NOT consequent)
    assert "-(" in text and "[r1](p1)" in text
    sp = goal_transform(p7, "intohylo")
    assert sp.goal == "entailment"
    assert sp.strategy == "negated-sat"


def test_connective_counts_preserved(default_catalogue):
    # negating an entailment body for the modal target keeps every clause,
    # so the operator counts match the task's clause counts for all problems
    sample = [
        t for t in default_catalogue.tasks if t.n_clauses == 50
    ]  # every problem and subcase, smallest size
    assert {t.problem for t in sample} == {f"P{i}" for i in range(1, 9)}
    for t in sample:
        live, safe = clause_kind_counts(t.body)
        tptp = emit_tptp(encode_fol(t, EncodingMode.STANDARD))
        assert tptp.count("?[T]:") == live
        assert tptp.count("![T]:") == safe
        modal = emit_intohylo(t)
        assert modal.count("<r1>") == live
        assert modal.count("[r1]") == safe


def test_atom_names_order_preserving():
    t = task_of(leaf(clause(L, 3, 1, 17), pool=17))
    text = emit_tptp(encode_fol(t, EncodingMode.STANDARD))
    assert "p3(T) | p1(T) | p17(T)" in text


def test_goal_transform_classification(default_catalogue):
    by_problem = {}
    for t in default_catalogue.tasks:
        by_problem.setdefault(t.problem, t)
    for problem, t in by_problem.items():
        for target in ("tptp", "ladr", "intohylo"):
            sp = goal_transform(t, target)
            if problem in ("P7", "P8"):
                assert sp.goal == "entailment"
                expected = "negated-sat" if target == "intohylo" else "native-goal"
                assert sp.strategy == expected
            else:
                assert sp.goal == "sat-check"
                assert sp.strategy == "direct"


def test_round_trip_examples(default_catalogue):
    for t in default_catalogue.tasks[:10]:
        text = emit_canonical(t)
        assert parse_canonical(text) == t
        assert emit_canonical(parse_canonical(text)) == text


def test_parse_rejects_bad_atom_id():
    t = task_of(leaf(clause(L, 1)))
    text = emit_canonical(t).replace("[[\"L\",[1]]]", "[[\"L\",[0]]]")
    with pytest.raises(InvariantViolationError):
        parse_canonical(text)


def test_parse_rejects_duplicate_atoms():
    t = task_of(leaf(clause(L, 1, 2)))
    text = emit_canonical(t).replace("[1,2]", "[1,1]")
    with pytest.raises(InvariantViolationError):
        parse_canonical(text)


def test_parse_rejects_truncated_and_unknown_version():
    t = task_of(leaf(clause(L, 1)))
    text = emit_canonical(t)
    with pytest.raises(MalformedTaskError):
        parse_canonical(text[: len(text) // 2])
    with pytest.raises(UnknownVersionError):
        parse_canonical(text.replace('"version":1', '"version":99'))
    with pytest.raises(MalformedTaskError):
        parse_canonical('{"format":"other"}')


def test_filenames():
    t = task_of(leaf(clause(L, 1)), subcase="a", seed=0x1F)
    assert task_filename(t, "tptp") == "p1_a_0050_000000000000001f.p"
    assert task_filename(t, "ladr").endswith(".in")
    assert task_filename(t, "intohylo").endswith(".ihl")
    assert task_filename(t, "canonical").endswith(".json")


# --- property: round trip over random tasks ----------------------------------

@st.composite
def small_formulas(draw):
    pool = draw(st.integers(1, 8))
    n = draw(st.integers(1, 6))
    clauses = []
    for _ in range(n):
        atoms = draw(
            st.lists(st.integers(1, pool), unique=True, min_size=1, max_size=min(4, pool))
        )
        kind = draw(st.sampled_from([L, S]))
        clauses.append(
            TemporalClause(kind, tuple(Literal(a, draw(st.booleans())) for a in atoms))
        )
    return Leaf(Formula(tuple(clauses), pool))


def compounds():
    return st.recursive(
        small_formulas(),
        lambda inner: st.one_of(
            st.builds(Not, inner),
            st.builds(lambda a, b: And((a, b)), inner, inner),
            st.builds(lambda a, b: Or((a, b)), inner, inner),
            st.builds(Implies, inner, inner),
        ),
        max_leaves=4,
    )


@st.composite
def random_tasks(draw):
    return Task(
        draw(st.sampled_from(["P1", "P4", "P7", "P8"])),
        draw(st.one_of(st.none(), st.sampled_from(["a", "b", "x2", "len5"]))),
        draw(st.integers(1, 4000)),
        draw(st.integers(0, (1 << 64) - 1)),
        draw(compounds()),
    )


@settings(max_examples=1000, deadline=None)
@given(random_tasks())
def test_round_trip_property(task):
    text = emit_canonical(task)
    assert parse_canonical(text) == task
    assert emit_canonical(parse_canonical(text)) == text


@settings(max_examples=150, deadline=None)
@given(random_tasks())
def test_emitted_texts_pass_grammar_checks(task):
    for target in ("tptp", "ladr", "intohylo"):
        check_target(target, goal_transform(task, target).text)
    for mode in EncodingMode:
        check_tptp(emit_tptp(encode_fol(task, mode)))
        check_ladr(emit_ladr(encode_fol(task, mode)))


def test_checkers_reject_broken_inputs():
    with pytest.raises(GrammarError):
        check_tptp("fof(c1, axiom, p1 & | p2).")
    with pytest.raises(GrammarError):
        check_tptp("fof(c1, axiom, (p1 & p2)")
    with pytest.raises(GrammarError):
        check_tptp("")
    with pytest.raises(GrammarError):
        check_ladr("formulas(sos).\np1 .")
    with pytest.raises(GrammarError):
        check_ladr("formulas(bogus_list).\np1.\nend_of_list.\n")
    with pytest.raises(GrammarError):
        check_intohylo("begin p1 & end")
    with pytest.raises(GrammarError):
        check_intohylo("begin (p1) end leftover")
