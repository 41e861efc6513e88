from __future__ import annotations

import pytest

from helpers import L, S
from tempobench.core import ClauseKind, clause_length_histogram
from tempobench.emit import emit_canonical
from tempobench.core import Leaf, Task
from tempobench.gen import (
    BASE_LENGTHS,
    GenerationError,
    GroupSpec,
    gen_formula,
    group_counts_uniform,
    sample_clause,
)
from tempobench.rng import RandomStream


def test_sample_clause_fully_forced():
    c = sample_clause(1, S, 25, RandomStream(1), required_atoms=[7])
    assert c.kind is S
    assert [lit.atom for lit in c.literals] == [7]


def test_sample_clause_deterministic():
    a = sample_clause(3, L, 4, RandomStream(1234))
    b = sample_clause(3, L, 4, RandomStream(1234))
    assert a == b


def test_sample_clause_pigeonhole_rejected():
    with pytest.raises(GenerationError):
        sample_clause(10, L, 5, RandomStream(0))


def test_sample_clause_distinct_atoms_and_required_present():
    for seed in range(30):
        c = sample_clause(6, L, 10, RandomStream(seed), required_atoms=[2, 9])
        atoms = [lit.atom for lit in c.literals]
        assert len(set(atoms)) == 6
        assert {2, 9} <= set(atoms)


def test_sample_clause_negation_prob_extremes():
    all_pos = sample_clause(5, S, 10, RandomStream(7), negation_prob=0.0)
    assert not any(lit.negated for lit in all_pos.literals)
    all_neg = sample_clause(5, S, 10, RandomStream(7), negation_prob=1.0)
    assert all(lit.negated for lit in all_neg.literals)


def test_gen_formula_matches_groups_and_covers_pool():
    groups = group_counts_uniform(50, BASE_LENGTHS, 0.5)
    f = gen_formula(50, groups, 25, RandomStream(99))
    hist = clause_length_histogram(f)
    for g in groups:
        live, safe = hist.get(g.length, (0, 0))
        got = live if g.kind is L else safe
        assert got == g.count, (g, hist)
    used = {lit.atom for c in f.clauses for lit in c.literals}
    assert used == set(range(1, 26))


def test_gen_formula_forced_bijection():
    groups = [GroupSpec(1, L, 1), GroupSpec(1, S, 1)]
    f = gen_formula(2, groups, 2, RandomStream(5))
    atoms = sorted(lit.atom for c in f.clauses for lit in c.literals)
    assert atoms == [1, 2]


def test_gen_formula_deterministic_serialization():
    groups = group_counts_uniform(1000, BASE_LENGTHS, 0.5)
    f1 = gen_formula(1000, groups, 500, RandomStream(321))
    f2 = gen_formula(1000, groups, 500, RandomStream(321))
    t1 = Task("P1", None, 1000, 321, Leaf(f1))
    t2 = Task("P1", None, 1000, 321, Leaf(f2))
    assert emit_canonical(t1) == emit_canonical(t2)


def test_gen_formula_rejects_count_mismatch():
    groups = [GroupSpec(2, L, 3)]
    with pytest.raises(GenerationError):
        gen_formula(4, groups, 5, RandomStream(0))


def test_gen_formula_coverage_deficit_diagnostic():
    groups = [GroupSpec(1, L, 1), GroupSpec(1, S, 1)]
    with pytest.raises(GenerationError, match="deficit"):
        gen_formula(2, groups, 3, RandomStream(0))


def test_gen_formula_without_coverage_skips_pinning():
    groups = [GroupSpec(1, L, 1), GroupSpec(1, S, 1)]
    f = gen_formula(2, groups, 3, RandomStream(0), coverage=False)
    assert len(f.clauses) == 2
