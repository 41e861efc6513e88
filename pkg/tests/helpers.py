"""Shared builders and independent reference implementations for tests.

The reference implementations here deliberately take different routes
than the production code (eval of compiled expression strings, linear-
scan largest remainder) so they can serve as oracles for it.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from tempobench.core import (
    And,
    ClauseKind,
    Formula,
    Implies,
    Leaf,
    Literal,
    Not,
    Or,
    TemporalClause,
)

L = ClauseKind.LIVENESS
S = ClauseKind.SAFETY


def clause(kind: ClauseKind, *lits: int) -> TemporalClause:
    """Clause from signed atom ids (negative means negated)."""
    return TemporalClause(kind, tuple(Literal(abs(x), x < 0) for x in lits))


def leaf(*clauses: TemporalClause, pool: int | None = None) -> Leaf:
    if pool is None:
        pool = max(lit.atom for c in clauses for lit in c.literals)
    return Leaf(Formula(tuple(clauses), pool))


# --- independent largest-remainder oracle -----------------------------------

def lr_oracle(total: int, weights: list[Fraction]) -> list[int]:
    """Largest remainder by repeated max-scan (ties to the earlier index)."""
    weight_sum = sum(weights)
    quotas = [Fraction(total) * w / weight_sum for w in weights]
    counts = [q.numerator // q.denominator for q in quotas]
    remainders = [q - c for q, c in zip(quotas, counts)]
    for _ in range(total - sum(counts)):
        best = max(range(len(weights)), key=lambda i: (remainders[i], -i))
        counts[best] += 1
        remainders[best] = Fraction(-1)
    return counts


def poisson_weight_oracle(lengths, lam) -> list[Fraction]:
    lam = Fraction(lam)
    return [lam**k / math.factorial(k) for k in lengths]


def expected_groups_kind_first(n, lengths, liveness_share, weights=None):
    """(length, kind) -> count under kind-first apportionment."""
    share = Fraction(liveness_share)
    live_total, safe_total = lr_oracle(n, [share, 1 - share])
    if weights is None:
        weights = [Fraction(1)] * len(lengths)
    live = lr_oracle(live_total, weights)
    safe = lr_oracle(safe_total, weights)
    out = {}
    for length, lv, sf in zip(lengths, live, safe):
        out[(length, L)] = lv
        out[(length, S)] = sf
    return out


# --- independent evaluators ---------------------------------------------------

def _clause_expr(c: TemporalClause) -> str:
    return " or ".join(
        f"(not v[{lit.atom}])" if lit.negated else f"v[{lit.atom}]" for lit in c.literals
    )


def _abstract_expr(body) -> str:
    if isinstance(body, Leaf):
        if not body.formula.clauses:
            return "True"
        return "(" + " and ".join(f"({_clause_expr(c)})" for c in body.formula.clauses) + ")"
    if isinstance(body, Not):
        return f"(not {_abstract_expr(body.child)})"
    if isinstance(body, And):
        return "(" + " and ".join(_abstract_expr(c) for c in body.children) + ")"
    if isinstance(body, Or):
        return "(" + " or ".join(_abstract_expr(c) for c in body.children) + ")"
    if isinstance(body, Implies):
        return f"((not {_abstract_expr(body.lhs)}) or {_abstract_expr(body.rhs)})"
    raise TypeError(body)


def truth_table_sat(body, atoms: list[int]):
    """Second opinion on propositional satisfiability via compiled eval."""
    expr = compile(_abstract_expr(body), "<oracle>", "eval")
    for values in itertools.product([False, True], repeat=len(atoms)):
        v = dict(zip(atoms, values))
        if eval(expr, {"v": v}):
            return dict(v)
    return None


def _temporal_expr(body) -> str:
    if isinstance(body, Leaf):
        if not body.formula.clauses:
            return "True"
        parts = []
        for c in body.formula.clauses:
            quant = "any" if c.kind is L else "all"
            parts.append(f"{quant}(({_clause_expr(c)}) for v in states)")
        return "(" + " and ".join(parts) + ")"
    if isinstance(body, Not):
        return f"(not {_temporal_expr(body.child)})"
    if isinstance(body, And):
        return "(" + " and ".join(_temporal_expr(c) for c in body.children) + ")"
    if isinstance(body, Or):
        return "(" + " or ".join(_temporal_expr(c) for c in body.children) + ")"
    if isinstance(body, Implies):
        return f"((not {_temporal_expr(body.lhs)}) or {_temporal_expr(body.rhs)})"
    raise TypeError(body)


def independent_trace_eval(body, trace) -> bool:
    """Second opinion on trace satisfaction via compiled eval."""
    expr = compile(_temporal_expr(body), "<oracle>", "eval")
    return bool(eval(expr, {"states": list(trace.states)}))


# --- exhaustive micro-formula enumeration -------------------------------------

def all_micro_clauses(n_atoms=3, max_len=3):
    atoms = range(1, n_atoms + 1)
    for kind in (L, S):
        for length in range(1, max_len + 1):
            for combo in itertools.combinations(atoms, length):
                for signs in itertools.product((False, True), repeat=length):
                    yield TemporalClause(
                        kind, tuple(Literal(a, s) for a, s in zip(combo, signs))
                    )


def micro_conjunctions(max_clauses=3, n_atoms=3):
    pool = list(all_micro_clauses(n_atoms))
    for n in range(1, max_clauses + 1):
        for combo in itertools.combinations_with_replacement(pool, n):
            yield Leaf(Formula(tuple(combo), n_atoms))


# --- published summary-table cells (frozen fixture data) -----------------------

PUBLISHED_FOL_CELLS = {
    ("P1", "prover9"): {50: 0.0167, 100: 0.05, 200: 0.0333, 500: 4.6767},
    ("P1", "spass"): {50: 0.0533, 100: 0.0767, 200: 0.2067, 500: 1.5333},
    ("P2", "prover9"): {50: 0.01, 100: 0.03, 200: 0.1467, 500: 2.7033},
    ("P2", "spass"): {50: 0.04, 100: 0.0567, 200: 0.09, 500: 0.68},
    ("P3", "prover9"): {50: 0.0333, 100: 0.208, 200: 2.1167, 500: 15.255},
    ("P3", "spass"): {50: 0.0547, 100: 0.106, 200: 0.328, 500: 2.2227},
    ("P4", "prover9"): {50: 0.01, 100: 0.02, 200: 0.0733, 500: 1.2333},
    ("P4", "spass"): {50: 0.4, 100: 0.05, 200: 0.06, 500: 0.2233},
    ("P5", "prover9"): {50: 0.0267, 100: 0.1211, 200: 0.8511, 500: 11.7944},
    ("P5", "spass"): {50: 0.0767, 100: 0.2711, 200: 1.0689, 500: 16.9989},
    ("P6", "prover9"): {50: 0.0167, 100: 0.0433, 200: 0.2867, 500: 3.5567},
    ("P6", "spass"): {50: 0.06, 100: 0.1, 200: 0.42, 500: 5.1433},
}

PUBLISHED_PLTL_CELLS = {
    ("P1", "inkresat"): {50: 0.000238, 100: 0.000540, 200: 0.000681, 500: 0.002454},
    ("P2", "inkresat"): {50: 0.000699, 100: 0.000054, 200: 0.011994, 500: 0.000069},
    ("P3", "inkresat"): {50: 0.000601, 100: 0.000939, 200: 0.001183, 500: 0.004092},
    ("P4", "inkresat"): {50: 0.000271, 100: 0.000370, 200: 0.000673, 500: 0.001977},
    ("P5", "inkresat"): {50: 0.000328, 100: 0.000304, 200: 0.000588, 500: 0.003353},
    ("P6", "inkresat"): {50: 0.000353, 100: 0.001680, 200: 0.002865, 500: 0.028196},
}


def cells_to_aggregates(cells):
    from tempobench.analysis import AggregateRecord
    from tempobench.harness import Outcome

    out = []
    for (problem, solver), by_size in cells.items():
        for n, mean in by_size.items():
            out.append(
                AggregateRecord(
                    task=f"{problem.lower()}_na_{n:04d}_0",
                    problem=problem,
                    subcase=None,
                    n_clauses=n,
                    solver=solver,
                    encoding="standard",
                    attempt_count=3,
                    mean_time_s=mean,
                    mean_mem_bytes=0,
                    consensus=Outcome.SAT,
                    anomaly=False,
                    exclusions=0,
                )
            )
    return out
