"""Ground-truth satisfiability and entailment for small instances.

Semantics: evaluation happens at the first instant of an infinite trace
and is reflexive, so a liveness clause holds iff its disjunction is true
at some position (present included) and a safety clause iff it is true at
every position.  Witness models are ultimately periodic traces; for this
operator-free-nesting fragment the truth of a body depends only on the
set of states the trace visits, so a witness is reported as a state list
looping from position 0.

Exhaustive checks are intentionally desk-scale: the propositional route
enumerates up to 2**24 assignments, the temporal route up to 6 states
over 12 atoms.  Every SAT verdict carries a trace that is re-evaluated
before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import (
    And,
    Atom,
    ClauseKind,
    CompoundFormula,
    Formula,
    Implies,
    Leaf,
    Literal,
    Not,
    Or,
    TemporalClause,
    sorted_atoms_of,
)

PROP_ATOM_LIMIT = 24
TEMPORAL_ATOM_LIMIT = 12
MAX_STATES_LIMIT = 6
_CLAUSE_INSTANCE_LIMIT = 18


@dataclass(frozen=True)
class LassoTrace:
    """Ultimately periodic trace: `states` with a loop back to `loop_start`."""

    states: tuple[dict[Atom, bool], ...]
    loop_start: int

    def __post_init__(self):
        if not self.states:
            raise ValueError("a trace needs at least one state")
        if not 0 <= self.loop_start < len(self.states):
            raise ValueError("loop start must index a state")


class TemporalVerdict(Enum):
    SAT = "sat"
    UNKNOWN_UP_TO_BOUND = "unknown-up-to-bound"
    UNSAT_PROVED = "unsat-proved"


@dataclass(frozen=True)
class BoundedResult:
    verdict: TemporalVerdict
    trace: LassoTrace | None = None


@dataclass(frozen=True)
class PropResult:
    sat: bool
    witness: dict[Atom, bool] | None = None


class EntailmentVerdict(Enum):
    ENTAILED = "entailed"
    NOT_ENTAILED = "not-entailed"
    BOUND_NOT_DECISIVE = "bound-not-decisive"


@dataclass(frozen=True)
class EntailmentResult:
    verdict: EntailmentVerdict
    countermodel: LassoTrace | None = None


# --- propositional abstraction ---------------------------------------------

def _eval_clause_prop(clause: TemporalClause, truth: dict[Atom, bool]) -> bool:
    return any(truth[lit.atom] != lit.negated for lit in clause.literals)


def eval_abstraction(body: CompoundFormula, truth: dict[Atom, bool]) -> bool:
    """Evaluate the body with temporal operators erased."""
    if isinstance(body, Leaf):
        return all(_eval_clause_prop(c, truth) for c in body.formula.clauses)
    if isinstance(body, Not):
        return not eval_abstraction(body.child, truth)
    if isinstance(body, And):
        return all(eval_abstraction(c, truth) for c in body.children)
    if isinstance(body, Or):
        return any(eval_abstraction(c, truth) for c in body.children)
    if isinstance(body, Implies):
        return (not eval_abstraction(body.lhs, truth)) or eval_abstraction(body.rhs, truth)
    raise TypeError(f"not a compound formula node: {body!r}")


def _assignment(atoms: list[Atom], index: int) -> dict[Atom, bool]:
    return {atom: bool((index >> i) & 1) for i, atom in enumerate(atoms)}


def brute_force_prop_sat(body: CompoundFormula) -> PropResult:
    """Exact propositional result by full enumeration, canonical order.

    The first satisfying assignment in ascending binary order (atom with
    the smallest id is the least significant bit) becomes the witness.
    """
    atoms = sorted_atoms_of(body)
    if len(atoms) > PROP_ATOM_LIMIT:
        raise ValueError(
            f"{len(atoms)} atoms exceed the enumeration bound of {PROP_ATOM_LIMIT}"
        )
    for index in range(1 << len(atoms)):
        truth = _assignment(atoms, index)
        if eval_abstraction(body, truth):
            return PropResult(True, truth)
    return PropResult(False, None)


# --- temporal evaluation over traces ----------------------------------------

def _eval_clause_temporal(clause: TemporalClause, states: tuple[dict[Atom, bool], ...]) -> bool:
    # every recorded state occurs in the unrolled trace, and only those
    if clause.kind is ClauseKind.LIVENESS:
        return any(_eval_clause_prop(clause, s) for s in states)
    return all(_eval_clause_prop(clause, s) for s in states)


def eval_on_trace(body: CompoundFormula, trace: LassoTrace) -> bool:
    """Evaluate the body on an ultimately periodic trace."""
    states = trace.states

    def walk(node: CompoundFormula) -> bool:
        if isinstance(node, Leaf):
            return all(_eval_clause_temporal(c, states) for c in node.formula.clauses)
        if isinstance(node, Not):
            return not walk(node.child)
        if isinstance(node, And):
            return all(walk(c) for c in node.children)
        if isinstance(node, Or):
            return any(walk(c) for c in node.children)
        if isinstance(node, Implies):
            return (not walk(node.lhs)) or walk(node.rhs)
        raise TypeError(f"not a compound formula node: {node!r}")

    return walk(body)


# --- bounded temporal satisfiability -----------------------------------------

def _clause_mask(clause: TemporalClause, atom_index: dict[Atom, int], n_assign: int) -> int:
    mask = 0
    for lit in clause.literals:
        bit = atom_index[lit.atom]
        step = 1 << bit
        unit = ((1 << step) - 1) << (0 if lit.negated else step)
        period = step * 2
        lit_mask = 0
        for offset in range(0, n_assign, period):
            lit_mask |= unit << offset
        mask |= lit_mask
    return mask


def _pure_conjunction_clauses(body: CompoundFormula) -> list[TemporalClause] | None:
    """Clause list when the body is an And-tree over leaves, else None."""
    if isinstance(body, Leaf):
        return list(body.formula.clauses)
    if isinstance(body, And):
        out: list[TemporalClause] = []
        for child in body.children:
            sub = _pure_conjunction_clauses(child)
            if sub is None:
                return None
            out.extend(sub)
        return out
    return None


def _collect_clauses(body: CompoundFormula, acc: list[TemporalClause]) -> object:
    """Shape tree whose leaves are indices into `acc`."""
    if isinstance(body, Leaf):
        ids = []
        for clause in body.formula.clauses:
            ids.append(len(acc))
            acc.append(clause)
        return ("leaf", ids)
    if isinstance(body, Not):
        return ("not", _collect_clauses(body.child, acc))
    if isinstance(body, (And, Or)):
        tag = "and" if isinstance(body, And) else "or"
        return (tag, [_collect_clauses(c, acc) for c in body.children])
    if isinstance(body, Implies):
        return ("implies", _collect_clauses(body.lhs, acc), _collect_clauses(body.rhs, acc))
    raise TypeError(f"not a compound formula node: {body!r}")


def _eval_shape(shape, bits: int) -> bool:
    tag = shape[0]
    if tag == "leaf":
        return all((bits >> i) & 1 for i in shape[1])
    if tag == "not":
        return not _eval_shape(shape[1], bits)
    if tag == "and":
        return all(_eval_shape(c, bits) for c in shape[1])
    if tag == "or":
        return any(_eval_shape(c, bits) for c in shape[1])
    return (not _eval_shape(shape[1], bits)) or _eval_shape(shape[2], bits)


def _lowest_assignment(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _cover_demands(base: int, demands: list[int], max_states: int) -> list[int] | None:
    """Assignment indices covering every demand within `max_states` states.

    Greedy one-state-per-demand first; if the bound is tighter, search for
    states satisfying several demands at once (deterministic order).
    """
    if not demands:
        return [_lowest_assignment(base)] if base else None
    feasible = [base & d for d in demands]
    if not all(feasible):
        return None
    if len(demands) <= max_states:
        return sorted({_lowest_assignment(m) for m in feasible})

    states: list[int] = []

    def search(remaining: list[int], slots: int) -> bool:
        if not remaining:
            return True
        if slots == 0:
            return False
        first, rest = remaining[0], remaining[1:]
        candidates = first
        while candidates:
            a = _lowest_assignment(candidates)
            candidates &= candidates - 1
            bit = 1 << a
            states.append(a)
            if search([m for m in rest if not (m & bit)], slots - 1):
                return True
            states.pop()
        return False

    if search(feasible, max_states):
        return sorted(set(states))
    return None


def bounded_temporal_sat(body: CompoundFormula, max_states: int) -> BoundedResult:
    """Search for a trace of at most `max_states` states satisfying the body.

    UNSAT is only ever proved for pure conjunctions of temporal clauses,
    where exhausting max_states >= liveness-clause count + 1 is decisive
    (one state per liveness demand plus a safety-consistent base suffices
    for any model).  Other shapes report UNKNOWN_UP_TO_BOUND.
    """
    if not 1 <= max_states <= MAX_STATES_LIMIT:
        raise ValueError(f"max_states must lie in 1..{MAX_STATES_LIMIT}")
    atoms = sorted_atoms_of(body)
    if len(atoms) > TEMPORAL_ATOM_LIMIT:
        raise ValueError(
            f"{len(atoms)} atoms exceed the bounded-search limit of {TEMPORAL_ATOM_LIMIT}"
        )
    atom_index = {a: i for i, a in enumerate(atoms)}
    n_assign = 1 << len(atoms)
    full = (1 << n_assign) - 1

    def make_trace(assignments: list[int]) -> LassoTrace:
        states = tuple(_assignment(atoms, a) for a in assignments)
        trace = LassoTrace(states, 0)
        if not eval_on_trace(body, trace):
            raise AssertionError("witness trace failed re-evaluation")
        return trace

    clauses: list[TemporalClause] = []
    shape = _collect_clauses(body, clauses)
    masks = [_clause_mask(c, atom_index, n_assign) for c in clauses]

    # constant (single-state) models first, in canonical assignment order
    for a in range(n_assign):
        bit = 1 << a
        bits = 0
        for i, mask in enumerate(masks):
            if mask & bit:
                bits |= 1 << i
        if _eval_shape(shape, bits):
            return BoundedResult(TemporalVerdict.SAT, make_trace([a]))

    pure = _pure_conjunction_clauses(body)
    if pure is not None:
        base = full
        demands = []
        liveness = 0
        for clause, mask in zip(clauses, masks):
            if clause.kind is ClauseKind.SAFETY:
                base &= mask
            else:
                liveness += 1
                demands.append(mask)
        cover = _cover_demands(base, demands, max_states)
        if cover is not None:
            return BoundedResult(TemporalVerdict.SAT, make_trace(cover))
        if max_states >= liveness + 1:
            return BoundedResult(TemporalVerdict.UNSAT_PROVED)
        return BoundedResult(TemporalVerdict.UNKNOWN_UP_TO_BOUND)

    if len(clauses) > _CLAUSE_INSTANCE_LIMIT:
        raise ValueError(
            f"{len(clauses)} clause instances exceed the bounded-search limit "
            f"of {_CLAUSE_INSTANCE_LIMIT}"
        )

    # general shapes: enumerate clause truth vectors, then realise one
    for vector in range(1 << len(clauses)):
        if not _eval_shape(shape, vector):
            continue
        base = full
        demands = []
        for i, (clause, mask) in enumerate(zip(clauses, masks)):
            holds = (vector >> i) & 1
            if clause.kind is ClauseKind.SAFETY:
                if holds:
                    base &= mask
                else:
                    demands.append(full ^ mask)
            else:
                if holds:
                    demands.append(mask)
                else:
                    base &= full ^ mask
        cover = _cover_demands(base, demands, max_states)
        if cover is not None:
            return BoundedResult(TemporalVerdict.SAT, make_trace(cover))
    return BoundedResult(TemporalVerdict.UNKNOWN_UP_TO_BOUND)


# --- entailment ---------------------------------------------------------------

def _negated_clause_as_safety(clause: TemporalClause) -> list[TemporalClause] | None:
    """Not-eventually-disjunction is a conjunction of single-literal safety clauses."""
    if clause.kind is not ClauseKind.LIVENESS:
        return None
    return [
        TemporalClause(ClauseKind.SAFETY, (Literal(lit.atom, not lit.negated),))
        for lit in clause.literals
    ]


def _disjuncts_of_pure_conjunctions(body: CompoundFormula) -> list[list[TemporalClause]] | None:
    """Rewrite an And/Or tree over leaves into a union of pure conjunctions."""
    if isinstance(body, Leaf):
        return [list(body.formula.clauses)]
    if isinstance(body, Or):
        out: list[list[TemporalClause]] = []
        for child in body.children:
            sub = _disjuncts_of_pure_conjunctions(child)
            if sub is None:
                return None
            out.extend(sub)
        return out
    if isinstance(body, And):
        combos: list[list[TemporalClause]] = [[]]
        for child in body.children:
            sub = _disjuncts_of_pure_conjunctions(child)
            if sub is None:
                return None
            combos = [merged + extra for merged in combos for extra in sub]
            if len(combos) > 64:
                return None
        return combos
    return None


def check_entailment_small(
    model: CompoundFormula, requirement: TemporalClause, max_states: int = MAX_STATES_LIMIT
) -> EntailmentResult:
    """Does every trace of `model` satisfy the requirement clause?

    Checks satisfiability of model AND NOT requirement.  When the
    requirement is a liveness clause its negation is a conjunction of
    safety clauses, so for disjunction/conjunction-shaped models every
    branch is a pure conjunction and the bound can be decisive.
    """
    pool = max(lit.atom for lit in requirement.literals)
    negated = _negated_clause_as_safety(requirement)
    disjuncts = _disjuncts_of_pure_conjunctions(model) if negated is not None else None

    if disjuncts is not None:
        decisive = True
        for clauses in disjuncts:
            merged = clauses + negated
            pool_size = max(
                [pool] + [lit.atom for c in merged for lit in c.literals]
            )
            branch = Leaf(Formula(tuple(merged), pool_size))
            liveness = sum(1 for c in merged if c.kind is ClauseKind.LIVENESS)
            result = bounded_temporal_sat(branch, max_states)
            if result.verdict is TemporalVerdict.SAT:
                return EntailmentResult(EntailmentVerdict.NOT_ENTAILED, result.trace)
            if result.verdict is not TemporalVerdict.UNSAT_PROVED or max_states < liveness + 1:
                decisive = False
        if decisive:
            return EntailmentResult(EntailmentVerdict.ENTAILED)
        return EntailmentResult(EntailmentVerdict.BOUND_NOT_DECISIVE)

    combined = And((model, Not(Leaf(Formula((requirement,), pool)))))
    result = bounded_temporal_sat(combined, max_states)
    if result.verdict is TemporalVerdict.SAT:
        return EntailmentResult(EntailmentVerdict.NOT_ENTAILED, result.trace)
    return EntailmentResult(EntailmentVerdict.BOUND_NOT_DECISIVE)
