"""Formula data model shared by every other module.

A benchmark body is a boolean combination of formulas; a formula is a
conjunction of temporal clauses; a clause is a disjunction of literals
over distinct atoms, flagged either liveness ("eventually the disjunction
holds") or safety ("the disjunction always holds").  All types are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union

Atom = int  # 1-based index into the owning task's atom pool

PROBLEMS = ("P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8")


class ClauseKind(Enum):
    LIVENESS = "liveness"
    SAFETY = "safety"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __post_init__(self):
        if self.atom < 1:
            raise ValueError(f"atom id must be >= 1, got {self.atom}")


@dataclass(frozen=True)
class TemporalClause:
    kind: ClauseKind
    literals: tuple[Literal, ...]

    def __post_init__(self):
        if not self.literals:
            raise ValueError("temporal clause needs at least one literal")
        atoms = [lit.atom for lit in self.literals]
        if len(set(atoms)) != len(atoms):
            raise ValueError("atoms within a clause must be distinct")

    @property
    def length(self) -> int:
        return len(self.literals)

    def atoms(self) -> frozenset[Atom]:
        return frozenset(lit.atom for lit in self.literals)


@dataclass(frozen=True)
class Formula:
    """Conjunction of temporal clauses over a fixed atom pool."""

    clauses: tuple[TemporalClause, ...]
    atom_pool_size: int

    def __post_init__(self):
        if self.atom_pool_size < 1:
            raise ValueError("atom pool size must be >= 1")
        for clause in self.clauses:
            for lit in clause.literals:
                if lit.atom > self.atom_pool_size:
                    raise ValueError(
                        f"atom {lit.atom} exceeds pool size {self.atom_pool_size}"
                    )


@dataclass(frozen=True)
class Leaf:
    formula: Formula


@dataclass(frozen=True)
class Not:
    child: "CompoundFormula"


@dataclass(frozen=True)
class And:
    children: tuple["CompoundFormula", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple["CompoundFormula", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


@dataclass(frozen=True)
class Implies:
    lhs: "CompoundFormula"
    rhs: "CompoundFormula"


CompoundFormula = Union[Leaf, Not, And, Or, Implies]


@dataclass(frozen=True)
class Task:
    """One benchmark unit: problem id, parameters, seed and its body."""

    problem: str
    subcase: str | None
    n_clauses: int
    seed: int
    body: CompoundFormula

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem id {self.problem!r}")
        if self.n_clauses < 1:
            raise ValueError("n_clauses must be >= 1")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def task_id(self) -> str:
        sub = self.subcase if self.subcase is not None else "na"
        return f"{self.problem.lower()}_{sub}_{self.n_clauses:04d}_{self.seed:016x}"


@dataclass(frozen=True)
class Catalogue:
    tasks: tuple[Task, ...]
    config_digest: str


def leaves(body: CompoundFormula) -> Iterator[Leaf]:
    """Every Leaf node in deterministic (left-to-right) order."""
    if isinstance(body, Leaf):
        yield body
    elif isinstance(body, Not):
        yield from leaves(body.child)
    elif isinstance(body, (And, Or)):
        for child in body.children:
            yield from leaves(child)
    elif isinstance(body, Implies):
        yield from leaves(body.lhs)
        yield from leaves(body.rhs)
    else:
        raise TypeError(f"not a compound formula node: {body!r}")


def atoms_of(body: CompoundFormula) -> frozenset[Atom]:
    """Exact set of atoms occurring in any leaf of the body."""
    found: set[Atom] = set()
    for leaf in leaves(body):
        for clause in leaf.formula.clauses:
            found.update(lit.atom for lit in clause.literals)
    return frozenset(found)


def sorted_atoms_of(body: CompoundFormula) -> list[Atom]:
    return sorted(atoms_of(body))


def clauses_of(body: CompoundFormula) -> Iterator[TemporalClause]:
    for leaf in leaves(body):
        yield from leaf.formula.clauses


def clause_kind_counts(body: CompoundFormula) -> tuple[int, int]:
    """(liveness count, safety count) over every clause in the body."""
    live = safe = 0
    for clause in clauses_of(body):
        if clause.kind is ClauseKind.LIVENESS:
            live += 1
        else:
            safe += 1
    return live, safe


def clause_length_histogram(f: Formula) -> dict[int, tuple[int, int]]:
    """Map clause length -> (liveness count, safety count).

    The counts partition the clause list: summing every entry gives
    exactly ``len(f.clauses)``.
    """
    hist: dict[int, tuple[int, int]] = {}
    for clause in f.clauses:
        live, safe = hist.get(clause.length, (0, 0))
        if clause.kind is ClauseKind.LIVENESS:
            live += 1
        else:
            safe += 1
        hist[clause.length] = (live, safe)
    return hist
