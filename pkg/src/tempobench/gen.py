"""Deterministic catalogue generation for problems P1-P8.

Counts are apportioned with the largest-remainder method over exact
rational quotas (fractions, never floats), so two runs with the same
configuration produce byte-identical catalogues on any platform.  Ties
between equal remainders go to the earlier entry, which by construction
means shorter clause lengths first and liveness before safety.
"""

from __future__ import annotations

import bisect
import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    And,
    Catalogue,
    ClauseKind,
    CompoundFormula,
    Formula,
    Implies,
    Leaf,
    Literal,
    Not,
    Or,
    PROBLEMS,
    Task,
    TemporalClause,
    sorted_atoms_of,
)
from .rng import RandomStream, derive_seed


class GenerationError(ValueError):
    """Raised for infeasible or invalid generation parameters."""


DEFAULT_SIZES: dict[str, tuple[int, ...]] = {
    "P1": (50, 100, 200, 500, 1000, 2000),
    "P2": (50, 100, 200, 500, 1000, 2000),
    "P3": (50, 100, 200, 500, 1000, 2000),
    "P4": (50, 100, 200, 500, 1000, 2000),
    "P5": (50, 100, 200, 500, 1000, 2000),
    "P6": (50, 100, 200, 500, 1000, 2000),
    "P7": (50, 100, 200),
    "P8": (50, 100, 200, 500, 1000),
}

BASE_LENGTHS = (2, 3, 4, 6, 8, 10)
P3_MULTIPLIERS = (2, 3, 4, 5)
P4_LENGTHS = (2, 3, 4, 5)
P5_LENGTHS = (1, 5, 10, 20)
P6_RATIOS = ((90, 10), (80, 20), (65, 35), (50, 50), (35, 65), (20, 80), (10, 90))

# reported task total of the source experiments; the composition behind it
# is not recoverable from the published problem parameters
REFERENCE_TASK_TOTAL = 210


@dataclass(frozen=True)
class GroupSpec:
    """Number of clauses requested for one (length, kind) group."""

    length: int
    kind: ClauseKind
    count: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("group length must be >= 1")
        if self.count < 0:
            raise ValueError("group count must be >= 0")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 2024
    negation_prob: float = 0.5
    poisson_lambda: float = 3.5
    problems: tuple[str, ...] = PROBLEMS
    sizes: dict[str, tuple[int, ...]] = field(default_factory=lambda: dict(DEFAULT_SIZES))
    p3_coverage: bool = True
    p3_multipliers: tuple[float, ...] = P3_MULTIPLIERS

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise GenerationError("seed must fit in 64 unsigned bits")
        if not 0.0 <= self.negation_prob <= 1.0:
            raise GenerationError("negation_prob must lie in [0, 1]")
        if self.poisson_lambda <= 0:
            raise GenerationError("poisson_lambda must be > 0")
        for p in self.problems:
            if p not in PROBLEMS:
                raise GenerationError(f"unknown problem id {p!r}")
        for p, sizes in self.sizes.items():
            if p not in PROBLEMS:
                raise GenerationError(f"sizes given for unknown problem {p!r}")
            bad = [n for n in sizes if n not in DEFAULT_SIZES[p]]
            if bad:
                raise GenerationError(
                    f"sizes {bad} are not valid for {p}; allowed: {DEFAULT_SIZES[p]}"
                )
        if any(m <= 0 for m in self.p3_multipliers):
            raise GenerationError("p3 multipliers must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "GenConfig":
        known = {
            "seed",
            "negation_prob",
            "poisson_lambda",
            "problems",
            "sizes",
            "p3_coverage",
            "p3_multipliers",
        }
        unknown = set(data) - known
        if unknown:
            raise GenerationError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(data)
        if "problems" in kwargs:
            kwargs["problems"] = tuple(kwargs["problems"])
        if "sizes" in kwargs:
            kwargs["sizes"] = {p: tuple(v) for p, v in kwargs["sizes"].items()}
        if "p3_multipliers" in kwargs:
            kwargs["p3_multipliers"] = tuple(kwargs["p3_multipliers"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "negation_prob": self.negation_prob,
            "poisson_lambda": self.poisson_lambda,
            "problems": list(self.problems),
            "sizes": {p: list(v) for p, v in sorted(self.sizes.items())},
            "p3_coverage": self.p3_coverage,
            "p3_multipliers": list(self.p3_multipliers),
        }

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def apportion(total: int, weights: Sequence[Fraction]) -> list[int]:
    """Largest-remainder apportionment of `total` over `weights`.

    Exact rational quotas; remainders tie-break toward the earlier entry.
    """
    if total < 0:
        raise GenerationError("total must be >= 0")
    weight_sum = sum(weights)
    if weight_sum <= 0:
        raise GenerationError("weights must sum to a positive value")
    if any(w < 0 for w in weights):
        raise GenerationError("weights must be non-negative")
    quotas = [Fraction(total) * w / weight_sum for w in weights]
    counts = [int(q) for q in quotas]
    remainder = total - sum(counts)
    order = sorted(range(len(weights)), key=lambda i: (counts[i] - quotas[i], i))
    for i in order[:remainder]:
        counts[i] += 1
    return counts


def _split_kinds(n_clauses: int, liveness_share: Fraction) -> tuple[int, int]:
    live, safe = apportion(n_clauses, [liveness_share, 1 - liveness_share])
    return live, safe


def _interleave(lengths: Sequence[int], live_counts: Sequence[int], safe_counts: Sequence[int]) -> list[GroupSpec]:
    groups = []
    for length, live, safe in zip(lengths, live_counts, safe_counts):
        groups.append(GroupSpec(length, ClauseKind.LIVENESS, live))
        groups.append(GroupSpec(length, ClauseKind.SAFETY, safe))
    return groups


def _check_group_pre(n_clauses: int, lengths: Sequence[int], liveness_share: float) -> Fraction:
    if not lengths:
        raise GenerationError("length set must be non-empty")
    if len(set(lengths)) != len(lengths):
        raise GenerationError("length set must not repeat lengths")
    if n_clauses < 2 * len(lengths):
        raise GenerationError(
            f"{n_clauses} clauses cannot give every (length, kind) group at "
            f"least one clause over {len(lengths)} lengths"
        )
    share = Fraction(liveness_share)
    if not 0 < share < 1:
        raise GenerationError("liveness share must lie strictly between 0 and 1")
    return share


def group_counts_uniform(
    n_clauses: int, lengths: Sequence[int], liveness_share: float
) -> list[GroupSpec]:
    """Equal clause counts per length, split between kinds first.

    The liveness/safety totals are apportioned exactly (so a 90:10 ratio
    over 100 clauses yields 90 and 10), then each kind's total spreads
    evenly over the lengths with the remainder going to shorter lengths.
    """
    share = _check_group_pre(n_clauses, lengths, liveness_share)
    live_total, safe_total = _split_kinds(n_clauses, share)
    ones = [Fraction(1)] * len(lengths)
    return _interleave(lengths, apportion(live_total, ones), apportion(safe_total, ones))


def poisson_weights(lengths: Sequence[int], lam: float) -> list[Fraction]:
    """Poisson pmf weights at k = length, as exact rationals.

    pmf(k; lam) = e^-lam * lam^k / k!; the e^-lam factor is constant over
    the length set and cancels when the weights are normalised, so weights
    are lam^k / k! computed in exact arithmetic (floats are dyadic
    rationals, hence Fraction(lam) is exact).
    """
    lam_frac = Fraction(lam)
    if lam_frac <= 0:
        raise GenerationError("poisson lambda must be > 0")
    return [lam_frac**k / math.factorial(k) for k in lengths]


def group_counts_poisson(
    n_clauses: int,
    lengths: Sequence[int],
    lam: float,
    liveness_share: float,
) -> list[GroupSpec]:
    """Clause counts per length proportional to a Poisson pmf at the length."""
    share = _check_group_pre(n_clauses, lengths, liveness_share)
    weights = poisson_weights(lengths, lam)
    live_total, safe_total = _split_kinds(n_clauses, share)
    return _interleave(
        lengths, apportion(live_total, weights), apportion(safe_total, weights)
    )


def sample_clause(
    length: int,
    kind: ClauseKind,
    atom_pool_size: int,
    rng: RandomStream,
    required_atoms: Sequence[int] = (),
    negation_prob: float = 0.5,
) -> TemporalClause:
    """One clause of `length` distinct atoms; `required_atoms` always included."""
    if length > atom_pool_size:
        raise GenerationError(
            f"clause length {length} exceeds atom pool size {atom_pool_size}"
        )
    if len(required_atoms) > length:
        raise GenerationError("more required atoms than clause positions")
    atoms = list(required_atoms)
    atoms += rng.choose_distinct(atom_pool_size, length - len(atoms), exclude=atoms)
    literals = tuple(
        Literal(atom, rng.random() < negation_prob) for atom in atoms
    )
    return TemporalClause(kind, literals)


def gen_formula(
    n_clauses: int,
    groups: Sequence[GroupSpec],
    atom_pool_size: int,
    rng: RandomStream,
    negation_prob: float = 0.5,
    coverage: bool = True,
) -> Formula:
    """Generate a formula whose clause multiset matches `groups` exactly.

    With coverage enabled every pool atom appears at least once: each atom
    is pinned to a uniformly chosen distinct literal slot, the remaining
    slots are sampled, and the clause order is shuffled afterwards.
    """
    plan = [(g.length, g.kind) for g in groups for _ in range(g.count)]
    if len(plan) != n_clauses:
        raise GenerationError(
            f"group counts sum to {len(plan)}, expected {n_clauses}"
        )
    required: list[list[int]] = [[] for _ in plan]
    if coverage:
        slot_total = sum(length for length, _ in plan)
        if atom_pool_size > slot_total:
            raise GenerationError(
                f"cannot cover {atom_pool_size} atoms with {slot_total} literal "
                f"slots (deficit {atom_pool_size - slot_total})"
            )
        ends: list[int] = []
        acc = 0
        for length, _ in plan:
            acc += length
            ends.append(acc)
        slots = rng.choose_distinct(slot_total, atom_pool_size)
        for atom, slot in enumerate(slots, start=1):
            clause_idx = bisect.bisect_left(ends, slot)
            required[clause_idx].append(atom)
    clauses = [
        sample_clause(
            length,
            kind,
            atom_pool_size,
            rng,
            required_atoms=sorted(req),
            negation_prob=negation_prob,
        )
        for (length, kind), req in zip(plan, required)
    ]
    rng.shuffle(clauses)
    return Formula(tuple(clauses), atom_pool_size)


def _usable_lengths(lengths: Sequence[int], atom_pool_size: int) -> list[int]:
    """Drop lengths that cannot form a distinct-atom clause in this pool."""
    usable = [length for length in lengths if length <= atom_pool_size]
    if not usable:
        raise GenerationError(
            f"no clause length from {list(lengths)} fits an atom pool of "
            f"{atom_pool_size}"
        )
    return usable


def _p5_groups(n_clauses: int, case: str) -> list[GroupSpec]:
    """Length shares per case, then a 50:50 kind split within each length.

    The length totals are apportioned at formula level so the 1% group is
    exactly the largest-remainder rounding of 0.01 * n_clauses.
    """
    percent = Fraction(1, 100)
    rest = (1 - percent) / 3
    if case == "a":
        weights = [Fraction(1, 4)] * 4
    elif case == "b":
        weights = [percent, rest, rest, rest]
    elif case == "c":
        weights = [rest, rest, rest, percent]
    else:
        raise GenerationError(f"unknown P5 case {case!r}")
    length_totals = apportion(n_clauses, weights)
    half = Fraction(1, 2)
    groups = []
    for length, total in zip(P5_LENGTHS, length_totals):
        live, safe = apportion(total, [half, half])
        groups.append(GroupSpec(length, ClauseKind.LIVENESS, live))
        groups.append(GroupSpec(length, ClauseKind.SAFETY, safe))
    return groups


def _simple_formula_task(
    problem: str,
    subcase: str | None,
    n_clauses: int,
    pool: int,
    groups: Sequence[GroupSpec],
    cfg: GenConfig,
    coverage: bool = True,
) -> Task:
    label = f"{problem}/{subcase or ''}/{n_clauses}"
    task_seed = derive_seed(cfg.seed, label)
    rng = RandomStream(task_seed)
    try:
        formula = gen_formula(
            n_clauses, groups, pool, rng, cfg.negation_prob, coverage=coverage
        )
    except GenerationError as exc:
        raise GenerationError(f"{label}: {exc}") from exc
    return Task(problem, subcase, n_clauses, task_seed, Leaf(formula))


def _gen_p1(cfg: GenConfig) -> list[Task]:
    tasks = []
    for n in cfg.sizes["P1"]:
        groups = group_counts_uniform(n, BASE_LENGTHS, 0.5)
        tasks.append(_simple_formula_task("P1", None, n, n // 2, groups, cfg))
    return tasks


def _gen_p2(cfg: GenConfig) -> list[Task]:
    tasks = []
    for n in cfg.sizes["P2"]:
        groups = group_counts_poisson(n, BASE_LENGTHS, cfg.poisson_lambda, 0.5)
        tasks.append(_simple_formula_task("P2", None, n, n // 2, groups, cfg))
    return tasks


def _gen_p3(cfg: GenConfig) -> list[Task]:
    tasks = []
    for mult in cfg.p3_multipliers:
        sub = f"x{mult:g}"
        for n in cfg.sizes["P3"]:
            pool = int(mult * n)
            lengths = _usable_lengths(BASE_LENGTHS, pool)
            groups = group_counts_uniform(n, lengths, 0.5)
            tasks.append(
                _simple_formula_task(
                    "P3", sub, n, pool, groups, cfg, coverage=cfg.p3_coverage
                )
            )
    return tasks


def _gen_p4(cfg: GenConfig) -> list[Task]:
    tasks = []
    for length in P4_LENGTHS:
        sub = f"len{length}"
        for n in cfg.sizes["P4"]:
            groups = group_counts_uniform(n, [length], 0.5)
            tasks.append(_simple_formula_task("P4", sub, n, n // 2, groups, cfg))
    return tasks


def _gen_p5(cfg: GenConfig) -> list[Task]:
    tasks = []
    for case in ("a", "b", "c"):
        for n in cfg.sizes["P5"]:
            groups = _p5_groups(n, case)
            tasks.append(_simple_formula_task("P5", case, n, n // 2, groups, cfg))
    return tasks


def _gen_p6(cfg: GenConfig) -> list[Task]:
    tasks = []
    for case in ("a", "b"):
        for live, safe in P6_RATIOS:
            sub = f"{case}-{live}-{safe}"
            share = Fraction(live, live + safe)
            for n in cfg.sizes["P6"]:
                if case == "a":
                    groups = group_counts_uniform(n, BASE_LENGTHS, share)
                else:
                    groups = group_counts_poisson(
                        n, BASE_LENGTHS, cfg.poisson_lambda, share
                    )
                tasks.append(_simple_formula_task("P6", sub, n, n // 2, groups, cfg))
    return tasks


def _member_formula(
    cfg: GenConfig, task_seed: int, stream: str, n: int, pool: int, poisson: bool, label: str
) -> Leaf:
    rng = RandomStream(derive_seed(task_seed, stream))
    try:
        if poisson:
            groups = group_counts_poisson(n, BASE_LENGTHS, cfg.poisson_lambda, 0.5)
        else:
            groups = group_counts_uniform(n, BASE_LENGTHS, 0.5)
        return Leaf(gen_formula(n, groups, pool, rng, cfg.negation_prob))
    except GenerationError as exc:
        raise GenerationError(f"{label}/{stream}: {exc}") from exc


def _gen_p7(cfg: GenConfig) -> list[Task]:
    tasks = []
    for case in ("a", "b", "c", "d"):
        poisson = case in ("b", "d")
        disjunctive = case in ("a", "b")
        for n in cfg.sizes["P7"]:
            label = f"P7/{case}/{n}"
            task_seed = derive_seed(cfg.seed, label)
            pool = n // 2
            members = tuple(
                _member_formula(cfg, task_seed, f"f{i}", n, pool, poisson, label)
                for i in (1, 2, 3)
            )
            model: CompoundFormula = Or(members) if disjunctive else And(members)
            rng = RandomStream(derive_seed(task_seed, "r"))
            candidates = sorted_atoms_of(model)
            picks = rng.choose_distinct(len(candidates), 4)
            literals = tuple(
                Literal(candidates[i - 1], rng.random() < cfg.negation_prob)
                for i in picks
            )
            requirement = TemporalClause(ClauseKind.LIVENESS, literals)
            body = Implies(model, Leaf(Formula((requirement,), pool)))
            tasks.append(Task("P7", case, n, task_seed, body))
    return tasks


def _square_body(f1: Leaf, f2: Leaf, relation: str) -> CompoundFormula:
    if relation == "contradictory":
        return And((Implies(f1, Not(f2)), Implies(Not(f1), f2)))
    if relation == "subcontrary":
        return Not(And((Not(f1), Not(f2))))
    if relation == "subalternated":
        return And((Implies(f1, f2), Not(Implies(f2, f1))))
    raise GenerationError(f"unknown square relation {relation!r}")


P8_RELATIONS = {
    "a": "contradictory",
    "b": "subcontrary",
    "c": "subalternated",
    "d": "contradictory",
    "e": "subcontrary",
    "f": "subalternated",
}


def _gen_p8(cfg: GenConfig) -> list[Task]:
    tasks = []
    for case in ("a", "b", "c", "d", "e", "f"):
        poisson = case in ("d", "e", "f")
        for n in cfg.sizes["P8"]:
            label = f"P8/{case}/{n}"
            task_seed = derive_seed(cfg.seed, label)
            pool = n // 2
            f1 = _member_formula(cfg, task_seed, "f1", n, pool, poisson, label)
            f2 = _member_formula(cfg, task_seed, "f2", n, pool, poisson, label)
            body = _square_body(f1, f2, P8_RELATIONS[case])
            tasks.append(Task("P8", case, n, task_seed, body))
    return tasks


_GENERATORS = {
    "P1": _gen_p1,
    "P2": _gen_p2,
    "P3": _gen_p3,
    "P4": _gen_p4,
    "P5": _gen_p5,
    "P6": _gen_p6,
    "P7": _gen_p7,
    "P8": _gen_p8,
}


def gen_problem(problem: str, cfg: GenConfig) -> list[Task]:
    """All tasks of one problem, in canonical (subcase-major, size-minor) order."""
    if problem not in _GENERATORS:
        raise GenerationError(f"unknown problem id {problem!r}")
    return _GENERATORS[problem](cfg)


def gen_catalogue(cfg: GenConfig) -> Catalogue:
    """The full deterministic catalogue for the enabled problems."""
    tasks: list[Task] = []
    for problem in PROBLEMS:
        if problem in cfg.problems:
            tasks.extend(gen_problem(problem, cfg))
    return Catalogue(tuple(tasks), cfg.digest())


def catalogue_breakdown(catalogue: Catalogue) -> dict[str, int]:
    counts = {p: 0 for p in PROBLEMS}
    for task in catalogue.tasks:
        counts[task.problem] += 1
    return {p: c for p, c in counts.items() if c}


def catalogue_notice(catalogue: Catalogue) -> str:
    """Task-count notice, including the published reference total."""
    breakdown = catalogue_breakdown(catalogue)
    detail = " + ".join(str(c) for c in breakdown.values())
    total = len(catalogue.tasks)
    return (
        f"catalogue holds {total} tasks ({detail}); the source experiments "
        f"report a {REFERENCE_TASK_TOTAL}-task campaign, a composition that "
        f"is not derivable from the published problem parameters"
    )
