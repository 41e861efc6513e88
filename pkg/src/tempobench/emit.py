"""Solver input emission and the canonical task interchange format.

Targets:

* ``tptp``     - FOF syntax (``.p`` files)
* ``ladr``     - Prover9 assumptions/goals blocks (``.in`` files)
* ``intohylo`` - modal syntax over one relation (``.ihl`` files)
* ``canonical``- versioned JSON, round-trips bit-exactly (``.json`` files)

First-order encodings are selectable: the standard translation maps a
liveness clause to an existentially quantified instant and a safety clause
to a universally quantified one, over a single time sort with one unary
predicate per atom; the propositional abstraction simply erases the
temporal operator.  The modal encoding uses diamond/box over relation r1
and has modal-K semantics, a documented approximation of the temporal
reading.  Emitters never clausify; connective structure is preserved so
each solver applies its own preprocessing.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum

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
    Task,
    TemporalClause,
)


class EncodingMode(Enum):
    STANDARD = "standard"  # explicit time variable, one unary predicate per atom
    ABSTRACTION = "abstraction"  # temporal operators erased, nullary predicates


TARGETS = ("tptp", "ladr", "intohylo", "canonical")

FILE_SUFFIX = {"tptp": "p", "ladr": "in", "intohylo": "ihl", "canonical": "json"}

GOAL_SAT_CHECK = "sat-check"
GOAL_ENTAILMENT = "entailment"

STRATEGY_DIRECT = "direct"  # body passed through, solver decides satisfiability
STRATEGY_NATIVE_GOAL = "native-goal"  # conjecture support of the target language
STRATEGY_NEGATED_SAT = "negated-sat"  # negation tested for satisfiability; UNSAT = proved


class CanonicalError(ValueError):
    """Base class for canonical-format parse failures."""


class MalformedTaskError(CanonicalError):
    pass


class UnknownVersionError(CanonicalError):
    pass


class InvariantViolationError(CanonicalError):
    pass


@dataclass(frozen=True)
class SolverProblem:
    """One solver-ready input text plus how to interpret its outcome."""

    target: str
    mode: str
    goal: str
    strategy: str
    text: str


# --- goal classification -------------------------------------------------

def split_goal(task: Task) -> tuple[str, list[CompoundFormula], CompoundFormula | None]:
    """(goal, axiom bodies, conjecture body) for a task.

    A top-level implication proves its consequent from its antecedent
    (an antecedent conjunction becomes one axiom per conjunct).  P8's
    square-relation bodies are proved outright: no axioms, the whole body
    is the conjecture.  Everything else is a satisfiability check.
    """
    body = task.body
    if isinstance(body, Implies):
        lhs = body.lhs
        axioms = list(lhs.children) if isinstance(lhs, And) else [lhs]
        return GOAL_ENTAILMENT, axioms, body.rhs
    if task.problem == "P8":
        return GOAL_ENTAILMENT, [], body
    return GOAL_SAT_CHECK, [body], None


# --- first-order encoding ------------------------------------------------

@dataclass(frozen=True)
class FolProblem:
    axioms: tuple[CompoundFormula, ...]
    conjecture: CompoundFormula | None
    mode: EncodingMode
    goal: str


def encode_fol(task: Task, mode: EncodingMode) -> FolProblem:
    """Split the task into axioms/conjecture and fix the encoding mode.

    Rendering happens in the target emitters; the translation itself is
    homomorphic in the connectives, so the compound structure is carried
    through unchanged.
    """
    goal, axioms, conjecture = split_goal(task)
    return FolProblem(tuple(axioms), conjecture, mode, goal)


def _fol_clause(clause: TemporalClause, mode: EncodingMode, dialect: str) -> str:
    if dialect == "tptp":
        neg, arg = "~", "(T)"
    else:
        neg, arg = "-", "(T)"
    if mode is EncodingMode.ABSTRACTION:
        arg = ""
    lits = " | ".join(
        f"{neg if lit.negated else ''}p{lit.atom}{arg}" for lit in clause.literals
    )
    if mode is EncodingMode.ABSTRACTION:
        return f"({lits})" if len(clause.literals) > 1 else lits
    if dialect == "tptp":
        quant = "?" if clause.kind is ClauseKind.LIVENESS else "!"
        return f"{quant}[T]: ({lits})"
    quant = "exists" if clause.kind is ClauseKind.LIVENESS else "all"
    return f"({quant} T ({lits}))"


def _fol_node(node: CompoundFormula, mode: EncodingMode, dialect: str, indent: str = "  ") -> str:
    neg = "~" if dialect == "tptp" else "-"
    imp = "=>" if dialect == "tptp" else "->"
    if isinstance(node, Leaf):
        parts = [_fol_clause(c, mode, dialect) for c in node.formula.clauses]
        if not parts:
            return "$true" if dialect == "tptp" else "(p1 | -p1)"
        if len(parts) == 1:
            return parts[0]
        joined = ("\n" + indent + "& ").join(parts)
        return f"( {joined} )"
    if isinstance(node, Not):
        return f"{neg}( {_fol_node(node.child, mode, dialect, indent + '  ')} )"
    if isinstance(node, And):
        inner = ("\n" + indent + "& ").join(
            f"( {_fol_node(c, mode, dialect, indent + '  ')} )" for c in node.children
        )
        return f"( {inner} )"
    if isinstance(node, Or):
        inner = ("\n" + indent + "| ").join(
            f"( {_fol_node(c, mode, dialect, indent + '  ')} )" for c in node.children
        )
        return f"( {inner} )"
    if isinstance(node, Implies):
        lhs = _fol_node(node.lhs, mode, dialect, indent + "  ")
        rhs = _fol_node(node.rhs, mode, dialect, indent + "  ")
        return f"( ( {lhs} ) {imp} ( {rhs} ) )"
    raise TypeError(f"not a compound formula node: {node!r}")


def emit_tptp(problem: FolProblem) -> str:
    """FOF problem text: axioms ``c1..cN``, optional conjecture ``goal``."""
    lines = []
    for i, axiom in enumerate(problem.axioms, start=1):
        body = _fol_node(axiom, problem.mode, "tptp")
        lines.append(f"fof(c{i}, axiom,\n  {body}\n).")
    if problem.conjecture is not None:
        body = _fol_node(problem.conjecture, problem.mode, "tptp")
        lines.append(f"fof(goal, conjecture,\n  {body}\n).")
    return "\n".join(lines) + "\n"


def emit_ladr(problem: FolProblem) -> str:
    """LADR text: assumptions block plus a goals block for entailment."""
    lines = ["formulas(sos)."]
    for axiom in problem.axioms:
        lines.append(_fol_node(axiom, problem.mode, "ladr") + ".")
    lines.append("end_of_list.")
    if problem.conjecture is not None:
        lines.append("formulas(goals).")
        lines.append(_fol_node(problem.conjecture, problem.mode, "ladr") + ".")
        lines.append("end_of_list.")
    return "\n".join(lines) + "\n"


# --- modal encoding ------------------------------------------------------

def _modal_clause(clause: TemporalClause) -> str:
    lits = " | ".join(
        f"{'-' if lit.negated else ''}p{lit.atom}" for lit in clause.literals
    )
    op = "<r1>" if clause.kind is ClauseKind.LIVENESS else "[r1]"
    return f"{op}({lits})"


def _modal_node(node: CompoundFormula, indent: str = "  ") -> str:
    if isinstance(node, Leaf):
        parts = [_modal_clause(c) for c in node.formula.clauses]
        if not parts:
            return "(p1 | -p1)"
        if len(parts) == 1:
            return parts[0]
        joined = ("\n" + indent + "& ").join(parts)
        return f"( {joined} )"
    if isinstance(node, Not):
        return f"-( {_modal_node(node.child, indent + '  ')} )"
    if isinstance(node, And):
        inner = ("\n" + indent + "& ").join(
            f"( {_modal_node(c, indent + '  ')} )" for c in node.children
        )
        return f"( {inner} )"
    if isinstance(node, Or):
        inner = ("\n" + indent + "| ").join(
            f"( {_modal_node(c, indent + '  ')} )" for c in node.children
        )
        return f"( {inner} )"
    if isinstance(node, Implies):
        lhs = _modal_node(node.lhs, indent + "  ")
        rhs = _modal_node(node.rhs, indent + "  ")
        return f"( ( {lhs} ) -> ( {rhs} ) )"
    raise TypeError(f"not a compound formula node: {node!r}")


def emit_intohylo(task: Task) -> str:
    """Modal problem text in a begin/end envelope.

    Entailment goals have no native support here, so the implication (or
    the whole square-relation body) is negated and tested for
    satisfiability: UNSAT means the goal is proved.
    """
    goal, _, _ = split_goal(task)
    body = task.body
    if goal == GOAL_ENTAILMENT:
        if isinstance(body, Implies):
            body = And((body.lhs, Not(body.rhs)))
        else:
            body = Not(body)
    return "begin\n" + _modal_node(body) + "\nend\n"


# --- canonical interchange format ----------------------------------------

CANONICAL_FORMAT = "tempobench-task"
CANONICAL_VERSION = 1


def _body_to_obj(node: CompoundFormula):
    if isinstance(node, Leaf):
        clauses = [
            [
                "L" if c.kind is ClauseKind.LIVENESS else "S",
                [(-lit.atom if lit.negated else lit.atom) for lit in c.literals],
            ]
            for c in node.formula.clauses
        ]
        return {"pool": node.formula.atom_pool_size, "clauses": clauses}
    if isinstance(node, Not):
        return {"not": _body_to_obj(node.child)}
    if isinstance(node, And):
        return {"and": [_body_to_obj(c) for c in node.children]}
    if isinstance(node, Or):
        return {"or": [_body_to_obj(c) for c in node.children]}
    if isinstance(node, Implies):
        return {"implies": [_body_to_obj(node.lhs), _body_to_obj(node.rhs)]}
    raise TypeError(f"not a compound formula node: {node!r}")


def emit_canonical(task: Task) -> str:
    doc = {
        "format": CANONICAL_FORMAT,
        "version": CANONICAL_VERSION,
        "problem": task.problem,
        "subcase": task.subcase,
        "n_clauses": task.n_clauses,
        "seed": task.seed,
        "body": _body_to_obj(task.body),
    }
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True) + "\n"


def _obj_to_body(obj) -> CompoundFormula:
    if not isinstance(obj, dict) or len(obj) not in (1, 2):
        raise MalformedTaskError(f"body node must be an object, got {obj!r}")
    if "pool" in obj:
        if set(obj) != {"pool", "clauses"}:
            raise MalformedTaskError("leaf node needs exactly 'pool' and 'clauses'")
        pool, raw_clauses = obj["pool"], obj["clauses"]
        if not isinstance(pool, int) or not isinstance(raw_clauses, list):
            raise MalformedTaskError("leaf fields have wrong types")
        clauses = []
        for entry in raw_clauses:
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or entry[0] not in ("L", "S")
                or not isinstance(entry[1], list)
            ):
                raise MalformedTaskError(f"bad clause entry {entry!r}")
            kind = ClauseKind.LIVENESS if entry[0] == "L" else ClauseKind.SAFETY
            if not all(isinstance(lit, int) for lit in entry[1]):
                raise MalformedTaskError("clause literals must be integers")
            if any(lit == 0 for lit in entry[1]):
                raise InvariantViolationError("literal 0 is not a valid atom id")
            try:
                literals = tuple(Literal(abs(lit), lit < 0) for lit in entry[1])
                clauses.append(TemporalClause(kind, literals))
            except ValueError as exc:
                raise InvariantViolationError(str(exc)) from exc
        try:
            return Leaf(Formula(tuple(clauses), pool))
        except ValueError as exc:
            raise InvariantViolationError(str(exc)) from exc
    if len(obj) != 1:
        raise MalformedTaskError(f"operator node needs exactly one key, got {obj!r}")
    (op, payload), = obj.items()
    try:
        if op == "not":
            return Not(_obj_to_body(payload))
        if op == "and":
            return And(tuple(_obj_to_body(c) for c in payload))
        if op == "or":
            return Or(tuple(_obj_to_body(c) for c in payload))
        if op == "implies":
            if not isinstance(payload, list) or len(payload) != 2:
                raise MalformedTaskError("implies needs exactly two children")
            return Implies(_obj_to_body(payload[0]), _obj_to_body(payload[1]))
    except ValueError as exc:
        raise InvariantViolationError(str(exc)) from exc
    raise MalformedTaskError(f"unknown body operator {op!r}")


def parse_canonical(text: str) -> Task:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedTaskError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedTaskError("top level must be an object")
    if doc.get("format") != CANONICAL_FORMAT:
        raise MalformedTaskError(f"unexpected format marker {doc.get('format')!r}")
    if doc.get("version") != CANONICAL_VERSION:
        raise UnknownVersionError(f"unsupported version {doc.get('version')!r}")
    required = {"format", "version", "problem", "subcase", "n_clauses", "seed", "body"}
    missing = required - set(doc)
    if missing:
        raise MalformedTaskError(f"missing keys: {sorted(missing)}")
    body = _obj_to_body(doc["body"])
    try:
        return Task(doc["problem"], doc["subcase"], doc["n_clauses"], doc["seed"], body)
    except (ValueError, TypeError) as exc:
        raise InvariantViolationError(str(exc)) from exc


# --- per-target orchestration ---------------------------------------------

def goal_transform(task: Task, target: str, mode: EncodingMode = EncodingMode.STANDARD) -> SolverProblem:
    """Solver-ready problem for one target, with the outcome-reading recorded."""
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}")
    goal, _, _ = split_goal(task)
    if target == "canonical":
        return SolverProblem("canonical", "none", goal, STRATEGY_DIRECT, emit_canonical(task))
    if target == "intohylo":
        strategy = STRATEGY_NEGATED_SAT if goal == GOAL_ENTAILMENT else STRATEGY_DIRECT
        return SolverProblem("intohylo", "modal", goal, strategy, emit_intohylo(task))
    fol = encode_fol(task, mode)
    strategy = STRATEGY_NATIVE_GOAL if goal == GOAL_ENTAILMENT else STRATEGY_DIRECT
    text = emit_tptp(fol) if target == "tptp" else emit_ladr(fol)
    return SolverProblem(target, mode.value, goal, strategy, text)


def task_filename(task: Task, target: str) -> str:
    return f"{task.task_id}.{FILE_SUFFIX[target]}"


# --- catalogue manifest ----------------------------------------------------

MANIFEST_FORMAT = "tempobench-manifest"
MANIFEST_VERSION = 1
MANIFEST_NAME = "manifest.json"


def manifest_text(catalogue: Catalogue, config_obj: dict) -> str:
    entries = []
    for task in catalogue.tasks:
        canonical = emit_canonical(task)
        entries.append(
            {
                "id": task.task_id,
                "problem": task.problem,
                "subcase": task.subcase,
                "n_clauses": task.n_clauses,
                "seed": task.seed,
                "file": task_filename(task, "canonical"),
                "sha256": hashlib.sha256(canonical.encode("utf-8")).hexdigest(),
            }
        )
    doc = {
        "format": MANIFEST_FORMAT,
        "version": MANIFEST_VERSION,
        "config_digest": catalogue.config_digest,
        "config": config_obj,
        "task_count": len(catalogue.tasks),
        "tasks": entries,
    }
    return json.dumps(doc, indent=1, ensure_ascii=True) + "\n"


def parse_manifest(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedTaskError(f"manifest is not valid JSON: {exc}") from exc
    if doc.get("format") != MANIFEST_FORMAT or doc.get("version") != MANIFEST_VERSION:
        raise MalformedTaskError("not a recognised manifest")
    return doc
