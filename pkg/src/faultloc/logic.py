"""Propositional formulas, the KB text format, and a complete SAT/entailment oracle.

Formula trees are immutable and hashable; every operation in this module is a
pure function, so concurrent callers never share mutable state.  Satisfiability
is decided by a DPLL procedure over an equisatisfiable clause form.  The solver
counts branching decisions against a step budget and raises
:class:`ResourceLimitError` when it is exceeded -- it never degrades to a
silent wrong answer.

KB text format (UTF-8, line oriented)::

    # comment
    o: <formula>              possibly-faulty axiom
    b: <formula>              trusted background axiom
    p: <formula>[; <formula>] positive test case (conjunction must be entailed)
    n: <formula>[; <formula>] negative test case (conjunction must not be entailed)

Operators: ``!``, ``&``, ``|``, ``->``, ``<->``, parentheses, ``true``/``false``.
Precedence ``!`` > ``&`` > ``|`` > ``->`` > ``<->``; the arrows associate to
the right.  Atom names match ``[A-Za-z][A-Za-z0-9_]*``; names starting with an
underscore are reserved for clausification auxiliaries and rejected by the
parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

AUX_PREFIX = "_t"
DEFAULT_STEP_BUDGET = 10_000_000

# Distributing OR over AND is exact CNF; past this many product clauses the
# clausifier switches to definitional auxiliaries to stay polynomial.
_DISTRIBUTE_LIMIT = 16

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class LogicError(Exception):
    """Base class for errors raised by this module."""


class KBParseError(LogicError):
    """Syntax or structural error in KB text, with 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ResourceLimitError(LogicError):
    """The solver exceeded its decision budget before reaching an answer."""


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Formula:
    """Base class; concrete nodes are the subclasses below."""

    def render(self) -> str:
        return _render(self, 0)

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.render()


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


TRUE = Const(True)
FALSE = Const(False)


def conj(children: Iterable[Formula]) -> Formula:
    """N-ary conjunction, collapsing the 0- and 1-child cases."""
    items = tuple(children)
    if not items:
        return TRUE
    if len(items) == 1:
        return items[0]
    return And(items)


def disj(children: Iterable[Formula]) -> Formula:
    items = tuple(children)
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Or(items)


@dataclass(frozen=True)
class Axiom:
    """A formula with the stable id it received at parse time (file order)."""

    id: int
    formula: Formula

    def render(self) -> str:
        return self.formula.render()


# precedence levels for rendering / parsing: higher binds tighter
_LEVEL = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Const: 6}


def _render(f: Formula, parent_level: int) -> str:
    level = _LEVEL[type(f)]
    if isinstance(f, Atom):
        text = f.name
    elif isinstance(f, Const):
        text = "true" if f.value else "false"
    elif isinstance(f, Not):
        text = "!" + _render(f.child, level)
    elif isinstance(f, And):
        text = " & ".join(_render(c, level) for c in f.children)
    elif isinstance(f, Or):
        text = " | ".join(_render(c, level) for c in f.children)
    elif isinstance(f, Implies):
        # right-associative: the rhs may be another implication unparenthesized
        text = _render(f.lhs, level + 1) + " -> " + _render(f.rhs, level)
    elif isinstance(f, Iff):
        text = _render(f.lhs, level + 1) + " <-> " + _render(f.rhs, level)
    else:  # pragma: no cover
        raise TypeError(f"unknown formula node {f!r}")
    if level < parent_level:
        return "(" + text + ")"
    return text


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<iff><->)
  | (?P<implies>->)
  | (?P<not>!)
  | (?P<and>&)
  | (?P<or>\|)
  | (?P<lpar>\()
  | (?P<rpar>\))
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int  # 1-based, relative to the full line


def _tokenize(text: str, line: int, col_offset: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise KBParseError(
                f"unexpected character {text[pos]!r}", line, col_offset + pos + 1
            )
        kind = m.lastgroup or ""
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), col_offset + m.start() + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", col_offset + len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], line: int):
        self.tokens = tokens
        self.line = line
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str) -> KBParseError:
        return KBParseError(message, self.line, self.peek().column)

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek().kind != "eof":
            raise self.error(f"unexpected {self.peek().text!r}")
        return f

    def iff(self) -> Formula:
        lhs = self.implies()
        if self.peek().kind == "iff":
            self.take()
            return Iff(lhs, self.iff())
        return lhs

    def implies(self) -> Formula:
        lhs = self.disjunction()
        if self.peek().kind == "implies":
            self.take()
            return Implies(lhs, self.implies())
        return lhs

    def disjunction(self) -> Formula:
        items = [self.conjunction()]
        while self.peek().kind == "or":
            self.take()
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conjunction(self) -> Formula:
        items = [self.unary()]
        while self.peek().kind == "and":
            self.take()
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self) -> Formula:
        if self.peek().kind == "not":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "lpar":
            self.take()
            f = self.iff()
            if self.peek().kind != "rpar":
                raise self.error("expected ')'")
            self.take()
            return f
        if tok.kind == "ident":
            self.take()
            if tok.text == "true":
                return TRUE
            if tok.text == "false":
                return FALSE
            if tok.text.startswith("_"):
                raise KBParseError(
                    f"atom name {tok.text!r} is reserved (leading underscore)",
                    self.line,
                    tok.column,
                )
            return Atom(tok.text)
        if tok.kind == "eof":
            raise self.error("unexpected end of formula")
        raise self.error(f"unexpected {tok.text!r}")


def parse_formula(text: str, line: int = 1, col_offset: int = 0) -> Formula:
    """Parse a single formula; raises :class:`KBParseError` with position."""
    return _Parser(_tokenize(text, line, col_offset), line).parse()


def parse_kb(
    text: str,
) -> tuple[
    list[Axiom],
    list[Axiom],
    list[tuple[Formula, ...]],
    list[tuple[Formula, ...]],
]:
    """Parse KB text into (O, B, positive cases, negative cases).

    Axiom ids are assigned 1, 2, ... in file order across the ``o:`` and
    ``b:`` lines.  Test cases are returned as tuples of formulas (interpreted
    as conjunctions).  Raises :class:`KBParseError` on syntax errors, on an
    axiom declared twice (in any combination of sections), and on an empty O.
    """
    o_axioms: list[Axiom] = []
    b_axioms: list[Axiom] = []
    positives: list[tuple[Formula, ...]] = []
    negatives: list[tuple[Formula, ...]] = []
    seen_axioms: dict[Formula, int] = {}
    next_id = 1

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = re.match(r"^\s*([obpn])\s*:", raw)
        if m is None:
            raise KBParseError(
                "expected 'o:', 'b:', 'p:' or 'n:' line", lineno, len(raw) - len(raw.lstrip()) + 1
            )
        tag = m.group(1)
        body_offset = m.end()
        body = raw[body_offset:]
        if tag in ("o", "b"):
            formula = parse_formula(body, lineno, body_offset)
            if formula in seen_axioms:
                raise KBParseError(
                    f"axiom already declared on line {seen_axioms[formula]}",
                    lineno,
                    body_offset + 1,
                )
            seen_axioms[formula] = lineno
            axiom = Axiom(next_id, formula)
            next_id += 1
            (o_axioms if tag == "o" else b_axioms).append(axiom)
        else:
            parts: list[Formula] = []
            offset = body_offset
            for segment in body.split(";"):
                if not segment.strip():
                    raise KBParseError("empty test-case conjunct", lineno, offset + 1)
                parts.append(parse_formula(segment, lineno, offset))
                offset += len(segment) + 1
            (positives if tag == "p" else negatives).append(tuple(parts))

    if not o_axioms:
        raise KBParseError("KB declares no possibly-faulty axioms (no 'o:' lines)", 1, 1)
    return o_axioms, b_axioms, positives, negatives


def render_kb(
    o: Sequence[Axiom],
    b: Sequence[Axiom],
    positives: Sequence[Iterable[Formula]] = (),
    negatives: Sequence[Iterable[Formula]] = (),
) -> str:
    """Inverse of :func:`parse_kb` up to formula structure."""
    lines = []
    for ax in o:
        lines.append(f"o: {ax.render()}")
    for ax in b:
        lines.append(f"b: {ax.render()}")
    for case in positives:
        lines.append("p: " + "; ".join(f.render() for f in case))
    for case in negatives:
        lines.append("n: " + "; ".join(f.render() for f in case))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# clause form

Literal = tuple[str, bool]  # (atom name, True for positive occurrence)


@dataclass(frozen=True)
class ClauseSet:
    """CNF equisatisfiable with its source formulas; auxiliaries use ``_t``."""

    clauses: frozenset[frozenset[Literal]]


def _nnf(f: Formula, positive: bool) -> Formula:
    """Negation normal form of f (or its negation when positive is False)."""
    if isinstance(f, Const):
        return Const(f.value == positive)
    if isinstance(f, Atom):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.child, not positive)
    if isinstance(f, And):
        parts = tuple(_nnf(c, positive) for c in f.children)
        return _simplify_and(parts) if positive else _simplify_or(parts)
    if isinstance(f, Or):
        parts = tuple(_nnf(c, positive) for c in f.children)
        return _simplify_or(parts) if positive else _simplify_and(parts)
    if isinstance(f, Implies):
        if positive:
            return _simplify_or((_nnf(f.lhs, False), _nnf(f.rhs, True)))
        return _simplify_and((_nnf(f.lhs, True), _nnf(f.rhs, False)))
    if isinstance(f, Iff):
        a, na = _nnf(f.lhs, True), _nnf(f.lhs, False)
        b, nb = _nnf(f.rhs, True), _nnf(f.rhs, False)
        if positive:
            return _simplify_and((_simplify_or((na, b)), _simplify_or((a, nb))))
        return _simplify_and((_simplify_or((a, b)), _simplify_or((na, nb))))
    raise TypeError(f"unknown formula node {f!r}")  # pragma: no cover


def _simplify_and(parts: tuple[Formula, ...]) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if p == TRUE:
            continue
        if p == FALSE:
            return FALSE
        if isinstance(p, And):
            flat.extend(p.children)
        else:
            flat.append(p)
    return conj(flat)


def _simplify_or(parts: tuple[Formula, ...]) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if p == FALSE:
            continue
        if p == TRUE:
            return TRUE
        if isinstance(p, Or):
            flat.extend(p.children)
        else:
            flat.append(p)
    return disj(flat)


def _cnf(f: Formula, aux: Iterator[str]) -> list[frozenset[Literal]]:
    """CNF of an NNF formula; introduces auxiliaries past the distribute limit."""
    if f == TRUE:
        return []
    if f == FALSE:
        return [frozenset()]
    if isinstance(f, Atom):
        return [frozenset({(f.name, True)})]
    if isinstance(f, Not):
        assert isinstance(f.child, Atom)
        return [frozenset({(f.child.name, False)})]
    if isinstance(f, And):
        out: list[frozenset[Literal]] = []
        for c in f.children:
            out.extend(_cnf(c, aux))
        return out
    if isinstance(f, Or):
        child_cnfs = [_cnf(c, aux) for c in f.children]
        product = 1
        for cc in child_cnfs:
            if not cc:  # child is TRUE
                return []
            product *= len(cc)
        if product > _DISTRIBUTE_LIMIT:
            # definitional form: replace each multi-clause branch by a fresh
            # literal implying that branch
            reduced: list[list[frozenset[Literal]]] = []
            extra: list[frozenset[Literal]] = []
            for cc in child_cnfs:
                if len(cc) <= 1:
                    reduced.append(cc)
                    continue
                name = next(aux)
                lit: Literal = (name, True)
                for clause in cc:
                    extra.append(clause | {(name, False)})
                reduced.append([frozenset({lit})])
            child_cnfs = reduced
            out = extra
        else:
            out = []
        acc: list[frozenset[Literal]] = [frozenset()]
        for cc in child_cnfs:
            acc = [base | clause for base in acc for clause in cc]
        out.extend(acc)
        return out
    raise TypeError(f"non-NNF node {f!r}")  # pragma: no cover


def _aux_names() -> Iterator[str]:
    n = 0
    while True:
        n += 1
        yield f"{AUX_PREFIX}{n}"


def to_clauses(formulas: Iterable[Formula]) -> ClauseSet:
    """Equisatisfiable clause form of a formula set.

    Auxiliary atoms carry the reserved ``_t`` prefix and never collide with
    user atoms (the parser rejects leading underscores).
    """
    aux = _aux_names()
    clauses: set[frozenset[Literal]] = set()
    for f in formulas:
        for clause in _cnf(_nnf(f, True), aux):
            if any((name, not pol) in clause for name, pol in clause):
                continue  # tautology
            clauses.add(clause)
    return ClauseSet(frozenset(clauses))


# ---------------------------------------------------------------------------
# DPLL

def _solve_clauses(clause_set: ClauseSet, step_budget: int) -> bool:
    names = sorted({name for clause in clause_set.clauses for name, _ in clause})
    index = {name: i + 1 for i, name in enumerate(names)}
    clauses = [
        frozenset((index[name] if pol else -index[name]) for name, pol in clause)
        for clause in clause_set.clauses
    ]
    budget = [step_budget]
    return _dpll(clauses, {}, budget)


def _dpll(clauses: list[frozenset[int]], assignment: dict[int, bool], budget: list[int]) -> bool:
    while True:
        simplified: list[frozenset[int]] = []
        unit: int | None = None
        for clause in clauses:
            live = []
            satisfied = False
            for lit in clause:
                val = assignment.get(abs(lit))
                if val is None:
                    live.append(lit)
                elif val == (lit > 0):
                    satisfied = True
                    break
            if satisfied:
                continue
            if not live:
                return False
            if len(live) == 1 and unit is None:
                unit = live[0]
            simplified.append(frozenset(live))
        if not simplified:
            return True
        if unit is None:
            break
        assignment = dict(assignment)
        assignment[abs(unit)] = unit > 0
        clauses = simplified

    budget[0] -= 1
    if budget[0] < 0:
        raise ResourceLimitError("solver exceeded its decision budget")
    counts: dict[int, int] = {}
    for clause in simplified:
        for lit in clause:
            counts[abs(lit)] = counts.get(abs(lit), 0) + 1
    var = max(counts, key=lambda v: (counts[v], -v))
    for value in (True, False):
        trial = dict(assignment)
        trial[var] = value
        if _dpll(simplified, trial, budget):
            return True
    return False


# verdict cache: satisfiability of a formula set does not depend on the budget
_SAT_CACHE: dict[frozenset[Formula], bool] = {}
_SAT_CACHE_MAX = 1 << 18


def is_consistent(
    formulas: Iterable[Formula], step_budget: int = DEFAULT_STEP_BUDGET
) -> bool:
    """True iff the formula set has a satisfying assignment.

    Complete decision procedure.  Raises :class:`ResourceLimitError` when the
    budget runs out; the error is reported distinctly and never cached.
    """
    key = frozenset(formulas)
    cached = _SAT_CACHE.get(key)
    if cached is not None:
        return cached
    result = _solve_clauses(to_clauses(key), step_budget)
    if len(_SAT_CACHE) >= _SAT_CACHE_MAX:
        _SAT_CACHE.clear()
    _SAT_CACHE[key] = result
    return result


def entails(
    kb: Iterable[Formula],
    goal: Union[Formula, Iterable[Formula]],
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> bool:
    """True iff kb entails the conjunction of goal (classically).

    An inconsistent kb entails everything.
    """
    goal_formula = goal if isinstance(goal, Formula) else conj(tuple(goal))
    return not is_consistent(frozenset(kb) | {Not(goal_formula)}, step_budget)
