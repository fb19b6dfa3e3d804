"""
Small term language for quantifier-free linear integer constraints.

Terms are immutable and hashable. The smart constructors `conj`, `disj`, `neg` and
`implies` fold constants so pinned variables do not bloat the model. `Linear` holds a
weighted sum over integer variables and booleans (a boolean counts as 0 or 1).
"""
from dataclasses import dataclass
from typing import Iterable, Mapping, Tuple, Union

Value = Union[bool, int]

BOOL = "Bool"
INT = "Int"


class Term:
    pass


@dataclass(frozen=True)
class Const(Term):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Var(Term):
    name: str
    sort: str = BOOL


@dataclass(frozen=True)
class Not(Term):
    arg: Term


@dataclass(frozen=True)
class And(Term):
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class Or(Term):
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class Implies(Term):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Linear(Term):
    """sum(coef * term) <op> bound, op one of '>=', '<=', '='."""
    terms: Tuple[Tuple[int, Term], ...]
    op: str
    bound: int


def neg(arg: Term) -> Term:
    if isinstance(arg, Const):
        return FALSE if arg.value else TRUE
    if isinstance(arg, Not):
        return arg.arg
    return Not(arg)


def conj(*args: Term) -> Term:
    flat = []
    for arg in args:
        if arg == TRUE:
            continue
        if arg == FALSE:
            return FALSE
        flat.extend(arg.args if isinstance(arg, And) else (arg,))
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*args: Term) -> Term:
    flat = []
    for arg in args:
        if arg == FALSE:
            continue
        if arg == TRUE:
            return TRUE
        flat.extend(arg.args if isinstance(arg, Or) else (arg,))
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def implies(lhs: Term, rhs: Term) -> Term:
    if lhs == FALSE or rhs == TRUE:
        return TRUE
    if lhs == TRUE:
        return rhs
    if rhs == FALSE:
        return neg(lhs)
    return Implies(lhs, rhs)


def linear(terms: Iterable[Tuple[int, Term]], op: str, bound: int) -> Term:
    if op not in (">=", "<=", "="):
        raise ValueError(f"unknown comparison '{op}'")
    kept = []
    for coef, term in terms:
        if coef == 0 or term == FALSE:
            continue
        if term == TRUE:
            bound -= coef
            continue
        kept.append((coef, term))
    if not kept:
        holds = {">=": 0 >= bound, "<=": 0 <= bound, "=": bound == 0}[op]
        return TRUE if holds else FALSE
    return Linear(tuple(kept), op, bound)


def variables(term: Term) -> Iterable[Var]:
    """Every variable occurring in `term`, with repeats."""
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            yield t
        elif isinstance(t, Not):
            stack.append(t.arg)
        elif isinstance(t, (And, Or)):
            stack.extend(t.args)
        elif isinstance(t, Implies):
            stack.extend((t.lhs, t.rhs))
        elif isinstance(t, Linear):
            stack.extend(x for _, x in t.terms)


def evaluate(term: Term, assignment: Mapping[str, Value]) -> Value:
    """Value of `term`; variables missing from `assignment` read as false / 0."""
    if isinstance(term, Const):
        return term.value
    if isinstance(term, Var):
        return assignment.get(term.name, False if term.sort == BOOL else 0)
    if isinstance(term, Not):
        return not evaluate(term.arg, assignment)
    if isinstance(term, And):
        return all(evaluate(a, assignment) for a in term.args)
    if isinstance(term, Or):
        return any(evaluate(a, assignment) for a in term.args)
    if isinstance(term, Implies):
        return (not evaluate(term.lhs, assignment)) or bool(evaluate(term.rhs, assignment))
    if isinstance(term, Linear):
        total = sum(coef * int(evaluate(t, assignment)) for coef, t in term.terms)
        if term.op == ">=":
            return total >= term.bound
        if term.op == "<=":
            return total <= term.bound
        return total == term.bound
    raise TypeError(f"not a term: {term!r}")
