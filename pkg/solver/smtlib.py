"""
SMT-LIB2 emission and S-expression reading.

Emission is deterministic: declarations in model order, assertions in rule order,
booleans inside sums written as (ite b 1 0).
"""
import io
import re
from typing import Dict, List, Union

from encoder.model import ConstraintModel
from encoder.terms import And, Const, Implies, Linear, Not, Or, Term, Var
from solver.outcome import SolverError, Value

SExpr = Union[str, List["SExpr"]]

_TOKEN = re.compile(r'\s+|;[^\n]*|\(|\)|\|[^|]*\||"(?:[^"]|"")*"|[^\s()";|]+')


def _int(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


def _summand(coef: int, term: Term) -> str:
    body = term.name if isinstance(term, Var) and term.sort == "Int" else f"(ite {render(term)} 1 0)"
    return body if coef == 1 else f"(* {_int(coef)} {body})"


def render(term: Term) -> str:
    if isinstance(term, Const):
        return "true" if term.value else "false"
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Not):
        return f"(not {render(term.arg)})"
    if isinstance(term, And):
        return "(and " + " ".join(render(a) for a in term.args) + ")"
    if isinstance(term, Or):
        return "(or " + " ".join(render(a) for a in term.args) + ")"
    if isinstance(term, Implies):
        return f"(=> {render(term.lhs)} {render(term.rhs)})"
    if isinstance(term, Linear):
        parts = [_summand(c, t) for c, t in term.terms]
        total = parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"
        return f"({term.op} {total} {_int(term.bound)})"
    raise TypeError(f"not a term: {term!r}")


def to_smtlib(model: ConstraintModel) -> str:
    out = io.StringIO()
    out.write("; grid surveillance constraint model\n")
    out.write(f"; horizon {model.horizon}, {model.n_uavs} UAVs, {len(model.points)} points, "
              f"cyclic {str(model.cyclic).lower()}\n")
    out.write("(set-option :produce-models true)\n")
    out.write("(set-logic QF_LIA)\n")
    for var in model.declarations:
        out.write(f"(declare-const {var.name} {var.sort})\n")
    group = None
    for name, term in model.assertions:
        if name != group:
            out.write(f"; {name}\n")
            group = name
        out.write(f"(assert {render(term)})\n")
    out.write("(check-sat)\n")
    out.write("(get-model)\n")
    return out.getvalue()


def parse_sexprs(text: str) -> List[SExpr]:
    """All top-level S-expressions and atoms of `text`."""
    stack: List[List[SExpr]] = [[]]
    for match in _TOKEN.finditer(text):
        token = match.group(0)
        if token.isspace() or token.startswith(";"):
            continue
        if token == "(":
            stack.append([])
        elif token == ")":
            if len(stack) == 1:
                raise SolverError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(token[1:-1] if token.startswith("|") else token)
    if len(stack) != 1:
        raise SolverError("unterminated S-expression in solver output")
    return stack[0]


def _value(expr: SExpr) -> Value:
    if expr == "true":
        return True
    if expr == "false":
        return False
    if isinstance(expr, str):
        try:
            return int(expr)
        except ValueError:
            raise SolverError(f"unexpected model value '{expr}'") from None
    if len(expr) == 2 and expr[0] == "-":
        return -int(_value(expr[1]))
    raise SolverError(f"unexpected model value {expr!r}")


def read_model(exprs: List[SExpr]) -> Dict[str, Value]:
    """Collect every (define-fun name () Sort value) found in `exprs`, at any depth."""
    assignment: Dict[str, Value] = {}
    stack = list(exprs)
    while stack:
        expr = stack.pop()
        if not isinstance(expr, list):
            continue
        if len(expr) == 5 and expr[0] == "define-fun" and expr[2] == []:
            assignment[expr[1]] = _value(expr[4])
        else:
            stack.extend(expr)
    return assignment
