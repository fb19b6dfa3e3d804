"""
Drive an external SMT-LIB2 solver as a child process.

Usage:
    builder = SolverBuilder(("z3", "-in"), timeout_s=60)
    outcome = solve_external(to_smtlib(model), builder)
"""
import logging
import os
import shlex
import subprocess
import time
from typing import Optional, Sequence, Union

from solver.outcome import SolveOutcome, SolverError, Status
from solver.smtlib import parse_sexprs, read_model

logger = logging.getLogger(__name__)

DEFAULT_COMMAND = ("z3", "-in")
SOLVER_ENV = "GRID_SENTINEL_SOLVER"


class SolverBuilder:
    """
    Args:
        command: argv (or a shell-style string) of a solver reading SMT-LIB2 on stdin;
            falls back to $GRID_SENTINEL_SOLVER, then to `z3 -in`.
        timeout_s: wall-clock limit; the child is killed when it runs out.
    """

    def __init__(self, command: Optional[Union[str, Sequence[str]]] = None, timeout_s: float = 600.0) -> None:
        if command is None:
            command = os.environ.get(SOLVER_ENV) or DEFAULT_COMMAND
        if isinstance(command, str):
            command = shlex.split(command)
        if not command:
            raise ValueError("solver command is empty")
        if timeout_s <= 0:
            raise ValueError("solver timeout must be positive")
        self.command = tuple(command)
        self.timeout_s = timeout_s


def _excerpt(text: str, limit: int = 200) -> str:
    text = " ".join(text.split())
    return text if len(text) <= limit else text[:limit] + "..."


def solve_external(script: str, builder: Optional[SolverBuilder] = None,
                   n_variables: int = 0, n_assertions: int = 0) -> SolveOutcome:
    """
    Feed `script` to the solver and read its verdict and model.

    Raises:
        SolverError: the solver process cannot be started.
    """
    builder = builder or SolverBuilder()
    sizes = dict(n_variables=n_variables, n_assertions=n_assertions, backend="smt")
    start = time.perf_counter()
    try:
        child = subprocess.Popen(builder.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                                 stderr=subprocess.PIPE, text=True)
    except OSError as exc:
        raise SolverError(f"cannot start solver '{' '.join(builder.command)}': {exc}") from None

    try:
        stdout, stderr = child.communicate(script, timeout=builder.timeout_s)
    except subprocess.TimeoutExpired:
        child.kill()
        child.communicate()
        elapsed = time.perf_counter() - start
        logger.warning(f"solver timed out after {builder.timeout_s}s")
        return SolveOutcome(Status.TIMEOUT, wall_time=elapsed, message=f"timeout after {builder.timeout_s}s",
                            **sizes)
    elapsed = time.perf_counter() - start

    try:
        exprs = parse_sexprs(stdout)
    except SolverError as exc:
        return SolveOutcome(Status.SOLVER_ERROR, wall_time=elapsed, message=str(exc), **sizes)

    verdict = exprs[0] if exprs and isinstance(exprs[0], str) else None
    if verdict == "sat":
        try:
            assignment = read_model(exprs[1:])
        except SolverError as exc:
            return SolveOutcome(Status.SOLVER_ERROR, wall_time=elapsed, message=str(exc), **sizes)
        logger.info(f"solver: sat in {elapsed:.2f}s, {len(assignment)} values")
        return SolveOutcome(Status.SAT, assignment, wall_time=elapsed, **sizes)
    if verdict == "unsat":
        logger.info(f"solver: unsat in {elapsed:.2f}s")
        return SolveOutcome(Status.UNSAT, wall_time=elapsed, **sizes)
    if verdict == "unknown":
        return SolveOutcome(Status.UNKNOWN, wall_time=elapsed, message="solver answered unknown", **sizes)

    message = f"exit code {child.returncode}; output: {_excerpt(stdout) or _excerpt(stderr) or '(none)'}"
    logger.error(f"solver error: {message}")
    return SolveOutcome(Status.SOLVER_ERROR, wall_time=elapsed, message=message, **sizes)
