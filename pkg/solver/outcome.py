import enum
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

Value = Union[bool, int]


class SolverError(ValueError):
    pass


class LimitExceeded(SolverError):
    pass


class InconsistentModel(SolverError):
    pass


class Status(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"
    TIMEOUT = "timeout"
    SOLVER_ERROR = "solver-error"


@dataclass(frozen=True)
class SolveOutcome:
    """
    Attributes:
        status: solver verdict.
        assignment: variable name -> value; present iff status is SAT.
        wall_time: seconds spent solving.
        n_variables, n_assertions: size of the solved model.
        backend: "smt" or "enumerative".
        message: diagnostic for errors, timeouts and unknowns.
    """
    status: Status
    assignment: Optional[Dict[str, Value]] = None
    wall_time: float = 0.0
    n_variables: int = 0
    n_assertions: int = 0
    backend: str = "smt"
    message: str = ""
    stats: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if (self.assignment is not None) != (self.status == Status.SAT):
            raise ValueError("an assignment is present exactly when the status is SAT")
