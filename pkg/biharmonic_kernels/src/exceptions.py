"""
Exceptions raised by the library.

All of them derive from `HarnessError` so the CLI wrapper `handle_exception` can report any
library failure in one format. Library code raises, it never prints or exits.
"""
from typing import Any


class HarnessError(Exception):
    """
        Base class for every error raised by biharmonic_kernels.
    """

    def __init__(self, message="Biharmonic harness error", *args: object) -> None:
        super().__init__(message, *args)
        self.message = message


class DomainError(HarnessError):
    """
        A numeric input lies outside the domain of an operation, for example n < 2,
        a ball point with |xi| > 1 or a negative height t.
    """

    def __init__(self, message="Input outside the domain of the operation", *args: object) -> None:
        super().__init__(message, *args)
        self.message = message


class SingularityError(HarnessError):
    """
        Evaluation requested at a declared singular point: X = Y for kernels and Green
        functions, the south pole -e_{n+1} for the conformal map, the origin for the Kelvin transform.
    """

    def __init__(self, message="Evaluation at a singular point", *args: object) -> None:
        super().__init__(message, *args)
        self.message = message


class ContractError(HarnessError):
    """
        A precondition of an operation is violated: ill-posed operator pair, decay-fit hypotheses,
        the n=3 compatibility condition, sign constraints of the comparison principle.
    """

    def __init__(self, message="Operation contract violated", *args: object) -> None:
        super().__init__(message, *args)
        self.message = message


class EvaluationError(HarnessError):
    """
        A field cannot be evaluated where a stencil needs it.
    """

    def __init__(self, message="Field not evaluable at the requested stencil points", *args: object) -> None:
        super().__init__(message, *args)
        self.message = message


class QuadratureError(HarnessError):
    """
        Quadrature did not reach the requested tolerance.

        `diagnostics` holds the refinement history (values, node counts, truncation radius)
        so callers and the CLI can show what went wrong.
    """

    def __init__(self, message="Quadrature did not converge", *args: object, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message, *args)
        self.message = message
        self.diagnostics = diagnostics or {}


class StiffnessError(HarnessError):
    """
        The ODE integrator had to shrink its step below machine resolution.
    """

    def __init__(self, message="Step size underflow during integration", *args: object) -> None:
        super().__init__(message, *args)
        self.message = message
