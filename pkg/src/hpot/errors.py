"""Exception types shared across the library.

Each class carries a stable ``code`` string; the CLI emits it in error JSON
and maps it to an exit status.
"""


class HpotError(Exception):
    code = "error"


class DomainError(HpotError):
    """A mathematical precondition was violated (argument outside its domain)."""

    code = "domain"


class SingularityError(DomainError):
    """Evaluation requested exactly at a kernel singularity."""

    code = "singularity"


class DimensionError(DomainError):
    """Operands carry incompatible dimensions."""

    code = "dimension"


class IntegrabilityError(HpotError):
    """Input data fails the integrability gate required by the operation."""

    code = "integrability"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SchemaError(HpotError):
    """Structured input does not match the documented schema."""

    code = "schema"

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class InfeasibleError(HpotError):
    """Linear program has no feasible point."""

    code = "infeasible"


class NumericalError(HpotError):
    """An internal consistency check on a numerical routine failed."""

    code = "numerical"
