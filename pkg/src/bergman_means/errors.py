"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """A Gamma factor sits on a pole."""


class ConvergenceError(ArithmeticError):
    """A series did not reach the requested tolerance."""

    def __init__(self, message, last_term=float("nan"), terms=0):
        super().__init__(message)
        self.last_term = last_term
        self.terms = terms


class AliasingError(DomainError):
    """Requested band is not resolvable on the sample grid."""


class ConditioningError(DomainError):
    """Evaluation point too close to the boundary for the quadrature grid."""


class ConstraintError(DomainError):
    """A named hypothesis or feasibility constraint is violated."""

    def __init__(self, constraint, detail=None):
        super().__init__(f"constraint {constraint} violated" + (f": {detail}" if detail else ""))
        self.constraint = constraint


class CapacityError(RuntimeError):
    """Schedule construction ran out of representable radii."""

    def __init__(self, message, depth):
        super().__init__(message)
        self.depth = depth


class ConstructionError(RuntimeError):
    """A construction could not meet its certificate."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class FitError(ValueError):
    pass


class SpecError(ValueError):
    """Malformed function-spec or suite configuration."""

    def __init__(self, message, path=None, line=None, column=None):
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(f"field {path}")
        super().__init__(f"{message}" + (f" ({'; '.join(where)})" if where else ""))
        self.path = path
        self.line = line
        self.column = column
