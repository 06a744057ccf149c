"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Invalid molecular geometry (coincident atoms, inconsistent electron counts)."""


class ScfError(RuntimeError):
    """SCF failed to converge. Carries the last energy reached."""

    def __init__(self, message, last_energy=None):
        super().__init__(message)
        self.last_energy = last_energy


class FcidumpParseError(ValueError):
    """Malformed FCIDUMP input. Carries the offending line number (1-based)."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class CapacityError(ValueError):
    """Requested object exceeds the configured memory/dimension guard."""


class DegenerateGapError(ArithmeticError):
    """Two-level gap |h11 - h00| below the numerical guard; gain energy undefined."""


class LinearDependenceError(ValueError):
    """Proposed trial vector is (numerically) inside the span of the current basis."""


class EigenstateReached(Exception):
    """The reference vector is already an eigenstate; no orthogonal coupling remains."""
