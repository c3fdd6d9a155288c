"""Exception hierarchy for boundary-value problem analysis."""


class BVPError(Exception):
    """Base class for all errors raised by genbvp."""


class InsufficientJetError(BVPError, ValueError):
    """A trajectory does not store enough derivatives for the requested operation."""


class InsufficientSmoothnessError(BVPError, ValueError):
    """A function descriptor cannot evaluate a derivative of the required order."""


class IntegrationError(BVPError, RuntimeError):
    """Coefficient evaluation or time stepping failed."""


class InvalidProblemError(BVPError, ValueError):
    """A problem failed validation; ``violations`` lists the reasons."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid problem: " + "; ".join(self.violations))


class DegenerateFamilyError(BVPError, ValueError):
    """A problem family has no perturbation large enough to form ratios."""


class SchemaError(BVPError, ValueError):
    """A problem or family description file is malformed."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
