"""Exception hierarchy shared by all modules."""


class QuotcertError(Exception):
    """Base class for every error raised by the package."""


class PolynomialSyntaxError(QuotcertError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownVariableError(QuotcertError):
    def __init__(self, name):
        super().__init__(f"unknown variable {name!r}")
        self.name = name


class RingMismatchError(QuotcertError):
    pass


class ResourceLimitExceeded(QuotcertError):
    """A Groebner computation hit its reduction-step cap."""


class DecompositionIncomplete(QuotcertError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ImageUnresolved(QuotcertError):
    def __init__(self, message, partial=None, residual=()):
        super().__init__(message)
        self.partial = partial
        self.residual = list(residual)


class NilpotencyBoundExceeded(QuotcertError):
    def __init__(self, bound, survivor):
        super().__init__(f"derivation not nilpotent within {bound} steps; surviving derivative {survivor}")
        self.bound = bound
        self.survivor = survivor


class ConeRankError(QuotcertError):
    pass


class WeightOutsideConeError(QuotcertError):
    pass


class GradingError(QuotcertError):
    pass


class InvariantViolation(QuotcertError):
    """An internal consistency assertion failed; indicates a bug."""


class ScenarioError(QuotcertError):
    def __init__(self, diagnostics):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


class NotInvariantError(QuotcertError):
    """A supplied generator is not killed by some derivation."""

    def __init__(self, failures):
        super().__init__("invariance check failed for " + ", ".join(sorted({f.invariant for f in failures})))
        self.failures = list(failures)
