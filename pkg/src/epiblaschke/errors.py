"""Exception hierarchy.

Every error carries a stable ``code`` string; the CLI reports it verbatim in
its JSON diagnostics.
"""


class EpiError(Exception):
    code = "error"


class DomainError(EpiError, ValueError):
    code = "domain_error"


class PoleError(EpiError, ZeroDivisionError):
    code = "pole"


class DegenerateError(EpiError, ArithmeticError):
    code = "degenerate"


class ConvergenceError(EpiError, ArithmeticError):
    code = "no_convergence"


class AmbiguousClassification(EpiError):
    code = "ambiguous_classification"


class InconsistentClassification(EpiError):
    code = "inconsistent_classification"


class ExcludedPoint(EpiError, ValueError):
    code = "excluded_point"


class NoRepellingFixedPoint(EpiError):
    code = "no_repelling_fixed_point"
