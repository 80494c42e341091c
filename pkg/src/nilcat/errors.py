"""Exception hierarchy and enumeration budgets."""

import os

DEFAULT_COBOUNDARY_BUDGET = 2**20
DEFAULT_PF_BUDGET = 2**24
DEFAULT_FO_BUDGET = 10**9


def budget(default):
    """Return the enumeration budget, honouring the NILCAT_BUDGET override."""
    raw = os.environ.get("NILCAT_BUDGET")
    if raw:
        return int(raw)
    return default


class NilcatError(Exception):
    pass


class InvalidModulus(NilcatError, ValueError):
    pass


class NotEnumerable(NilcatError, TypeError):
    pass


class IncompatibleElements(NilcatError, ValueError):
    pass


class NotInCentralizer(NilcatError, ValueError):
    pass


class InvalidNormalization(NilcatError, ValueError):
    pass


class SearchInfeasible(NilcatError, RuntimeError):
    pass


class MustVerifyCocycle(NilcatError, ValueError):
    pass


class InvalidMap(NilcatError, ValueError):
    pass


class NotABasis(NilcatError, ValueError):
    pass


class FormulaSyntaxError(NilcatError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EvaluationError(NilcatError, ValueError):
    pass
