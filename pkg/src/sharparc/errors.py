"""Exception hierarchy shared by every module of the package."""


class SharpArcError(Exception):
    """Base class for all errors raised by sharparc."""


class ConstructionError(SharpArcError, ValueError):
    """Invalid parameters or inconsistent input for a construction."""


class DegreeMismatchError(SharpArcError, ValueError):
    """Two permutations (or a permutation and a domain) disagree in degree."""


class GroupError(SharpArcError, ValueError):
    """A group-theoretic precondition does not hold."""


class ResourceLimitError(SharpArcError, RuntimeError):
    """A search or enumeration exceeded its configured budget.

    Raised instead of returning a possibly incomplete answer.
    """
