"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""


class DesignError(Exception):
    exit_code = 65


class ParameterError(DesignError, ValueError):
    pass


class InvalidDesign(DesignError, ValueError):
    pass


class MalformedInput(DesignError, ValueError):
    pass


class ArityError(DesignError, ValueError):
    pass


class InconsistentStructure(DesignError, ValueError):
    pass


class NotClosed(DesignError, ValueError):
    """An amalgamation base does not map onto a closed set."""


class InvalidInput(DesignError, ValueError):
    pass


class EmptyPattern(DesignError, ValueError):
    """B has copies in C but A has none, so the coloring space is empty."""


class SizeLimit(DesignError):
    pass


class BudgetExceeded(DesignError):
    exit_code = 2

    def __init__(self, message="search budget exceeded", nodes=None):
        super().__init__(message)
        self.nodes = nodes


class Budget:
    """Node counter shared by the exhaustive searches."""

    def __init__(self, limit=None):
        self.limit = limit
        self.nodes = 0

    def tick(self, amount=1):
        self.nodes += amount
        if self.limit is not None and self.nodes > self.limit:
            raise BudgetExceeded(f"search budget of {self.limit} nodes exceeded", self.nodes)
