"""Exception hierarchy shared by the reasoner modules."""


class DisponteError(Exception):
    pass


class PreconditionError(DisponteError, ValueError):
    """An operation was called with arguments outside its contract."""


class InvariantError(DisponteError):
    """Internal consistency check failed (naming collision, result mismatch...)."""


class ResourceLimitError(DisponteError):
    """Base for explicit refusals caused by a configured bound."""


class BudgetExceeded(ResourceLimitError):
    def __init__(self, budget: int):
        super().__init__(f"tableau expansion budget of {budget} rule firings exceeded")
        self.budget = budget


class CapExceeded(ResourceLimitError):
    def __init__(self, what: str, required: int, cap: int):
        super().__init__(f"{what}: {required} exceeds the configured cap of {cap}")
        self.required = required
        self.cap = cap


class DnfTooLarge(ResourceLimitError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"DNF expansion would reach {size} disjuncts (limit {limit})")
        self.size = size
        self.limit = limit
