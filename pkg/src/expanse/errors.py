"""Exception types and enumeration budgets shared by every module."""

import os

DEFAULT_BUDGET = 10**6


class ExpanseError(Exception):
    """Base class for errors raised by this package."""


class MalformedInput(ExpanseError, ValueError):
    """An input does not describe a valid object (bad element, symbol, schema)."""


class BudgetExceeded(ExpanseError):
    """An enumeration would exceed its element-count cap."""

    def __init__(self, name, limit, needed=None):
        self.name = name
        self.limit = limit
        self.needed = needed
        msg = f"budget '{name}' exceeded (limit {limit}"
        if needed is not None:
            msg += f", needed at least {needed}"
        super().__init__(msg + ")")


class NoHoroball(ExpanseError):
    """Raised for finite groups, which have no horoballs."""


class InvariantViolation(ExpanseError, AssertionError):
    """A structural invariant that the theory guarantees has failed."""


def default_budget():
    """Element-count cap, overridable through the EXPANSE_BUDGET variable."""
    raw = os.environ.get("EXPANSE_BUDGET")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise MalformedInput(f"EXPANSE_BUDGET must be an integer, got {raw!r}")
        if value <= 0:
            raise MalformedInput("EXPANSE_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


def check_budget(name, count, budget=None):
    limit = default_budget() if budget is None else budget
    if count > limit:
        raise BudgetExceeded(name, limit, count)


class UnsupportedGroup(ExpanseError):
    """The operation is only implemented for some group kinds."""
