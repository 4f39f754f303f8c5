"""Expansiveness and pointwise periodicity, made executable.

Subshifts of finite type over finitely generated groups, the coding
relation between coordinate sets, finite horoball surrogates, orbit and
inverse-orbit enumeration for finite actions, cellular automata, and
periodic polyomino tilings of the plane.
"""

from .errors import (BudgetExceeded, ExpanseError, InvariantViolation, MalformedInput,
                     NoHoroball, UnsupportedGroup)
from .groups import GroupSpec, HoroballApprox, ball, find_ball_in_horoball, horoball_approx
from .symbolic import Pattern, PeriodicPoint, SubshiftSpec

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "ExpanseError", "InvariantViolation", "MalformedInput", "NoHoroball",
    "UnsupportedGroup", "GroupSpec", "HoroballApprox", "ball", "find_ball_in_horoball",
    "horoball_approx", "Pattern", "PeriodicPoint", "SubshiftSpec", "__version__",
]
