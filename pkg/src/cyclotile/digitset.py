"""Digit sets: a finite set of distinct non-negative integers plus a base."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidDigitSet, NormalizationRequired, WrongCardinality
from .intpoly import IntPoly, mask_polynomial


@dataclass(frozen=True)
class DigitSet:
    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.base, int) or self.base < 2:
            raise InvalidDigitSet(f"base must be an integer >= 2, got {self.base!r}")
        ordered = tuple(sorted(self.digits))
        mask_polynomial(ordered)  # validates distinct non-negative integers
        if not ordered:
            raise InvalidDigitSet("digit set is empty")
        object.__setattr__(self, "digits", ordered)

    @classmethod
    def of(cls, base: int, digits) -> "DigitSet":
        return cls(base, tuple(digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __contains__(self, d) -> bool:
        return d in self.digits

    def mask(self) -> IntPoly:
        return mask_polynomial(self.digits)

    def digit_gcd(self) -> int:
        return math.gcd(*self.digits) if len(self.digits) > 1 else self.digits[0]

    def require_cardinality(self) -> None:
        """Enforce exactly base-many digits."""
        if len(self.digits) != self.base:
            raise WrongCardinality(
                f"need exactly {self.base} digits, got {len(self.digits)}"
            )

    def require_normalized(self) -> None:
        """Enforce 0 in the set and gcd 1.

        Sets violating this are rejected rather than translated or rescaled:
        rescaling changes which base-b radix problem is being asked.
        """
        if 0 not in self.digits:
            raise NormalizationRequired("digit set must contain 0")
        if len(self.digits) > 1 and self.digit_gcd() != 1:
            raise NormalizationRequired(
                f"digit gcd is {self.digit_gcd()}, expected 1"
            )
