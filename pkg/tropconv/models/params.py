"""
Parameter Models

Validated parameter objects shared by the approximation engines and the CLI.
"""

from decimal import Decimal
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from tropconv.exceptions import DomainError


def parse_rational(value: Any) -> Fraction:
    """
    Parse an exact rational from a decimal or fraction string, int, Decimal or Fraction.

    Floats go through their shortest repr so "0.1" and 0.1 agree.
    """
    if isinstance(value, bool):
        raise ValueError(f"Not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"Not a rational number: {value!r}")
    raise ValueError(f"Not a rational number: {value!r}")


class ApproxParams(BaseModel):
    """
    Accuracy parameter of the approximation algorithms.

    Attributes:
        epsilon (Fraction): Relative error bound, an exact rational in (0, 1]
    """

    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        frozen=True,
        json_schema_extra={"example": {"epsilon": "1/10"}},
    )

    epsilon: Fraction = Field(..., description="Relative error bound in (0, 1]")

    @field_validator("epsilon", mode="before")
    @classmethod
    def coerce_epsilon(cls, v: Any) -> Fraction:
        return parse_rational(v)

    @field_validator("epsilon")
    @classmethod
    def validate_epsilon(cls, v: Fraction) -> Fraction:
        if not 0 < v <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {v}")
        return v

    def strict(self) -> Fraction:
        """Epsilon for operations whose rounding argument needs epsilon < 1."""
        if self.epsilon >= 1:
            raise DomainError(f"This operation needs 0 < epsilon < 1, got {self.epsilon}")
        return self.epsilon


def as_params(eps: Any) -> ApproxParams:
    """Accept an ApproxParams or anything parse_rational understands."""
    if isinstance(eps, ApproxParams):
        return eps
    try:
        return ApproxParams(epsilon=eps)
    except ValueError as e:
        raise DomainError(f"Invalid epsilon {eps!r}", detail=str(e))
