"""Run-wide configuration: prime, absolute precision, degree cap, margin."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError


def is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Config:
    """Parameters every computation runs under.

    ``precision`` is the absolute p-adic precision N: every "is zero" answer
    means "zero mod p^N".  ``degree_cap`` defaults to p^n_max + 8 so that
    omega_{n_max} is representable with guard coefficients to absorb division
    tails.  ``margin`` is the ambiguity band below N inside which rank/length
    classification refuses to guess.
    """

    prime: int = 3
    precision: int = 24
    n_max: int = 4
    degree_cap: int | None = None
    margin: int = 4
    output_format: str = "csv"

    def __post_init__(self):
        if not is_odd_prime(self.prime):
            raise InputError(f"prime must be an odd prime, got {self.prime}")
        if self.precision <= self.margin:
            raise InputError(
                f"precision {self.precision} must exceed margin {self.margin}"
            )
        if self.n_max < 0:
            raise InputError("n_max must be >= 0")
        if self.degree_cap is None:
            object.__setattr__(self, "degree_cap", self.prime**self.n_max + 8)
        if self.degree_cap < self.prime**self.n_max:
            raise InputError(
                f"degree_cap {self.degree_cap} below p^n_max = {self.prime**self.n_max}"
            )
        if self.output_format not in ("csv", "json"):
            raise InputError(f"unknown output format {self.output_format!r}")

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "precision": self.precision,
            "n_max": self.n_max,
            "degree_cap": self.degree_cap,
            "margin": self.margin,
            "output_format": self.output_format,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Config":
        known = {k: d[k] for k in
                 ("prime", "precision", "n_max", "degree_cap", "margin", "output_format")
                 if k in d}
        return cls(**known)
