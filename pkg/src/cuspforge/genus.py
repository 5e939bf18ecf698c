"""Genus of X_Delta(N) from the index, elliptic-point and cusp counts.

    g = 1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2

with mu = N * prod_{p|N} (1 + 1/p) * phi(N)/|Delta|, nu2 and nu3 counting
solutions of b^2 + 1 = 0 and b^2 - b + 1 = 0 inside Delta (scaled by
phi(N)/|Delta|), and nu_inf = sum over d | N of phi(d) phi(N/d) / |pi_d(Delta)|.
All arithmetic is exact; a non-integer g means a bug, not bad input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import (
    DeltaSubgroup,
    divisors,
    factorize,
    full_units,
    pm_one,
    projection_image_size,
    totient,
)
from .errors import NonIntegralGenus


@dataclass(frozen=True)
class GenusProfile:
    level: int
    delta: DeltaSubgroup
    mu: Fraction
    nu2: Fraction
    nu3: Fraction
    nu_inf: Fraction
    g: int

    def to_json(self) -> dict:
        def enc(v):
            return int(v) if v.denominator == 1 else str(v)

        return {
            "N": self.level,
            "delta": list(self.delta.elements),
            "mu": enc(self.mu),
            "nu2": enc(self.nu2),
            "nu3": enc(self.nu3),
            "nu_inf": enc(self.nu_inf),
            "g": self.g,
        }


def mu(n: int, delta: DeltaSubgroup) -> Fraction:
    """Degree of X_Delta(N) over X(1)."""
    out = Fraction(n)
    for p, _ in factorize(n):
        out *= 1 + Fraction(1, p)
    return out * totient(n) / len(delta)


def nu2(n: int, delta: DeltaSubgroup) -> Fraction:
    """Number of elliptic points of order 2."""
    hits = sum(1 for b in delta.elements if (b * b + 1) % n == 0)
    return Fraction(hits * totient(n), len(delta))


def nu3(n: int, delta: DeltaSubgroup) -> Fraction:
    """Number of elliptic points of order 3."""
    hits = sum(1 for b in delta.elements if (b * b - b + 1) % n == 0)
    return Fraction(hits * totient(n), len(delta))


def nu_inf(n: int, delta: DeltaSubgroup) -> Fraction:
    """Number of cusps of X_Delta(N)."""
    total = Fraction(0)
    for d in divisors(n):
        total += Fraction(
            totient(d) * totient(n // d), projection_image_size(n, d, delta)
        )
    return total


@lru_cache(maxsize=None)
def genus_delta(n: int, delta: DeltaSubgroup) -> GenusProfile:
    if delta.level != n:
        raise ValueError("subgroup level does not match")
    m_, n2, n3, ni = mu(n, delta), nu2(n, delta), nu3(n, delta), nu_inf(n, delta)
    g = 1 + m_ / 12 - n2 / 4 - n3 / 3 - ni / 2
    if g.denominator != 1 or g < 0:
        raise NonIntegralGenus(f"g({n}, {delta.elements}) = {g}")
    return GenusProfile(n, delta, m_, n2, n3, ni, int(g))


@lru_cache(maxsize=None)
def g1(n: int) -> int:
    """Genus of X_1(N)."""
    return genus_delta(n, pm_one(n)).g


@lru_cache(maxsize=None)
def g0(n: int) -> int:
    """Genus of X_0(N)."""
    return genus_delta(n, full_units(n)).g
