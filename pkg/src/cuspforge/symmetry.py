"""Automorphism actions on cusps: diamonds [a], Atkin-Lehner W_Q, and S_p.

[a] sends (x : y) to (a*x : a^-1*y).  W_Q is realized by an integer matrix
(Qx, y; Nz, Qw) of determinant Q; on X_0(N) classes the induced map does
not depend on the matrix choice, on X_1(N) classes it is pinned down by the
canonical extended-gcd construction below (different valid matrices differ
by a diamond, which the orbit computation absorbs by including diamonds
among its generators).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .arith import unit_group_generators
from .cusps import (
    GAMMA0,
    GAMMA1,
    CuspClass,
    atlas,
    canonicalize_x1,
    diamond_image_x1,
    lift_to_coprime,
    x0_class_of_pair,
)
from .errors import BadP, LevelMismatch, LevelNotDivisible, NotCoprime, NotExactDivisor


@dataclass(frozen=True)
class DiamondOp:
    level: int
    a: int

    def __post_init__(self):
        if gcd(self.a, self.level) != 1:
            raise NotCoprime(f"{self.a} is not a unit mod {self.level}")


@dataclass(frozen=True)
class AtkinLehnerOp:
    level: int
    q: int
    matrix: tuple[int, int, int, int]

    def __post_init__(self):
        a, b, c, d = self.matrix
        if a * d - b * c != self.q:
            raise ValueError("matrix determinant is not Q")


def act_diamond(op: DiamondOp, c: CuspClass) -> CuspClass:
    if op.level != c.level:
        raise LevelMismatch(f"operator at {op.level}, cusp at {c.level}")
    if c.group == GAMMA0:
        return c  # diamonds come from Gamma_0(N) itself
    return diamond_image_x1(c, op.a)


def build_atkin_lehner(n: int, q: int) -> AtkinLehnerOp:
    """A matrix (Q*alpha, beta; N, Q) with determinant Q, via the smallest
    nonnegative alpha solving Q*alpha = 1 mod N/Q."""
    if q < 1 or n % q != 0 or gcd(q, n // q) != 1:
        raise NotExactDivisor(f"{q} is not an exact divisor of {n}")
    m = n // q
    alpha = pow(q, -1, m) if m > 1 else 0
    beta = (q * alpha - 1) // m
    return AtkinLehnerOp(n, q, (q * alpha, beta, n, q))


def _act_matrix(mat, c: CuspClass) -> CuspClass:
    """Fractional-linear image of a cusp class under an integer matrix."""
    n = c.level
    a0, c0 = lift_to_coprime(n, c.x, c.y)
    p, q_, r, s = mat
    a1, c1 = p * a0 + q_ * c0, r * a0 + s * c0
    g = gcd(a1, c1)
    a1, c1 = a1 // g, c1 // g
    if c.group == GAMMA0:
        return x0_class_of_pair(n, a1, c1)
    return canonicalize_x1(n, a1, c1)


def act_atkin_lehner(op: AtkinLehnerOp, c: CuspClass) -> CuspClass:
    if op.level != c.level:
        raise LevelMismatch(f"operator at {op.level}, cusp at {c.level}")
    return _act_matrix(op.matrix, c)


def act_sp(p: int, n: int, c: CuspClass) -> CuspClass:
    """Image under S_p = (1, 1/p; 0, 1): a/c maps to (pa + c)/(pc).

    Normalizes Gamma_0(p^2 M) for p = 2, 3 only.
    """
    if p not in (2, 3):
        raise BadP(f"S_p is only in the normalizer for p = 2, 3 (got {p})")
    if n % (p * p) != 0:
        raise LevelNotDivisible(f"{p}^2 does not divide {n}")
    if c.level != n:
        raise LevelMismatch(f"cusp at level {c.level}, not {n}")
    if c.group != GAMMA0:
        raise LevelMismatch("S_p acts on X_0(N) cusp classes")
    a0, c0 = lift_to_coprime(n, c.x, c.y)
    a1, c1 = p * a0 + c0, p * c0
    g = gcd(a1, c1)
    return x0_class_of_pair(n, a1 // g, c1 // g)


def fixed_cusps(op: DiamondOp, group: str = GAMMA1) -> tuple[CuspClass, ...]:
    """All atlas cusps fixed by the diamond action."""
    return tuple(
        c for c in atlas(op.level, group) if act_diamond(op, c) == c
    )


def exact_divisors(n: int) -> list[int]:
    from .arith import divisors

    return [q for q in divisors(n) if gcd(q, n // q) == 1]


@dataclass(frozen=True)
class OrbitReport:
    level: int
    orbits: tuple[tuple[CuspClass, ...], ...]
    generators: tuple[str, ...]
    normalizer_possibly_incomplete: bool

    def orbit_of(self, c: CuspClass) -> tuple[CuspClass, ...]:
        for orb in self.orbits:
            if c in orb:
                return orb
        raise KeyError(f"{c} not in any orbit")

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "generators": list(self.generators),
            "normalizer_possibly_incomplete": self.normalizer_possibly_incomplete,
            "orbits": [[c.key() for c in orb] for orb in self.orbits],
        }


def cusp_orbits_x1(n: int) -> OrbitReport:
    """Partition of the X_1(N) atlas under all diamonds and all W_Q.

    These generate the full normalizer action except for N = 4, which is
    flagged rather than patched.
    """
    diamond_gens = unit_group_generators(n)
    al_ops = [build_atkin_lehner(n, q) for q in exact_divisors(n) if q > 1]
    gen_names = tuple(
        [f"[{a}]" for a in diamond_gens] + [f"W_{op.q}" for op in al_ops]
    )

    remaining = set(atlas(n, GAMMA1))
    orbits = []
    while remaining:
        seed = min(remaining)
        orbit = {seed}
        frontier = [seed]
        while frontier:
            c = frontier.pop()
            images = [diamond_image_x1(c, a) for a in diamond_gens]
            images += [act_atkin_lehner(op, c) for op in al_ops]
            for img in images:
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        remaining -= orbit
        orbits.append(tuple(sorted(orbit)))
    return OrbitReport(n, tuple(sorted(orbits)), gen_names, n == 4)
