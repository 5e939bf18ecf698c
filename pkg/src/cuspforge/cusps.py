"""Cusps of X_0(N) and X_1(N): canonical representatives, atlases, widths.

A cusp is a primitive pair (x : y) mod N, gcd(x, y, N) = 1.  Two pairs are
Gamma_1(N)-equivalent iff (x', y') = +-(x + j*y, y) mod N for some j; the
Gamma_0(N) classes additionally merge under (x, y) -> (u*x, u^-1*y) for
units u.  The invariants d = gcd(y, N) and e = gcd(d, N/d) are class
invariants; a cusp is irregular exactly when e > 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .arith import delta_d, divisors, normalize_residue, inv_mod
from .errors import (
    LevelMismatch,
    NotADivisor,
    NotCoprime,
    NotIrregular,
    NotPrime,
    NotPrimitive,
    PNotDividingM,
)

GAMMA0 = "gamma0"
GAMMA1 = "gamma1"
GAMMA_DELTA = "gamma_delta"


@dataclass(frozen=True, order=True)
class CuspClass:
    level: int
    group: str
    d: int
    y: int
    x: int
    e: int
    irregular: bool

    def key(self) -> str:
        return f"{self.x}:{self.y}"

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "d": self.d,
            "e": self.e,
            "irregular": self.irregular,
        }

    def __str__(self) -> str:
        return f"({self.x}:{self.y})"


def _check_primitive(n: int, x: int, y: int) -> None:
    if gcd(gcd(x, y), n) != 1:
        raise NotPrimitive(f"gcd({x}, {y}, {n}) > 1")


def canonicalize_x1(n: int, x: int, y: int) -> CuspClass:
    """Canonical Gamma_1(N) representative of the cusp (x : y).

    Minimizes y over the sign choice (y normalized into 1..N, so the
    infinity-type classes carry y = N), then x over the translation
    orbit x + dZ; equals the minimum of the scanned congruence test
    (x', y') = +-(x + j*y, y), which x1_equivalent implements literally.
    """
    if n < 1:
        raise ValueError("level must be positive")
    x %= n
    y = normalize_residue(y, n)
    _check_primitive(n, x, y)
    d = gcd(y, n)
    y_neg = normalize_residue(-y, n)
    if y < y_neg:
        xc = x % d
    elif y_neg < y:
        y = y_neg
        xc = (-x) % d
    else:
        xc = min(x % d, (-x) % d)
    e = gcd(d, n // d)
    return CuspClass(n, GAMMA1, d, y, xc, e, e > 1)


def x1_equivalent(n: int, p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Literal congruence test: q = +-(p.x + j*p.y, p.y) mod n for some j."""
    x, y = p[0] % n, p[1] % n
    u, v = q[0] % n, q[1] % n
    for s in (1, n - 1):
        if (s * y - v) % n == 0:
            for j in range(n):
                if (s * (x + j * y) - u) % n == 0:
                    return True
    return False


def _class_x0(n: int, x0: int, d: int) -> CuspClass:
    """Build the Gamma_0 class from the datum x0 mod e; the stored x is
    the smallest positive lift of x0 that is coprime to d."""
    e = gcd(d, n // d)
    x0 %= e
    rep = x0 if x0 > 0 else e
    while gcd(rep, d) != 1:
        rep += e
    return CuspClass(n, GAMMA0, d, d, rep, e, e > 1)


def canonicalize_x0(n: int, x: int, d: int) -> CuspClass:
    """Canonical Gamma_0(N) representative of the cusp (x : d), d | N.

    The class is x mod e; the stored x is the smallest positive lift
    coprime to d so the pair stays primitive.
    """
    if d < 1 or n % d != 0:
        raise NotADivisor(f"{d} does not divide {n}")
    if gcd(x, d) != 1:
        raise NotCoprime(f"gcd({x}, {d}) > 1")
    return _class_x0(n, x, d)


def x0_class_of_pair(n: int, a: int, c: int) -> CuspClass:
    """Gamma_0(N) class of a cusp a/c given as a coprime integer pair."""
    if gcd(a, c) != 1:
        raise NotCoprime(f"gcd({a}, {c}) > 1")
    y = c % n
    d = gcd(y, n) if y != 0 else n
    if d == n:
        return _class_x0(n, 1, n)
    u = y // d  # unit mod N/d since gcd(y, N) = d
    return _class_x0(n, a * u, d)


def x1_class_of_pair(n: int, a: int, c: int) -> CuspClass:
    return canonicalize_x1(n, a, c)


def diamond_image_x1(c: CuspClass, a: int) -> CuspClass:
    """The [a]-image (a*x : a^-1*y) of a Gamma_1 cusp class."""
    n = c.level
    if gcd(a, n) != 1:
        raise NotCoprime(f"{a} is not a unit mod {n}")
    return canonicalize_x1(n, a * c.x, inv_mod(a, n) * c.y)


@dataclass(frozen=True)
class CuspAtlas:
    level: int
    group: str
    cusps: tuple[CuspClass, ...]

    def with_d(self, d: int) -> tuple[CuspClass, ...]:
        return tuple(c for c in self.cusps if c.d == d)

    def per_d_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.cusps:
            out[c.d] = out.get(c.d, 0) + 1
        return out

    def irregular(self) -> tuple[CuspClass, ...]:
        return tuple(c for c in self.cusps if c.irregular)

    def __len__(self) -> int:
        return len(self.cusps)

    def __iter__(self):
        return iter(self.cusps)

    def to_json(self) -> list[dict]:
        out = []
        for c in self.cusps:
            entry = c.to_json()
            entry["width"] = width_and_stabilizer_sign(self.level, self.group, c)[0]
            out.append(entry)
        return out


@lru_cache(maxsize=None)
def atlas(n: int, group: str = GAMMA1) -> CuspAtlas:
    """Complete duplicate-free cusp atlas of X_1(N) or X_0(N)."""
    if n < 1:
        raise ValueError("level must be positive")
    found = set()
    if group == GAMMA1:
        for d in divisors(n):
            m = n // d
            for u in range(1, m + 1):
                if gcd(u, m) != 1:
                    continue
                y = d * u
                for x in range(d):
                    if gcd(x, d) == 1:
                        found.add(canonicalize_x1(n, x, y))
    elif group == GAMMA0:
        for d in divisors(n):
            e = gcd(d, n // d)
            for x in range(e):
                if gcd(x, e) == 1:
                    found.add(_class_x0(n, x, d))
    else:
        raise ValueError(f"unknown group tag {group!r}")
    return CuspAtlas(n, group, tuple(sorted(found)))


@dataclass(frozen=True)
class DeltaOrbit:
    """A cusp of X_Delta(N): an orbit of X_1(N) cusps under [a], a in Delta."""

    representative: CuspClass
    members: tuple[CuspClass, ...]

    @property
    def orbit_size(self) -> int:
        return len(self.members)


def atlas_delta(n: int, delta) -> tuple[DeltaOrbit, ...]:
    """Cusps of X_Delta(N) as diamond orbits of the X_1(N) atlas."""
    if delta.level != n:
        raise LevelMismatch(f"subgroup lives at level {delta.level}, not {n}")
    seen: set[CuspClass] = set()
    orbits = []
    for c in atlas(n, GAMMA1):
        if c in seen:
            continue
        orbit = {diamond_image_x1(c, a) for a in delta.elements}
        seen |= orbit
        members = tuple(sorted(orbit))
        orbits.append(DeltaOrbit(members[0], members))
    return tuple(sorted(orbits, key=lambda o: o.representative))


# ---------------------------------------------------------------------------
# Coprime lifts and widths


def lift_to_coprime(n: int, x: int, y: int) -> tuple[int, int]:
    """Integer pair (a, c) = (x, y) mod n with gcd(a, c) = 1 and c = y in 1..N."""
    c = normalize_residue(y, n)
    a = x % n
    while gcd(a, c) != 1:
        a += n
    return a, c


def _scaling_matrix(a: int, c: int) -> tuple[int, int, int, int]:
    """Some (a, b; c, d) in SL2(Z) sending infinity to a/c."""
    if gcd(a, c) != 1:
        raise NotCoprime("pair is not coprime")
    # extended gcd: a*s + c*t = 1
    s, t = _egcd(a, c)
    return a, -t, c, s


def _egcd(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def mat_mul(m1, m2):
    a, b, c, d = m1
    p, q, r, s = m2
    return (a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)


def _in_group(m, n: int, group: str, delta=None) -> bool:
    a, _, c, _ = m
    if c % n != 0:
        return False
    if group == GAMMA0:
        return True
    if group == GAMMA1:
        return a % n == 1 % n
    if group == GAMMA_DELTA:
        return normalize_residue(a, n) in set(delta.elements)
    raise ValueError(f"unknown group tag {group!r}")


@lru_cache(maxsize=None)
def width_and_stabilizer_sign(n: int, group: str, c: CuspClass, delta=None):
    """Width h of the cusp and whether sigma T^h sigma^-1 lies in the group
    itself (True) or only as minus a group element (False).

    h is the least h > 0 with sigma T^h sigma^-1 in +-Gamma; it always
    divides N because Gamma(N) is contained in every group here.
    """
    if c.level != n:
        raise LevelMismatch(f"cusp lives at level {c.level}, not {n}")
    a0, c0 = lift_to_coprime(n, c.x, c.y)
    sa, sb, sc, sd = _scaling_matrix(a0, c0)
    inv = (sd, -sb, -sc, sa)
    for h in divisors(n):
        m = mat_mul(mat_mul((sa, sb, sc, sd), (1, h, 0, 1)), inv)
        neg = tuple(-v for v in m)
        plus = _in_group(m, n, group, delta)
        if plus or _in_group(neg, n, group, delta):
            return h, plus
    raise RuntimeError("width not found below N; broken conjugation")


# ---------------------------------------------------------------------------
# Total ramification checks


def ramification_x1_to_delta(n: int, d: int) -> int:
    """Largest diamond orbit, over Delta_d, of the X_1(N) cusps with
    invariant d; total ramification of X_1(N) -> X_{Delta_d}(N) means 1."""
    if d < 1 or n % d != 0:
        raise NotADivisor(f"{d} does not divide {n}")
    if gcd(d, n // d) == 1:
        raise NotIrregular(f"cusps with d = {d} at level {n} are regular")
    delta = delta_d(n, d)
    worst = 0
    for c in atlas(n, GAMMA1).with_d(d):
        orbit = {diamond_image_x1(c, a) for a in delta.elements}
        worst = max(worst, len(orbit))
    return worst


def ramification_x0_tower(p: int, m: int, x: int) -> int:
    """Number of distinct Gamma_0(p^2 M) classes among the p coset images
    of the cusp x/p; 1 means the degree-p map X_0(p^2 M) -> X_0(pM) is
    totally ramified there."""
    from .arith import is_prime

    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m % p != 0:
        raise PNotDividingM(f"{p} does not divide {m}")
    if gcd(x, p) != 1:
        raise NotCoprime(f"gcd({x}, {p}) > 1")
    n = p * p * m
    images = set()
    for k in range(p):
        # right coset representative tau -> tau/(k p M tau + 1) acts on
        # the pair (x, p) as (x, k p M x + p)
        images.add(x0_class_of_pair(n, x, k * p * m * x + p))
    return len(images)
