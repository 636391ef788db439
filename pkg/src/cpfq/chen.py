"""Chen pairs: moduli pairs where congruence preservation forces polynomiality.

gamma(h) is the threshold degree of h: every function A_f -> A_h that
preserves congruences is polynomial exactly when deg f < gamma(h).  It is
computed prime power by prime power and can be +infinity (math.inf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .field import FieldSpec
from .polyring import Poly, factorize, index_to_poly, is_irreducible

GAMMA_INF = math.inf


def gamma_prime_power(p: Poly, e: int):
    """Threshold for a prime power modulus p^e; +infinity when every

    congruence-preserving function into A_{p^e} is polynomial."""
    if not is_irreducible(p):
        raise ValueError("gamma_prime_power requires an irreducible polynomial")
    if e < 1:
        raise ValueError("exponent must be >= 1")
    q = p.field.q
    d = p.degree
    if e == 1:
        return GAMMA_INF
    if q == 2:
        if e == 2 and d == 1:
            return GAMMA_INF
        return d + 2
    return d + 1


def gamma(h: Poly):
    d = h.degree
    if not isinstance(d, int) or d < 1:
        raise ValueError("gamma requires degree >= 1")
    return min(gamma_prime_power(p, e) for p, e in factorize(h).factors)


@dataclass(frozen=True)
class ChenVerdict:
    chen_pair: bool
    deg_f: int
    gamma_g: object  # int or math.inf

    def __bool__(self):
        return self.chen_pair


def is_chen_pair(f: Poly, g: Poly) -> ChenVerdict:
    """(f, g) is a Chen pair iff deg f < gamma(g)."""
    n = f.degree
    if not isinstance(n, int) or n < 1:
        raise ValueError("f must have degree >= 1")
    if g.field != f.field:
        raise ValueError("f and g must share one field")
    gg = gamma(g)
    return ChenVerdict(n < gg, n, gg)


def is_self_chen(g: Poly) -> bool:
    """Whether (g, g) is a Chen pair, by the factorization condition:

    q = 2: no cube of a linear factor and no square of a higher-degree
    factor divide g; q > 2: g is square-free."""
    d = g.degree
    if not isinstance(d, int) or d < 1:
        raise ValueError("g must have degree >= 1")
    q = g.field.q
    for p, e in factorize(g).factors:
        if q == 2:
            if p.degree == 1 and e >= 3:
                return False
            if p.degree >= 2 and e >= 2:
                return False
        else:
            if e >= 2:
                return False
    return True


def squarefree_count(n: int, q: int) -> int:
    """Monic square-free polynomials of degree n over F_q."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    if n == 0:
        return 1
    if n == 1:
        return q
    return q ** n - q ** (n - 1)


def chen_self_count(n: int, q: int = 2) -> int:
    """Number of degree-n polynomials g over F_2 with (g, g) a Chen pair.

    Over F_2 all leading coefficients are 1, so this counts monic g too."""
    if q != 2:
        raise ValueError("closed form available only for q = 2")
    if n < 0:
        raise ValueError("degree must be >= 0")
    if n <= 3:
        return (1, 2, 4, 6)[n]
    sign = (-1) ** (n - 1)
    num = 2 ** (n - 3) * 49 + sign * (3 * n - 13)
    if num % 9:
        raise AssertionError(f"closed form not integral at n={n}")
    return num // 9


def density_exact(q: int) -> Fraction:
    """Limit density of self-Chen moduli among polynomials over F_q."""
    if q < 2:
        raise ValueError("q must be >= 2")
    if q == 2:
        return Fraction(49, 72)
    return Fraction(q - 1, q)


@dataclass(frozen=True)
class DensityReport:
    q: int
    max_degree: int
    monic_only: bool
    per_degree: tuple        # self-Chen counts for n = 1..max_degree
    per_degree_total: tuple  # polynomials inspected per degree
    fraction: Fraction       # cumulative self-Chen fraction
    limit: Fraction

    @property
    def error(self) -> Fraction:
        return abs(self.fraction - self.limit)


DENSITY_GUARD = 2 ** 22


def density_empirical(field: FieldSpec, max_degree: int,
                      monic_only: bool = False,
                      guard: int = DENSITY_GUARD) -> DensityReport:
    """Census the self-Chen condition over every polynomial of degree

    1..max_degree (all leading coefficients, unless monic_only)."""
    q = field.q
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    if q ** max_degree > guard:
        raise ValueError(f"q^max_degree exceeds the enumeration guard {guard}")
    leads = [1] if monic_only else list(range(1, q))
    counts = []
    totals = []
    for n in range(1, max_degree + 1):
        hits = 0
        total = 0
        for low in range(q ** n):
            base = index_to_poly(field, low).coeffs
            base = base + (0,) * (n - len(base))
            for lead in leads:
                g = Poly(field, base + (lead,))
                total += 1
                if is_self_chen(g):
                    hits += 1
        counts.append(hits)
        totals.append(total)
    return DensityReport(q, max_degree, monic_only, tuple(counts), tuple(totals),
                         Fraction(sum(counts), sum(totals)), density_exact(q))
