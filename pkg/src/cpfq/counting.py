"""Closed-form counts of congruence-preserving and polynomial functions.

Both families of counts are exact powers of q, so they are carried as a
QExponent (base q plus a big-integer exponent) rather than as expanded
integers.  M denotes the count of congruence-preserving functions
A_f -> A_g, N the count of polynomial functions; N <= M always, with
equality exactly on Chen pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .polyring import Poly, factorial, factorize, gcd, is_irreducible


@dataclass(frozen=True)
class QExponent:
    """An exact count q^exponent."""

    q: int
    exponent: int

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("base must be >= 2")
        if self.exponent < 0:
            raise ValueError("exponent must be >= 0")

    def value(self) -> int:
        return self.q ** self.exponent

    def decimal(self, guard_bits: int = 64):
        """The expanded integer when it fits in guard_bits bits, else None."""
        if self.exponent > guard_bits:
            return None
        v = self.q ** self.exponent
        return v if v.bit_length() <= guard_bits else None

    def equals_int(self, n: int) -> bool:
        return n == self.value()

    def _cmp_key(self, other):
        if not isinstance(other, QExponent):
            raise TypeError("can only compare with QExponent")
        if other.q != self.q:
            raise ValueError("counts with different bases are not comparable")
        return other.exponent

    def __le__(self, other):
        return self.exponent <= self._cmp_key(other)

    def __lt__(self, other):
        return self.exponent < self._cmp_key(other)

    def __ge__(self, other):
        return self.exponent >= self._cmp_key(other)

    def __gt__(self, other):
        return self.exponent > self._cmp_key(other)

    def __mul__(self, other):
        if not isinstance(other, QExponent):
            return NotImplemented
        if other.q != self.q:
            raise ValueError("counts with different bases are not comparable")
        return QExponent(self.q, self.exponent + other.exponent)

    def __str__(self):
        return f"{self.q}^{self.exponent}"


def _require_modulus_degree(p: Poly, name: str) -> int:
    d = p.degree
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"{name} must have degree >= 1")
    return d


def _require_irreducible(p: Poly) -> int:
    d = _require_modulus_degree(p, "P")
    if not is_irreducible(p):
        raise ValueError("P must be irreducible")
    return d


def count_cpf(f: Poly, g: Poly) -> QExponent:
    """Number of congruence-preserving functions A_f -> A_g."""
    n = _require_modulus_degree(f, "f")
    _require_modulus_degree(g, "g")
    q = f.field.q
    if g.field != f.field:
        raise ValueError("f and g must share one field")
    exp = (q ** n) * g.degree
    for p, e in factorize(g).factors:
        d = p.degree
        exp -= d * (q - 1) * sum(q ** k * min(e, k // d) for k in range(1, n))
    return QExponent(q, exp)


def count_cpf_local(f: Poly, p: Poly, e: int) -> QExponent:
    """count_cpf for the prime power codomain modulus p^e, without

    expanding the power."""
    n = _require_modulus_degree(f, "f")
    d = _require_irreducible(p)
    if e < 1:
        raise ValueError("exponent must be >= 1")
    q = f.field.q
    exp = d * (e * q ** n
               - (q - 1) * sum(q ** k * min(e, k // d) for k in range(1, n)))
    return QExponent(q, exp)


def _floor_log(q: int, k: int) -> int:
    """Largest j with q^j <= k (k >= 1)."""
    j = 0
    power = q
    while power <= k:
        j += 1
        power *= q
    return j


def _w(k: int, q: int, d: int) -> int:
    """sum_{j>=1} floor(k / q^(d*j)), finitely many nonzero terms."""
    total = 0
    step = q ** d
    power = step
    while power <= k:
        total += k // power
        power *= step
    return total


LITERAL_DEGREE_GUARD = 4


def count_polyfn(f: Poly, g: Poly, literal: bool = False, order=None) -> QExponent:
    """Number of polynomial functions A_f -> A_g.

    The default path subtracts valuations of the generalized factorials
    through the factorization of g; the literal path recomputes each
    deg gcd(g, prod_{i<k}(a_k - a_i)) by actual gcd and is guarded to
    deg f <= 4.  An element ordering may be supplied on the literal path
    to probe order-independence of the result.
    """
    n = _require_modulus_degree(f, "f")
    _require_modulus_degree(g, "g")
    if g.field != f.field:
        raise ValueError("f and g must share one field")
    q = f.field.q
    qn = q ** n
    exp = qn * g.degree
    if literal:
        if n > LITERAL_DEGREE_GUARD:
            raise ValueError(
                f"literal path guarded to deg f <= {LITERAL_DEGREE_GUARD}")
        for k in range(1, qn):
            exp -= deg_gcd_factorial(g, k, order=order)
    else:
        if order is not None:
            raise ValueError("orderings only apply to the literal path")
        for p, e in factorize(g).factors:
            d = p.degree
            exp -= d * sum(min(e, _w(k, q, d)) for k in range(1, qn))
    return QExponent(q, exp)


def count_polyfn_local(f: Poly, p: Poly, e: int) -> QExponent:
    n = _require_modulus_degree(f, "f")
    d = _require_irreducible(p)
    if e < 1:
        raise ValueError("exponent must be >= 1")
    q = f.field.q
    qn = q ** n
    exp = d * (e * qn - sum(min(e, _w(k, q, d)) for k in range(1, qn)))
    return QExponent(q, exp)


def deg_gcd_factorial(g: Poly, k: int, order=None) -> int:
    """deg gcd(g, prod_{i<k}(a_k - a_i)) by literal gcd computation."""
    gm = g.monic()
    fact = factorial(g.field, k, order=order, mod=gm)
    d = gcd(gm, fact).degree
    return d if isinstance(d, int) else 0


def exponent_identity_check(n: int, e: int, d: int, q: int) -> bool:
    """(q-1) * sum_{k=1}^{n-1} q^k min(e, floor(k/d))
       == sum_{k=1}^{q^n - 1} min(e, floor(floor(log_q k) / d))."""
    lhs = (q - 1) * sum(q ** k * min(e, k // d) for k in range(1, n))
    rhs = sum(min(e, _floor_log(q, k) // d) for k in range(1, q ** n))
    return lhs == rhs
