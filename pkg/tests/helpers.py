"""Shared shorthand for the test suite: field construction by size q,
polynomial parsing, and monic enumeration."""

from cpfq.field import field_make
from cpfq.polyring import index_to_poly, parse
from cpfq.residue import FunctionTable, ResidueRing

PRIME_POWERS = {4: (2, 2), 8: (2, 3), 9: (3, 2), 16: (2, 4)}


def make_field(q):
    if q in PRIME_POWERS:
        p, m = PRIME_POWERS[q]
        return field_make(p, m)
    return field_make(q)


def pol(q, text):
    return parse(make_field(q), text)


def monic_polys(field, degree):
    """All monic polynomials of exactly the given degree, in index order."""
    q = field.q
    lo = q ** degree
    return [index_to_poly(field, lo + k) for k in range(q ** degree)]


def monic_upto(field, max_degree, min_degree=1):
    out = []
    for n in range(min_degree, max_degree + 1):
        out.extend(monic_polys(field, n))
    return out


def ring(q, text):
    return ResidueRing(pol(q, text))


def table(domain, codomain, fn):
    return FunctionTable.from_callable(domain, codomain, fn)
