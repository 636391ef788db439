"""Exact univariate polynomial arithmetic over F_q: the ring A = F_q[t].

Polynomials are immutable dense coefficient tuples of canonical field
indices, low degree first, with no trailing zeros.  The zero polynomial
has an empty tuple and degree -infinity (a float sentinel, never -1).

The module also fixes the canonical enumeration a_0, a_1, a_2, ... of A:
a_k is the polynomial whose coefficient vector is the base-q digit string
of k (so a_k for k < q are the field constants in index order, a_0 = 0,
a_1 = 1).  An optional `order` argument replaces that digit-to-element
map with any permutation fixing 0, which lets callers probe
order-dependence of derived quantities.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import inf

from .field import FieldElement, FieldSpec

NEG_INF = float("-inf")


class ParseError(ValueError):
    pass


class Poly:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs=()):
        cs = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.spec != field:
                    raise ValueError("coefficient from a different field")
                cs.append(c.index)
            else:
                cs.append(int(c))
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            if not 0 <= c < field.q:
                raise ValueError(f"coefficient index {c} out of range")
        self.field = field
        self.coeffs = tuple(cs)
        self._hash = None

    # ------------------------------------------------------------- basics
    @property
    def degree(self):
        """Degree as an int; -infinity for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        f = self.field
        il = f.inv(self.coeffs[-1])
        return Poly(f, [f.mul(c, il) for c in self.coeffs])

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.coeffs))
        return self._hash

    # --------------------------------------------------------- arithmetic
    def _check(self, other) -> "Poly":
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError("polynomials over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Poly(f, out)

    def __sub__(self, other):
        other = self._check(other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        out = [0] * n
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else 0
            b = other.coeffs[i] if i < len(other.coeffs) else 0
            out[i] = f.sub(a, b)
        return Poly(f, out)

    def __neg__(self):
        f = self.field
        return Poly(f, [f.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, FieldElement) or isinstance(other, int):
            f = self.field
            s = other.index if isinstance(other, FieldElement) else other % f.q
            return Poly(f, [f.mul(c, s) for c in self.coeffs])
        other = self._check(other)
        f = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(f)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                mrow = f._mul[a]
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = f.add(out[i + j], mrow[b])
        return Poly(f, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        num = list(self.coeffs)
        den = other.coeffs
        dd = len(den) - 1
        if len(num) < len(den):
            return Poly(f), self
        inv_lead = f.inv(den[-1])
        quo = [0] * (len(num) - dd)
        for shift in range(len(num) - dd - 1, -1, -1):
            c = f.mul(num[shift + dd], inv_lead)
            if c:
                quo[shift] = c
                for i in range(dd + 1):
                    if den[i]:
                        num[shift + i] = f.sub(num[shift + i], f.mul(c, den[i]))
        return Poly(f, quo), Poly(f, num[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def shift(self, k: int) -> "Poly":
        """Multiply by t^k."""
        if not self.coeffs:
            return self
        return Poly(self.field, (0,) * k + self.coeffs)

    def derivative(self) -> "Poly":
        f = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(f.mul(self.coeffs[i], i % f.p))
        return Poly(f, out)

    def eval_at(self, x) -> FieldElement:
        f = self.field
        xi = x.index if isinstance(x, FieldElement) else int(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, xi), c)
        return f.element(acc)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Poly({to_text(self)!r})"


# ------------------------------------------------------------------ parse
def _split_terms(text: str):
    """Split at top-level + and -, keeping signs; depth tracks parentheses."""
    terms = []
    sign, buf, depth = 1, [], 0
    for ch in text:
        if ch == "(":
            depth += 1
            buf.append(ch)
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
            buf.append(ch)
        elif ch in "+-" and depth == 0:
            if buf:
                terms.append((sign, "".join(buf)))
                buf = []
            elif terms:
                raise ParseError(f"dangling operator in {text!r}")
            sign = 1 if ch == "+" else -1
        else:
            buf.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    if not buf:
        raise ParseError(f"empty term in {text!r}")
    terms.append((sign, "".join(buf)))
    return terms


def _parse_monomial(term: str, var: str):
    """Split one term into (coefficient text, exponent) for the variable."""
    depth = 0
    pos = None
    for i, ch in enumerate(term):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == var and depth == 0:
            if pos is not None:
                raise ParseError(f"repeated variable in term {term!r}")
            pos = i
    if pos is None:
        return term, 0
    coef = term[:pos]
    if coef.endswith("*"):
        coef = coef[:-1]
    rest = term[pos + 1:]
    if rest == "":
        exp = 1
    elif rest.startswith("^") and rest[1:].isdigit():
        exp = int(rest[1:])
    else:
        raise ParseError(f"malformed exponent in term {term!r}")
    return coef, exp


def parse_prime_coeffs(text: str, p: int, var: str = "u") -> tuple:
    """Parse a polynomial in `var` with integer coefficients into an F_p

    coefficient tuple (low first).  Used for extension-field moduli."""
    text = "".join(text.split())
    if not text:
        raise ParseError("empty polynomial text")
    acc: dict = {}
    for sign, term in _split_terms(text):
        coef, exp = _parse_monomial(term, var)
        if coef == "":
            c = 1
        elif coef.isdigit():
            c = int(coef)
        else:
            raise ParseError(f"malformed coefficient {coef!r}")
        acc[exp] = (acc.get(exp, 0) + sign * c) % p
    deg = max(acc) if acc else 0
    return tuple(acc.get(i, 0) for i in range(deg + 1))


def _parse_coefficient(text: str, field: FieldSpec) -> int:
    """Coefficient token -> canonical element index."""
    if text == "":
        return 1
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
        if not text:
            raise ParseError("empty parenthesized coefficient")
    if text.isdigit():
        if field.m == 1:
            return int(text) % field.q
        return field.from_u_poly([int(text)])
    if field.m == 1:
        raise ParseError(f"malformed coefficient {text!r}")
    coeffs = parse_prime_coeffs(text, field.p, "u")
    return field.from_u_poly(coeffs)


def parse(field: FieldSpec, text: str) -> Poly:
    """Parse terms like c*t^k, t^k, t, c joined by + and -; extension-field

    coefficients are u-polynomials, parenthesized or bare monomials."""
    s = "".join(text.split())
    if not s:
        raise ParseError("empty polynomial text")
    acc: dict = {}
    for sign, term in _split_terms(s):
        coef, exp = _parse_monomial(term, "t")
        c = _parse_coefficient(coef, field)
        if sign < 0:
            c = field.neg(c)
        acc[exp] = field.add(acc.get(exp, 0), c)
    deg = max(acc) if acc else 0
    return Poly(field, [acc.get(i, 0) for i in range(deg + 1)])


def to_text(p: Poly) -> str:
    if not p.coeffs:
        return "0"
    field = p.field
    parts = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        var = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        if k == 0:
            parts.append(field.element_str(c))
        elif c == 1:
            parts.append(var)
        else:
            cs = field.element_str(c)
            if "+" in cs:
                cs = f"({cs})"
            parts.append(cs + var)
    return "+".join(parts)


# ------------------------------------------------------- index bijection
def _check_order(field: FieldSpec, order):
    # Any digit relabeling keeps a_k well defined; a_0 = 0 stays fixed so the
    # zero representative is always first.
    if order is None:
        return None
    order = tuple(order)
    if len(order) != field.q or order[0] != 0:
        raise ValueError("order must be a permutation of 0..q-1 starting at 0")
    if len(set(order)) != field.q:
        raise ValueError("order must be a permutation of 0..q-1 starting at 0")
    return order


def index_to_poly(field: FieldSpec, k: int, order=None) -> Poly:
    """a_k: the polynomial whose base-q digits of k give its coefficients."""
    if k < 0:
        raise ValueError("index must be nonnegative")
    order = _check_order(field, order)
    q = field.q
    cs = []
    while k:
        d = k % q
        cs.append(order[d] if order else d)
        k //= q
    return Poly(field, cs)


def poly_to_index(p: Poly, order=None) -> int:
    order = _check_order(p.field, order)
    q = p.field.q
    if order:
        where = {e: i for i, e in enumerate(order)}
    k = 0
    for c in reversed(p.coeffs):
        k = k * q + (where[c] if order else c)
    return k


def enumerate_residues(f: Poly) -> list:
    """Canonical residue representatives mod f: all degrees < deg f, plus 0."""
    d = f.degree
    if not isinstance(d, int) or d < 1:
        raise ValueError("modulus must have degree >= 1")
    return [index_to_poly(f.field, k) for k in range(f.field.q ** d)]


def factorial(field: FieldSpec, k: int, order=None, mod: Poly | None = None) -> Poly:
    """prod_{i<k} (a_k - a_i); with mod given, the product is reduced mod

    `mod` at every step (gcd(mod, .) is unchanged by that reduction)."""
    ak = index_to_poly(field, k, order)
    out = Poly(field, [1])
    for i in range(k):
        out = out * (ak - index_to_poly(field, i, order))
        if mod is not None:
            out = out % mod
    return out


# ------------------------------------------------------- irreducibility
_IRRED_CACHE: dict = {}
_IRRED_LOCK = threading.Lock()


def monic_irreducibles(field: FieldSpec, degree: int) -> tuple:
    """All monic irreducibles of exact degree `degree`, in index order.

    The table is memoized per (field, degree) and append-only."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    key = (field, degree)
    got = _IRRED_CACHE.get(key)
    if got is not None:
        return got
    q = field.q
    found = []
    for k in range(q ** degree, 2 * q ** degree):
        p = index_to_poly(field, k)
        for d in range(1, degree // 2 + 1):
            if any((p % r).is_zero() for r in monic_irreducibles(field, d)):
                break
        else:
            found.append(p)
    out = tuple(found)
    with _IRRED_LOCK:
        _IRRED_CACHE.setdefault(key, out)
    return _IRRED_CACHE[key]


def is_irreducible(p: Poly) -> bool:
    d = p.degree
    if not isinstance(d, int) or d < 1:
        return False
    pm = p.monic()
    if d == 1:
        return True
    for dd in range(1, d // 2 + 1):
        if any((pm % r).is_zero() for r in monic_irreducibles(p.field, dd)):
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    unit: FieldElement
    factors: tuple  # ((Poly, int), ...) monic irreducible, sorted by (deg, index)

    def reconstruct(self) -> Poly:
        field = self.unit.spec
        out = Poly(field, [self.unit.index])
        for p, e in self.factors:
            out = out * p ** e
        return out

    def to_json(self):
        return {"unit": str(self.unit),
                "factors": [[to_text(p), e] for p, e in self.factors]}

    def __str__(self):
        parts = [str(self.unit)]
        parts += [f"({to_text(p)})^{e}" for p, e in self.factors]
        return " * ".join(parts)


def factorize(g: Poly) -> Factorization:
    """Factor a nonzero polynomial by trial division with monic irreducibles

    in (degree, index) order."""
    if not isinstance(g.degree, int) or g.degree < 1:
        raise ValueError("cannot factor a constant")
    field = g.field
    unit = field.element(g.leading)
    rem = g.monic()
    factors = []
    d = 1
    while 2 * d <= rem.degree:
        for p in monic_irreducibles(field, d):
            e = 0
            while True:
                quo, r = divmod(rem, p)
                if r.is_zero():
                    rem = quo
                    e += 1
                else:
                    break
            if e:
                factors.append((p, e))
            if rem.degree < 2 * d:
                break
        d += 1
    if isinstance(rem.degree, int) and rem.degree >= 1:
        factors.append((rem, 1))
    factors.sort(key=lambda pe: (pe[0].degree, poly_to_index(pe[0])))
    return Factorization(unit, tuple(factors))


def valuation(p: Poly, h: Poly, check: bool = True):
    """Largest v with p^v | h; +infinity for h = 0."""
    if check and not is_irreducible(p):
        raise ValueError("valuation requires an irreducible polynomial")
    if h.is_zero():
        return inf
    v = 0
    while True:
        quo, r = divmod(h, p)
        if not r.is_zero():
            return v
        h = quo
        v += 1


def monic_divisors(g: Poly) -> list:
    """All monic divisors of g with degree >= 1, sorted by (degree, index)."""
    fact = factorize(g)
    divs = [Poly(g.field, [1])]
    for p, e in fact.factors:
        grown = []
        pw = Poly(g.field, [1])
        for _ in range(e + 1):
            grown += [d * pw for d in divs]
            pw = pw * p
        divs = grown
    out = [d for d in divs if isinstance(d.degree, int) and d.degree >= 1]
    out.sort(key=lambda d: (d.degree, poly_to_index(d)))
    return out


def gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly):
    """(g, x, y) with x*a + y*b = g, g monic (or zero)."""
    field = a.field
    r0, r1 = a, b
    s0, s1 = Poly(field, [1]), Poly(field)
    t0, t1 = Poly(field), Poly(field, [1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    il = field.inv(r0.leading)
    e = field.element(il)
    return r0 * e, s0 * e, t0 * e


def t_var(field: FieldSpec) -> Poly:
    return Poly(field, [0, 1])


def constant(field: FieldSpec, c) -> Poly:
    return Poly(field, [c])
