"""Arithmetic in small finite fields F_q, q = p^m.

Elements are canonical indices 0..q-1.  Index k encodes the coefficient
vector of the element over F_p in mixed radix base p, least significant
coordinate first, so index 0 is zero and index 1 is one.  A FieldSpec
precomputes full operation tables at construction; everything downstream
works on indices and stays exact.
"""

from __future__ import annotations

import threading

DEFAULT_MAX_Q = 16

_SPEC_CACHE: dict = {}
_SPEC_LOCK = threading.Lock()


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mod_p_divrem(num: list, den: list, p: int) -> tuple:
    """Long division of coefficient lists over F_p (low-first, den nonzero)."""
    num = list(num)
    dd = len(den) - 1
    while len(den) > 1 and den[-1] == 0:
        den = den[:-1]
        dd -= 1
    inv_lead = pow(den[-1], p - 2, p) if p > 2 else den[-1]
    quo = [0] * max(len(num) - dd, 0)
    while len(num) >= len(den) and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) < len(den):
            break
        shift = len(num) - len(den)
        c = (num[-1] * inv_lead) % p
        quo[shift] = c
        for i, dc in enumerate(den):
            num[shift + i] = (num[shift + i] - c * dc) % p
    while num and num[-1] == 0:
        num.pop()
    return quo, num


def _is_irreducible_mod_p(coeffs: tuple, p: int) -> bool:
    """Irreducibility over F_p by trial division, for modulus validation only."""
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for k in range(p ** d):
            cand = []
            kk = k
            for _ in range(d):
                cand.append(kk % p)
                kk //= p
            cand.append(1)
            _, rem = _poly_mod_p_divrem(list(coeffs), cand, p)
            if not rem:
                return False
    return True


def default_modulus(p: int, m: int) -> tuple:
    """First monic irreducible of degree m over F_p in index order, low-first."""
    for k in range(p ** m):
        cand = []
        kk = k
        for _ in range(m):
            cand.append(kk % p)
            kk //= p
        cand.append(1)
        if _is_irreducible_mod_p(tuple(cand), p):
            return tuple(cand)
    raise ValueError(f"no irreducible of degree {m} over F_{p}")


class FieldSpec:
    """F_{p^m} with all index-level operation tables precomputed."""

    __slots__ = ("p", "m", "q", "modulus", "_add", "_mul", "_neg", "_inv",
                 "_elements", "_hash")

    def __init__(self, p: int, m: int = 1, modulus: tuple | None = None,
                 max_q: int = DEFAULT_MAX_Q):
        if not _is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        if m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m}")
        q = p ** m
        if q > max_q:
            raise ValueError(f"q = {q} exceeds the field size guard {max_q}")
        if m == 1:
            if modulus is not None:
                raise ValueError("no modulus is stored for prime fields")
        else:
            if modulus is None:
                modulus = default_modulus(p, m)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree m")
            if not _is_irreducible_mod_p(modulus, p):
                raise ValueError("modulus must be irreducible over F_p")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus
        self._build_tables()
        self._elements = tuple(FieldElement(self, k) for k in range(q))
        self._hash = hash((p, m, modulus))

    def _coeffs(self, k: int) -> list:
        out = []
        for _ in range(self.m):
            out.append(k % self.p)
            k //= self.p
        return out

    def _index(self, coeffs) -> int:
        k = 0
        for c in reversed(list(coeffs)):
            k = k * self.p + (c % self.p)
        return k

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        neg = [0] * q
        for i in range(q):
            ci = self._coeffs(i)
            neg[i] = self._index((-c) % p for c in ci)
            for j in range(q):
                cj = self._coeffs(j)
                add[i][j] = self._index((a + b) % p for a, b in zip(ci, cj))
                prod = [0] * (2 * m - 1)
                for a, ca in enumerate(ci):
                    if ca:
                        for b, cb in enumerate(cj):
                            prod[a + b] = (prod[a + b] + ca * cb) % p
                if m > 1:
                    _, prod = _poly_mod_p_divrem(prod, list(self.modulus), p)
                prod += [0] * (m - len(prod))
                mul[i][j] = self._index(prod[:m])
        inv = [0] * q
        for i in range(1, q):
            for j in range(1, q):
                if mul[i][j] == 1:
                    inv[i] = j
                    break
            else:
                raise AssertionError(f"no inverse for element {i}")
        self._add = tuple(tuple(r) for r in add)
        self._mul = tuple(tuple(r) for r in mul)
        self._neg = tuple(neg)
        self._inv = tuple(inv)

    # index-level arithmetic, used heavily by polyring
    def add(self, i: int, j: int) -> int:
        return self._add[i][j]

    def sub(self, i: int, j: int) -> int:
        return self._add[i][self._neg[j]]

    def mul(self, i: int, j: int) -> int:
        return self._mul[i][j]

    def neg(self, i: int) -> int:
        return self._neg[i]

    def inv(self, i: int) -> int:
        if i == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return self._inv[i]

    def element(self, k: int) -> "FieldElement":
        return self._elements[k]

    def elements(self) -> tuple:
        return self._elements

    def zero(self) -> "FieldElement":
        return self._elements[0]

    def one(self) -> "FieldElement":
        return self._elements[1]

    def coeffs_of(self, k: int) -> tuple:
        return tuple(self._coeffs(k))

    def from_coeffs(self, coeffs) -> int:
        """Index of the element with the given F_p coordinates (length <= m)."""
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise ValueError("coefficient vector longer than extension degree")
        coeffs += [0] * (self.m - len(coeffs))
        return self._index(coeffs)

    def from_u_poly(self, coeffs) -> int:
        """Index of sum_b c_b * u^b for an arbitrary-length F_p coefficient list.

        Exponents >= m reduce through the modulus via table arithmetic.
        """
        u = self.from_coeffs([0, 1]) if self.m > 1 else 0
        val = 0
        for c in reversed(list(coeffs)):
            val = self._mul[val][u] if self.m > 1 else 0
            val = self._add[val][int(c) % self.p]
        return val

    def element_str(self, k: int) -> str:
        if self.m == 1:
            return str(k)
        cs = self._coeffs(k)
        parts = []
        for b in range(self.m - 1, -1, -1):
            c = cs[b]
            if c == 0:
                continue
            if b == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                parts.append(f"{head}u" if b == 1 else f"{head}u^{b}")
        return "+".join(parts) if parts else "0"

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.p == other.p
                and self.m == other.m and self.modulus == other.modulus)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.m == 1:
            return f"FieldSpec(p={self.p})"
        mod = "+".join(
            f"u^{i}" if c == 1 and i > 1 else ("u" if c == 1 and i == 1 else
                                               (str(c) if i == 0 else f"{c}u^{i}"))
            for i, c in reversed(list(enumerate(self.modulus))) if c)
        return f"FieldSpec(p={self.p}, m={self.m}, modulus={mod})"


class FieldElement:
    """Thin wrapper over a canonical index, with operator arithmetic."""

    __slots__ = ("spec", "index")

    def __init__(self, spec: FieldSpec, index: int):
        if not 0 <= index < spec.q:
            raise ValueError(f"element index {index} out of range for q={spec.q}")
        self.spec = spec
        self.index = index

    @property
    def coeffs(self) -> tuple:
        return self.spec.coeffs_of(self.index)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("elements from different fields")
            return other.index
        if isinstance(other, int):
            return other % self.spec.p if self.spec.m > 1 else other % self.spec.q
        return NotImplemented

    def __add__(self, other):
        j = self._other(other)
        if j is NotImplemented:
            return NotImplemented
        return self.spec.element(self.spec.add(self.index, j))

    __radd__ = __add__

    def __sub__(self, other):
        j = self._other(other)
        if j is NotImplemented:
            return NotImplemented
        return self.spec.element(self.spec.sub(self.index, j))

    def __neg__(self):
        return self.spec.element(self.spec.neg(self.index))

    def __mul__(self, other):
        j = self._other(other)
        if j is NotImplemented:
            return NotImplemented
        return self.spec.element(self.spec.mul(self.index, j))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return self.spec.element(self.spec.inv(self.index))

    def __pow__(self, n: int):
        if self.index == 0 and n < 0:
            raise ZeroDivisionError("inverse of zero field element")
        result = 1
        base = self.index if n >= 0 else self.spec.inv(self.index)
        n = abs(n)
        while n:
            if n & 1:
                result = self.spec.mul(result, base)
            base = self.spec.mul(base, base)
            n >>= 1
        return self.spec.element(result)

    def __bool__(self):
        return self.index != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.index == other.index
        if isinstance(other, int):
            return self.index == self._other(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.index))

    def __repr__(self):
        return f"FieldElement({self.spec.element_str(self.index)!r})"

    def __str__(self):
        return self.spec.element_str(self.index)


def field_make(p: int, m: int = 1, modulus=None, max_q: int = DEFAULT_MAX_Q) -> FieldSpec:
    """Build (and cache) the field F_{p^m}; modulus defaults to the first

    monic irreducible of degree m in index order."""
    key = (p, m, tuple(modulus) if modulus is not None else None, max_q)
    with _SPEC_LOCK:
        spec = _SPEC_CACHE.get(key)
        if spec is None:
            spec = FieldSpec(p, m, modulus, max_q=max_q)
            _SPEC_CACHE[key] = spec
        return spec


def field_index(a: FieldElement) -> int:
    return a.index


def field_from_index(spec: FieldSpec, k: int) -> FieldElement:
    return spec.element(k)
