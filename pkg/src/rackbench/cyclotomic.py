"""Exact arithmetic in ℚ(ζₙ) and ranks of matrices over it.

Elements are coefficient tuples of polynomials in ζ reduced modulo the n-th
cyclotomic polynomial Φₙ. Ranks are computed by fraction-free elimination and
can be cross-checked modulo a prime p ≡ 1 (mod n).
"""

import math
from fractions import Fraction
from functools import lru_cache


class CyclotomicError(ValueError):
    pass


def _poly_divmod_int(num, den):
    # exact division of integer polynomials (lists, low degree first), den monic
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return q, num[:len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Coefficients of Φₙ, lowest degree first."""
    if n < 1:
        raise CyclotomicError("n must be positive")
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = _poly_divmod_int(p, cyclotomic_poly(d))
            if any(r):
                raise CyclotomicError("Φ computation failed")
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _reduce(coeffs, n):
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            for j in range(deg + 1):
                c[i - deg + j] -= t * phi[j]
    c = c[:deg] + [0] * max(0, deg - len(c))
    return tuple(c)


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdivmod(a, b):
    a = [Fraction(x) for x in a]
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = Fraction(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, d in enumerate(b):
                a[i + j] -= c * d
    return q, _trim(a[:len(b) - 1])


class CycScalar:
    """An element of ℚ(ζₙ)."""

    __slots__ = ("n", "c")

    def __init__(self, n, coeffs=()):
        self.n = n
        self.c = _reduce([Fraction(x) for x in coeffs], n) if coeffs else \
            (Fraction(0),) * (len(cyclotomic_poly(n)) - 1)

    @classmethod
    def zeta(cls, n, k=1):
        """ζₙᵏ."""
        k %= n
        return cls(n, [0] * k + [1])

    @classmethod
    def const(cls, n, v):
        return cls(n, [v])

    def _wrap(self, c):
        out = CycScalar.__new__(CycScalar)
        out.n = self.n
        out.c = c
        return out

    def _coerce(self, o):
        if isinstance(o, CycScalar):
            if o.n != self.n:
                raise CyclotomicError("mixing ℚ(ζ%d) and ℚ(ζ%d)" % (self.n, o.n))
            return o
        return CycScalar.const(self.n, o)

    def __add__(self, o):
        o = self._coerce(o)
        return self._wrap(tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(tuple(-a for a in self.c))

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        return self._wrap(_reduce(_pmul(self.c, o.c), self.n))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, o):
        if not isinstance(o, CycScalar):
            o = CycScalar.const(self.n, o)
        return self.n == o.n and self.c == o.c

    def __hash__(self):
        return hash((self.n, self.c))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in ℚ(ζ%d)" % self.n)
        # extended Euclid in ℚ[t] against Φₙ
        r0, r1 = [Fraction(x) for x in cyclotomic_poly(self.n)], _trim(self.c)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        # r1 is a nonzero constant
        inv = Fraction(1) / r1[0]
        return CycScalar(self.n, [x * inv for x in s1])

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def is_integral(self):
        return all(x.denominator == 1 for x in self.c)

    def to_mod_p(self, p, root):
        """Image under ζ ↦ ``root`` in 𝔽_p (coefficients must have denominators prime to p)."""
        acc = 0
        pw = 1
        for x in self.c:
            acc = (acc + x.numerator * pow(x.denominator, -1, p) * pw) % p
            pw = pw * root % p
        return acc

    def __repr__(self):
        terms = []
        for i, x in enumerate(self.c):
            if x:
                terms.append(str(x) if i == 0 else "%s*z^%d" % (x, i))
        return "CycScalar(%d: %s)" % (self.n, " + ".join(terms) or "0")


def _psub(a, b):
    m = max(len(a), len(b))
    a = list(a) + [0] * (m - len(a))
    b = list(b) + [0] * (m - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def rank_exact(rows):
    """Rank of a matrix over ℚ(ζₙ) by Bareiss elimination.

    ``rows`` is a list of lists of CycScalar (zeros may be given as None).
    Divisions by the previous pivot are exact in the ring generated by the
    entries; they are carried out with the field inverse.
    """
    if not rows:
        return 0
    n = next((x.n for r in rows for x in r if x is not None), 1)
    zero = CycScalar(n)
    M = [[x if x is not None else zero for x in r] for r in rows]
    nr, nc = len(M), len(M[0])
    rank = 0
    prev = CycScalar.const(n, 1)
    prev_inv = prev
    col = 0
    while rank < nr and col < nc:
        piv = next((i for i in range(rank, nr) if M[i][col]), None)
        if piv is None:
            col += 1
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        for i in range(rank + 1, nr):
            a = M[i][col]
            row_i = M[i]
            row_r = M[rank]
            for j in range(col + 1, nc):
                v = p * row_i[j] - a * row_r[j]
                row_i[j] = v * prev_inv if v else v
            row_i[col] = zero
        prev = p
        prev_inv = p.inverse()
        rank += 1
        col += 1
    return rank


def _is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_for(n, start=2**31):
    """Smallest prime p ≥ start with p ≡ 1 (mod n)."""
    p = start + (1 - start) % n
    while not _is_prime(p):
        p += n
    return p


def primitive_root_of_unity(n, p):
    """An element of exact order n in 𝔽_p (requires n | p-1)."""
    if (p - 1) % n:
        raise CyclotomicError("%d does not divide p-1" % n)
    primes = [q for q in range(2, n + 1) if n % q == 0 and all(q % r for r in range(2, math.isqrt(q) + 1))]
    for g in range(2, p):
        z = pow(g, (p - 1) // n, p)
        if all(pow(z, n // q, p) != 1 for q in primes):
            return z
    raise CyclotomicError("no primitive root found")


def rank_mod_p(rows, p):
    M = [list(r) for r in rows]
    if not M:
        return 0
    nr, nc = len(M), len(M[0])
    rank = 0
    for col in range(nc):
        piv = next((i for i in range(rank, nr) if M[i][col] % p), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], -1, p)
        for i in range(nr):
            if i != rank and M[i][col] % p:
                f = M[i][col] * inv % p
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
        if rank == nr:
            break
    return rank
