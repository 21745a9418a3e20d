"""Exact arithmetic in real subfields of cyclotomic fields.

A scalar is a finite sum ``sum_e c_e * zeta_N^e`` with rational ``c_e``,
constrained to be fixed by complex conjugation (so it represents a real
number).  Internally the sum is kept as a sparse exponent->numerator map
over one common denominator, with exponents folded into ``[0, N/2)`` for
even ``N`` (using ``zeta^(N/2) = -1``), which keeps products of roots of
unity short and avoids per-operation rational normalization.  The
canonical form -- the representative reduced modulo the N-th cyclotomic
polynomial, supported on exponents ``0 .. phi(N)-1`` -- is computed lazily
and cached; equality and hashing always go through it, so two scalars are
equal exactly when their canonical coefficient maps agree.

Mixed-conductor arithmetic lifts both operands to the lcm conductor.
Within one computation context the conductor is fixed, which makes hashes
comparable; hash-based containers must not mix conductors.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import DivisionByZero, NotReal

# Default conductor: covers sqrt(2) (via zeta_8), sqrt(3) (zeta_12),
# sqrt(5) (zeta_5) and cos(pi/m) for 2m | 120.
DEFAULT_CONDUCTOR = 120

_ZERO = Fraction(0)


def _proper_divisors(n):
    return [d for d in range(1, n) if n % d == 0]


def _polydiv_exact(num, den):
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        q, r = divmod(num[i], lead)
        assert r == 0, "non-exact polynomial division"
        out[i - dn] = q
        if q:
            for j, c in enumerate(den):
                num[i - dn + j] -= q * c
    assert all(c == 0 for c in num), "nonzero remainder in cyclotomic division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of the n-th cyclotomic polynomial, ascending."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _proper_divisors(n):
        poly = _polydiv_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


class _FieldContext:
    """Per-conductor reduction data: degree, folding bound, power tables."""

    __slots__ = ("conductor", "degree", "half", "rows")

    def __init__(self, n):
        phi_poly = cyclotomic_polynomial(n)
        degree = len(phi_poly) - 1
        half = n // 2 if n % 2 == 0 else n
        # rows[e - degree] = integer vector of x^e mod Phi_n for e in [degree, half)
        rows = []
        if half > degree:
            cur = [-c for c in phi_poly[:degree]]  # x^degree
            rows.append(tuple(cur))
            for _ in range(degree + 1, half):
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    for i in range(degree):
                        cur[i] -= top * phi_poly[i]
                rows.append(tuple(cur))
        self.conductor = n
        self.degree = degree
        self.half = half
        self.rows = tuple(rows)


@lru_cache(maxsize=None)
def _context(n):
    if n < 1:
        raise ValueError("conductor must be a positive integer")
    return _FieldContext(n)


class ExactScalar:
    """An element of the real subfield of the conductor-N cyclotomic field."""

    __slots__ = ("conductor", "_num", "_den", "_canon", "_float", "_hash")

    def __init__(self, conductor, terms):
        """Build from an exponent -> rational map (exponents arbitrary ints)."""
        ctx = _context(conductor)
        den = 1
        items = []
        for e, c in terms.items():
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c:
                items.append((int(e), c))
                den = den * c.denominator // math.gcd(den, c.denominator)
        num = {}
        n, half = ctx.conductor, ctx.half
        for e, c in items:
            e %= n
            v = c.numerator * (den // c.denominator)
            if e >= half:
                e -= half
                v = -v
            v += num.get(e, 0)
            if v:
                num[e] = v
            elif e in num:
                del num[e]
        self.conductor = conductor
        self._den = den
        self._num = num
        self._canon = None
        self._float = None
        self._hash = None
        self._reduce(ctx)

    @classmethod
    def _make(cls, conductor, num, den):
        """Trusted constructor: exponents already folded into [0, half)."""
        s = object.__new__(cls)
        s.conductor = conductor
        s._num = num
        s._den = den
        s._canon = None
        s._float = None
        s._hash = None
        s._reduce(_context(conductor))
        return s

    def _reduce(self, ctx):
        num = self._num
        if not num:
            self._den = 1
            return
        g = self._den
        for v in num.values():
            g = math.gcd(g, v)
            if g == 1:
                break
        if g > 1:
            self._num = {e: v // g for e, v in num.items()}
            self._den //= g
        if len(self._num) > ctx.degree:
            vec = self._canonical_vector(ctx)
            self._num = {e: v for e, v in enumerate(vec) if v}
            self._canon = None

    # -- canonical form -------------------------------------------------

    def _canonical_vector(self, ctx):
        vec = [0] * ctx.degree
        deg = ctx.degree
        for e, v in self._num.items():
            if e < deg:
                vec[e] += v
            else:
                for i, r in enumerate(ctx.rows[e - deg]):
                    if r:
                        vec[i] += v * r
        return vec

    def _canon_key(self):
        """Reduced (denominator, ((exp, num), ...)) form; unique per value."""
        if self._canon is None:
            vec = self._canonical_vector(_context(self.conductor))
            pairs = [(i, v) for i, v in enumerate(vec) if v]
            d = self._den
            g = d
            for _, v in pairs:
                g = math.gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                pairs = [(i, v // g) for i, v in pairs]
                d //= g
            if not pairs:
                d = 1
            self._canon = (d, tuple(pairs))
        return self._canon

    def canonical(self):
        """Sorted tuple of (exponent, coefficient) pairs of the reduced form."""
        d, pairs = self._canon_key()
        return tuple((e, Fraction(v, d)) for e, v in pairs)

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_rational(cls, value, conductor=1):
        value = value if isinstance(value, Fraction) else Fraction(value)
        if not value:
            return cls._make(conductor, {}, 1)
        return cls._make(conductor, {0: value.numerator}, value.denominator)

    def lift(self, conductor):
        """Re-express in a larger conductor; conductor must be a multiple."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError("conductor lift must go to a multiple")
        k = conductor // self.conductor
        ctx = _context(conductor)
        num = {}
        for e, v in self._num.items():
            # scaling is injective on [0, half_old) but folding can collide
            e2 = (e * k) % conductor
            if e2 >= ctx.half:
                e2 -= ctx.half
                v = -v
            num[e2] = num.get(e2, 0) + v
        num = {e: v for e, v in num.items() if v}
        return ExactScalar._make(conductor, num, self._den)

    # -- predicates -------------------------------------------------------

    def is_zero(self):
        return not self._canon_key()[1]

    def is_rational(self):
        pairs = self._canon_key()[1]
        return len(pairs) == 0 or (len(pairs) == 1 and pairs[0][0] == 0)

    def as_rational(self):
        d, pairs = self._canon_key()
        if not pairs:
            return _ZERO
        if len(pairs) == 1 and pairs[0][0] == 0:
            return Fraction(pairs[0][1], d)
        raise ValueError("scalar is not rational")

    def conjugate_is_self(self):
        return self._conj_raw()._canon_key() == self._canon_key()

    def _conj_raw(self):
        n = self.conductor
        ctx = _context(n)
        num = {}
        for e, v in self._num.items():
            e2 = (n - e) % n
            if e2 >= ctx.half:
                e2 -= ctx.half
                v = -v
            num[e2] = num.get(e2, 0) + v
        return ExactScalar._make(n, {e: v for e, v in num.items() if v}, self._den)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            if other.conductor == self.conductor:
                return self, other
            l = math.lcm(self.conductor, other.conductor)
            return self.lift(l), other.lift(l)
        if isinstance(other, (int, Fraction)):
            return self, ExactScalar.from_rational(other, self.conductor)
        return self, NotImplemented

    def __add__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        da, db = a._den, b._den
        g = math.gcd(da, db)
        ma, mb = db // g, da // g  # lcm(da, db) = da * ma = db * mb
        num = {e: v * ma for e, v in a._num.items()}
        for e, v in b._num.items():
            w = num.get(e, 0) + v * mb
            if w:
                num[e] = w
            elif e in num:
                del num[e]
        return ExactScalar._make(a.conductor, num, da * ma)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar._make(
            self.conductor, {e: -v for e, v in self._num.items()}, self._den
        )

    def __sub__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        n = a.conductor
        anum, bnum = a._num, b._num
        if not anum or not bnum:
            return ExactScalar._make(n, {}, 1)
        ctx = _context(n)
        half = ctx.half
        if len(anum) == 1 and len(bnum) == 1:
            (e1, v1), = anum.items()
            (e2, v2), = bnum.items()
            e = (e1 + e2) % n
            v = v1 * v2
            if e >= half:
                e -= half
                v = -v
            return ExactScalar._make(n, {e: v}, a._den * b._den)
        num = {}
        bitems = list(bnum.items())
        for e1, v1 in anum.items():
            for e2, v2 in bitems:
                e = e1 + e2
                v = v1 * v2
                if e >= n:
                    e -= n
                if e >= half:
                    e -= half
                    v = -v
                w = num.get(e, 0) + v
                if w:
                    num[e] = w
                elif e in num:
                    del num[e]
        return ExactScalar._make(n, num, a._den * b._den)

    __rmul__ = __mul__

    def galois_image(self, k):
        """Apply the automorphism zeta -> zeta^k (k coprime to the conductor)."""
        n = self.conductor
        ctx = _context(n)
        num = {}
        for e, v in self._num.items():
            e2 = (e * k) % n
            if e2 >= ctx.half:
                e2 -= ctx.half
                v = -v
            num[e2] = num.get(e2, 0) + v
        return ExactScalar._make(n, {e: v for e, v in num.items() if v}, self._den)

    def inv(self):
        """Exact field inverse via the product of Galois conjugates."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return ExactScalar.from_rational(1 / self.as_rational(), self.conductor)
        n = self.conductor
        prod = None
        for k in range(2, n):
            if math.gcd(k, n) != 1:
                continue
            img = self.galois_image(k)
            prod = img if prod is None else prod * img
        norm = self * prod
        q = norm.as_rational()  # field norm is rational by construction
        if not q:
            raise DivisionByZero("zero field norm")
        return prod * (1 / q)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return a * b.inv()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result = ExactScalar.from_rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparisons and embedding ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.from_rational(other, self.conductor)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        a, b = self._coerce(other)
        return a._canon_key() == b._canon_key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.conductor, self._canon_key()))
        return self._hash

    def _float_fast(self):
        n = self.conductor
        tau = 2.0 * math.pi / n
        den = float(self._den)
        s = 0.0
        mag = 0.0
        for e, v in self._num.items():
            cf = v / den
            s += cf * math.cos(tau * e)
            mag += abs(cf)
        return s, mag

    def sign(self):
        """Exact sign of the real value: -1, 0, or +1.

        Fast path: a double evaluation accepted only when it clears a
        conservative error bound.  Otherwise the sign is settled by interval
        arithmetic at increasing precision; a nonzero canonical form
        guarantees termination because the true value is then nonzero.
        """
        den, canon = self._canon_key()
        if not canon:
            return 0
        if len(canon) == 1 and canon[0][0] == 0:
            return -1 if canon[0][1] < 0 else 1
        try:
            s, mag = self._float_fast()
            if abs(s) > mag * 1e-12 + 1e-290:
                return -1 if s < 0 else 1
        except OverflowError:
            pass
        n = self.conductor
        prec = 128
        while prec <= 1 << 16:
            iv = mpmath.iv
            old = iv.prec
            try:
                iv.prec = prec
                tau = 2 * iv.pi
                total = iv.mpf(0)
                for e, v in canon:
                    total += iv.mpf(v) / iv.mpf(den) * iv.cos(tau * e / n)
                if total > 0:
                    return 1
                if total < 0:
                    return -1
            finally:
                iv.prec = old
            prec *= 2
        raise RuntimeError("could not certify sign at 65536 bits")  # pragma: no cover

    def __lt__(self, other):
        a, b = self._coerce(other)
        return (a - b).sign() < 0

    def __le__(self, other):
        a, b = self._coerce(other)
        return (a - b).sign() <= 0

    def __gt__(self, other):
        a, b = self._coerce(other)
        return (a - b).sign() > 0

    def __ge__(self, other):
        a, b = self._coerce(other)
        return (a - b).sign() >= 0

    def to_float(self):
        """Float embedding via zeta_N -> exp(2*pi*i/N), good to ~1e-15 relative."""
        if self._float is None:
            n = self.conductor
            old = mpmath.mp.prec
            try:
                mpmath.mp.prec = 120
                tau = 2 * mpmath.pi
                total = mpmath.mpf(0)
                den = mpmath.mpf(self._den)
                for e, v in self._num.items():
                    total += mpmath.mpf(v) / den * mpmath.cos(tau * e / n)
                self._float = float(total)
            finally:
                mpmath.mp.prec = old
        return self._float

    def __repr__(self):
        canon = self.canonical()
        if not canon:
            return "ExactScalar(0)"
        body = " + ".join(
            f"{c}" if e == 0 else f"{c}*z{self.conductor}^{e}" for e, c in canon
        )
        return f"ExactScalar({body})"


# -- public constructors ------------------------------------------------------


def scalar_make(conductor, coeffs):
    """Build a scalar from an exponent->rational map; must be conjugation-fixed."""
    s = ExactScalar(conductor, dict(coeffs))
    if not s.conjugate_is_self():
        raise NotReal(f"coefficients {coeffs!r} do not define a real value")
    return s


def rational(value, conductor=1):
    return ExactScalar.from_rational(value, conductor)


def zero(conductor=1):
    return ExactScalar._make(conductor, {}, 1)


def one(conductor=1):
    return ExactScalar.from_rational(1, conductor)


def cos_tau(num, den):
    """cos(2*pi*num/den) as an exact scalar of conductor den."""
    if den < 1:
        raise ValueError("denominator must be positive")
    g = math.gcd(num, den)
    num, den = num // g, den // g
    terms = {}
    half = Fraction(1, 2)
    for e in (num % den, (-num) % den):
        terms[e] = terms.get(e, _ZERO) + half
    return ExactScalar(den, terms)


def sin_tau(num, den):
    """sin(2*pi*num/den) as an exact scalar; conductor divides 4*den."""
    return cos_tau(den - 4 * num, 4 * den)


def sqrt2():
    return scalar_make(8, {1: 1, 7: 1})


def sqrt3():
    return scalar_make(12, {1: 1, 11: 1})


def sqrt5():
    return scalar_make(5, {0: 1, 1: 2, 4: 2})


def golden_ratio():
    """(1 + sqrt(5)) / 2, equal to 1 + zeta_5 + zeta_5^4."""
    return scalar_make(5, {0: 1, 1: 1, 4: 1})


def unify_conductor(scalars):
    """Lift a collection of scalars to their common (lcm) conductor."""
    scalars = list(scalars)
    if not scalars:
        return []
    l = 1
    for s in scalars:
        l = math.lcm(l, s.conductor)
    return [s.lift(l) for s in scalars]
