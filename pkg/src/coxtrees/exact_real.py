"""Exact arithmetic in real cyclotomic fields.

Every value lives in ``Q(theta)`` with ``theta = 2cos(pi/L)`` and is stored as
integer coefficients of a polynomial in ``theta`` (reduced modulo the minimal
polynomial) over one positive common denominator.  That representation is
canonical, so equality and hashing are tuple comparisons.  Signs are decided
under the real embedding ``theta -> 2cos(pi/L)``: a float evaluation with a
generous error bound answers almost always, and exact interval refinement of
``theta`` settles the rest.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

INF = math.inf


class ContextMismatch(ValueError):
    """Raised when values from different fields meet, or a field is too small."""


# ---------------------------------------------------------------------------
# integer / rational polynomial helpers, coefficient lists are low -> high


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Quotient of integer polynomials when ``den`` is monic and divides ``num``."""
    num = list(num)
    d = len(den) - 1
    assert den[-1] == 1
    q = [0] * (len(num) - d)
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i]
        q[i - d] = c
        if c:
            for j in range(d + 1):
                num[i - d + j] -= c * den[j]
    assert not any(num), "non-exact polynomial division"
    return q


def _poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, cyclotomic(d))
    return tuple(num)


def dickson(k: int) -> list[int]:
    """Integer polynomial D_k with D_k(z + 1/z) = z^k + z^-k, i.e. D_k(2cos x) = 2cos(kx)."""
    prev, cur = [2], [0, 1]
    if k == 0:
        return prev
    for _ in range(k - 1):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, _trim(nxt)
    return cur


@lru_cache(maxsize=None)
def real_cyclotomic(n: int) -> tuple[int, ...]:
    """Minimal polynomial of 2cos(2pi/n) over the rationals."""
    if n == 1:
        return (-2, 1)
    if n == 2:
        return (2, 1)
    phi = cyclotomic(n)
    k = (len(phi) - 1) // 2
    out = [phi[k]]
    for i in range(1, k + 1):
        di = dickson(i)
        out += [0] * (len(di) - len(out))
        for j, c in enumerate(di):
            out[j] += phi[k + i] * c
    return tuple(_trim(out))


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _sturm_count(f: Sequence[int], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of ``f`` in (a, b]."""
    seq = [[Fraction(c) for c in f]]
    seq.append(_trim([Fraction(i * c) for i, c in enumerate(f)][1:]))
    while len(seq[-1]) > 1:
        r = list(seq[-2])
        d = seq[-1]
        while len(r) >= len(d):
            c = r[-1] / d[-1]
            shift = len(r) - len(d)
            for j, x in enumerate(d):
                r[shift + j] -= c * x
            _trim(r)
            if not r:
                break
        if not r:
            break
        seq.append([-c for c in r])

    def changes(x):
        vals = [v for v in (_poly_eval(p, x) for p in seq) if v != 0]
        return sum(1 for u, v in zip(vals, vals[1:]) if (u < 0) != (v < 0))

    return changes(a) - changes(b)


# ---------------------------------------------------------------------------


class FieldContext:
    """The field Q(2cos(pi/L)) with its minimal polynomial and an isolating interval."""

    __slots__ = ("level", "min_poly", "degree", "theta_interval", "theta", "_powers")

    def __init__(self, level: int):
        if level < 1:
            raise ValueError("level must be a positive integer")
        self.level = level
        self.min_poly = real_cyclotomic(2 * level)
        self.degree = len(self.min_poly) - 1
        self.theta = 2 * math.cos(math.pi / level)
        self._powers = tuple(self.theta**i for i in range(self.degree))
        self.theta_interval = self._isolate()

    def _isolate(self) -> tuple[Fraction, Fraction]:
        f = self.min_poly
        if self.degree == 1:
            root = Fraction(-f[0], f[1])
            return root, root
        delta = Fraction(1, 10**9)
        center = Fraction(self.theta).limit_denominator(10**12)
        a, b = center - delta, center + delta
        if _sturm_count(f, a, b) != 1:  # pragma: no cover - float setup failure
            raise ArithmeticError(f"could not isolate 2cos(pi/{self.level})")
        return a, b

    def __repr__(self) -> str:
        return f"FieldContext(level={self.level}, degree={self.degree})"

    def __reduce__(self):
        return (field_context, (self.level,))

    # constructors ---------------------------------------------------------

    def element(self, value) -> "ExactReal":
        """Coerce an int / Fraction / ExactReal into this field."""
        if isinstance(value, ExactReal):
            if value.ctx is not self:
                raise ContextMismatch("element belongs to another field")
            return value
        q = Fraction(value)
        return ExactReal._make(self, (q.numerator,) + (0,) * (self.degree - 1), q.denominator)

    def from_coeffs(self, coeffs: Iterable) -> "ExactReal":
        """Element sum(c_i theta^i); reduces modulo the minimal polynomial."""
        qs = [Fraction(c) for c in coeffs]
        den = 1
        for q in qs:
            den = den * q.denominator // math.gcd(den, q.denominator)
        nums = [q.numerator * (den // q.denominator) for q in qs]
        return ExactReal._make(self, self._reduce(nums), den)

    @property
    def zero(self) -> "ExactReal":
        return self.element(0)

    @property
    def one(self) -> "ExactReal":
        return self.element(1)

    @property
    def gen(self) -> "ExactReal":
        """The primitive element theta = 2cos(pi/L)."""
        return self.from_coeffs([0, 1])

    def _reduce(self, p: list[int]) -> tuple[int, ...]:
        f, d = self.min_poly, self.degree
        p = list(p)
        for i in range(len(p) - 1, d - 1, -1):
            c = p[i]
            if c:
                for j in range(d):
                    p[i - d + j] -= c * f[j]
        p = p[:d]
        return tuple(p) + (0,) * (d - len(p))


@lru_cache(maxsize=None)
def field_context(level: int) -> FieldContext:
    return FieldContext(level)


def make_context(orders: Iterable) -> FieldContext:
    """Smallest field of the form Q(2cos(pi/L)) containing 2cos(pi/m) for all finite m given.

    ``L`` is the lcm of the finite orders; infinite orders do not enlarge the field.
    """
    orders = list(orders)
    if not orders:
        raise ValueError("at least one order is required")
    level = 1
    for m in orders:
        if m == INF:
            continue
        if int(m) != m or m < 1:
            raise ValueError(f"bad order {m!r}")
        level = math.lcm(level, int(m))
    return field_context(level)


class ExactReal:
    """Immutable element of a real cyclotomic field, in canonical form."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: FieldContext, coeffs: Iterable):
        other = ctx.from_coeffs(coeffs)
        self.ctx, self.num, self.den, self._hash = ctx, other.num, other.den, None

    @classmethod
    def _make(cls, ctx: FieldContext, num: tuple[int, ...], den: int) -> "ExactReal":
        if den < 0:
            num, den = tuple(-c for c in num), -den
        if den != 1:
            g = den
            for c in num:
                if g == 1:
                    break
                g = math.gcd(g, c)
            if g != 1:
                num, den = tuple(c // g for c in num), den // g
        obj = object.__new__(cls)
        obj.ctx, obj.num, obj.den, obj._hash = ctx, num, den, None
        return obj

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def _coerce(self, other) -> "ExactReal | None":
        if isinstance(other, ExactReal):
            if other.ctx is not self.ctx:
                raise ContextMismatch("arithmetic between different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.element(other)
        return None

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return ExactReal._make(self.ctx, tuple(a + b for a, b in zip(self.num, o.num)), self.den)
        return ExactReal._make(
            self.ctx,
            tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return ExactReal._make(self.ctx, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, int):
            return ExactReal._make(self.ctx, tuple(a * other for a in self.num), self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.ctx.degree == 1:
            return ExactReal._make(self.ctx, (self.num[0] * o.num[0],), self.den * o.den)
        prod = _poly_mul(self.num, o.num)
        return ExactReal._make(self.ctx, self.ctx._reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "ExactReal":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in exact field")
        if self.ctx.degree == 1:
            return ExactReal._make(self.ctx, (self.den,), self.num[0])
        # extended Euclid in Q[x] against the minimal polynomial
        f = [Fraction(c) for c in self.ctx.min_poly]
        g = _trim([Fraction(c, self.den) for c in self.num])
        r0, r1 = f, g
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q = [Fraction(0)] * (len(r0) - len(r1) + 1)
            r = list(r0)
            while len(r) >= len(r1):
                c = r[-1] / r1[-1]
                shift = len(r) - len(r1)
                q[shift] = c
                for j, x in enumerate(r1):
                    r[shift + j] -= c * x
                _trim(r)
                if not r:
                    break
            qs = _poly_mul(q, s1)
            s_new = [a - b for a, b in _zip_longest(s0, qs)]
            r0, r1 = r1, r
            s0, s1 = s1, _trim(s_new)
        c = r1[0]
        return self.ctx.from_coeffs([x / c for x in s1])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.ctx.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ExactReal):
            return self.ctx is other.ctx and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return self.is_rational() and Fraction(self.num[0], self.den) == q
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.num[0], self.den))
            else:
                self._hash = hash((self.ctx.level, self.num, self.den))
        return self._hash

    def sign(self) -> int:
        """Sign of the value under the embedding theta -> 2cos(pi/L)."""
        return sign_of_coeffs(self.ctx, self.num)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return sum(float(c) * t for c, t in zip(self.num, self.ctx._powers)) / self.den

    def __repr__(self):
        if self.is_rational():
            return f"ExactReal({Fraction(self.num[0], self.den)})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" + ("" if i == 0 else "*t" if i == 1 else f"*t^{i}"))
        return f"ExactReal({' + '.join(terms)}; t=2cos(pi/{self.ctx.level}))"


def _zip_longest(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


def _interval_eval(p: Sequence[int], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(p):
        cands = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo, acc_hi = min(cands) + c, max(cands) + c
    return acc_lo, acc_hi


def sign_of_coeffs(ctx: FieldContext, num: Sequence[int]) -> int:
    """Sign of sum(num[i] * theta^i) for integer coefficients (denominators are positive)."""
    if ctx.degree == 1 or not any(num[1:]):
        return (num[0] > 0) - (num[0] < 0)
    val, scale = 0.0, 0.0
    for c, t in zip(num, ctx._powers):
        term = float(c) * t
        val += term
        scale += abs(term)
    if abs(val) > 1e-9 * scale:
        return 1 if val > 0 else -1
    return _exact_sign(ctx, num)


def _exact_sign(ctx: FieldContext, num: Sequence[int]) -> int:
    if not any(num):
        return 0
    a, b = ctx.theta_interval
    f = ctx.min_poly
    fa = _poly_eval(f, a)
    while True:
        lo, hi = _interval_eval(num, a, b)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        mid = (a + b) / 2
        fm = _poly_eval(f, mid)
        if fm == 0:  # pragma: no cover - theta is irrational here
            raise ArithmeticError("rational root of an irreducible polynomial")
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid


def cos_pi_over(ctx: FieldContext, m) -> ExactReal:
    """cos(pi/m) as an element of ``ctx``; for m = inf the limit value 1."""
    return two_cos_pi_over(ctx, m) * Fraction(1, 2)


def two_cos_pi_over(ctx: FieldContext, m) -> ExactReal:
    """2cos(pi/m), an algebraic integer; 2 for m = inf."""
    if m == INF:
        return ctx.element(2)
    m = int(m)
    if m < 1:
        raise ValueError(f"bad order {m}")
    rational = {1: -2, 2: 0, 3: 1}
    if m in rational:
        return ctx.element(rational[m])
    if ctx.level % m:
        raise ContextMismatch(f"2cos(pi/{m}) is not in Q(2cos(pi/{ctx.level}))")
    return ctx.from_coeffs(dickson(ctx.level // m))


def arith(a: ExactReal, b: ExactReal, op: str) -> ExactReal:
    """Functional form of the four field operations."""
    if a.ctx is not b.ctx:
        raise ContextMismatch("arithmetic between different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def sign(a: ExactReal) -> int:
    return a.sign()
