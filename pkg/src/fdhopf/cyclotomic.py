"""Exact arithmetic in the cyclotomic fields Q(zeta_N).

An element of Q(zeta_N) is stored as an integer coefficient vector in the
power basis 1, z, ..., z^(phi(N)-1) together with one positive common
denominator.  The vector is always fully reduced modulo the cyclotomic
polynomial Phi_N and the fraction is always in lowest terms, so equality is
a tuple comparison.
"""

from __future__ import annotations

import math
import re
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "CyclotomicField",
    "CycNumber",
    "OrderMismatch",
    "NotADivisor",
    "ScalarParseError",
    "field",
    "coerce",
    "roots_of_unity",
    "locate_exact_root",
    "parse_scalar",
    "cyclotomic_polynomial",
]


class OrderMismatch(ValueError):
    pass


class NotADivisor(ValueError):
    pass


class ScalarParseError(ValueError):
    pass


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den monic, coefficients low -> high
    num = list(num)
    dq = len(den) - 1
    q = [0] * max(len(num) - dq, 1)
    for k in range(len(num) - 1, dq - 1, -1):
        c = num[k]
        if c:
            q[k - dq] = c
            for t in range(dq + 1):
                num[k - dq + t] -= c * den[t]
    return q, num[:dq]


_phi_lock = threading.Lock()
_phi_cache: dict[int, tuple[int, ...]] = {1: (-1, 1)}


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (low -> high) of Phi_n, cached per order."""
    if n < 1:
        raise ValueError("order must be positive")
    with _phi_lock:
        hit = _phi_cache.get(n)
    if hit is not None:
        return hit
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    result = tuple(poly)
    with _phi_lock:
        _phi_cache[n] = result
    return result


class CyclotomicField:
    """The field Q(zeta_N); obtain instances through :func:`field`."""

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        self.order = order
        self.phi = cyclotomic_polynomial(order)
        self.degree = len(self.phi) - 1
        d = self.degree
        # z^k reduced mod Phi_N for 0 <= k < max(N, 2d - 1)
        powers = []
        vec = [0] * d
        vec[0] = 1
        for _ in range(max(order, 2 * d - 1)):
            powers.append(tuple(vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for t in range(d):
                    vec[t] -= top * self.phi[t]
        self._powers = powers
        self.zero = CycNumber._raw(self, (0,) * d, 1)
        self.one = CycNumber._raw(self, (1,) + (0,) * (d - 1), 1)

    def __repr__(self) -> str:
        return f"CyclotomicField({self.order})"

    def __reduce__(self):
        return (field, (self.order,))

    def power_vector(self, k: int) -> tuple[int, ...]:
        return self._powers[k % self.order]

    def zeta(self, k: int = 1) -> "CycNumber":
        """zeta_N^k."""
        return CycNumber._raw(self, self._powers[k % self.order], 1)

    def __call__(self, value) -> "CycNumber":
        return self.convert(value)

    def convert(self, value) -> "CycNumber":
        if isinstance(value, CycNumber):
            if value.field is not self:
                raise OrderMismatch(f"order {value.field.order} != {self.order}")
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return CycNumber._raw(self, (value,) + (0,) * (self.degree - 1), 1)
        if isinstance(value, Fraction):
            return CycNumber._make(self, [value.numerator] + [0] * (self.degree - 1), value.denominator)
        if isinstance(value, str):
            return parse_scalar(value, self.order)
        raise TypeError(f"cannot convert {type(value).__name__} to {self!r}")

    def from_coeffs(self, coeffs: Sequence) -> "CycNumber":
        """Element sum_k coeffs[k] z^k; any length, reduced mod Phi_N."""
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for c in fracs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [c.numerator * (den // c.denominator) for c in fracs]
        return CycNumber._make(self, self._reduce(ints), den)

    def _reduce(self, ints: Sequence[int]) -> list[int]:
        d = self.degree
        out = list(ints[:d]) + [0] * max(0, d - len(ints))
        powers = self._powers
        for k in range(d, len(ints)):
            c = ints[k]
            if c:
                row = powers[k % self.order]
                for t in range(d):
                    out[t] += c * row[t]
        return out


@lru_cache(maxsize=None)
def field(order: int) -> CyclotomicField:
    """The (cached, shared) field Q(zeta_order)."""
    return CyclotomicField(order)


def _as_number(a: "CycNumber", other) -> "CycNumber | None":
    if isinstance(other, CycNumber):
        if other.field is not a.field:
            raise OrderMismatch(f"order {a.field.order} != {other.field.order}")
        return other
    if isinstance(other, (int, Fraction)):
        return a.field.convert(other)
    return None


class CycNumber:
    """Immutable exact element of Q(zeta_N)."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, order: int, coeffs: Sequence = ()):
        f = field(order)
        x = f.from_coeffs(coeffs) if coeffs else f.zero
        object.__setattr__(self, "field", f)
        object.__setattr__(self, "num", x.num)
        object.__setattr__(self, "den", x.den)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, f: CyclotomicField, num: tuple, den: int) -> "CycNumber":
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", f)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def _make(cls, f: CyclotomicField, num: Sequence[int], den: int) -> "CycNumber":
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = math.gcd(den, *num)
        if g == 0 or not any(num):
            return f.zero
        if g != 1:
            num = [c // g for c in num]
            den //= g
        return cls._raw(f, tuple(num), den)

    def __setattr__(self, name, value):
        raise AttributeError("CycNumber is immutable")

    def __reduce__(self):
        return (parse_scalar, (str(self), self.field.order))

    @property
    def order(self) -> int:
        return self.field.order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Rational coordinates in the power basis of Q[z]/Phi_N."""
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def to_int(self) -> int:
        q = self.to_fraction()
        if q.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return q.numerator

    # -- arithmetic --------------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, CycNumber):
            return self.field is other.field and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            if self.is_rational():
                h = hash(Fraction(self.num[0], self.den))
            else:
                h = hash((self.field.order, self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def __neg__(self) -> "CycNumber":
        return CycNumber._raw(self.field, tuple(-c for c in self.num), self.den)

    def __pos__(self) -> "CycNumber":
        return self

    def __add__(self, other):
        o = _as_number(self, other)
        if o is None:
            return NotImplemented
        if not any(o.num):
            return self
        if not any(self.num):
            return o
        if self.den == o.den:
            return CycNumber._make(self.field, [a + b for a, b in zip(self.num, o.num)], self.den)
        d1, d2 = self.den, o.den
        return CycNumber._make(self.field, [a * d2 + b * d1 for a, b in zip(self.num, o.num)], d1 * d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_number(self, other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_number(self, other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_number(self, other)
        if o is None:
            return NotImplemented
        f = self.field
        a, b = self.num, o.num
        one = f.one.num
        if o.den == 1 and b == one:
            return self
        if self.den == 1 and a == one:
            return o
        d = f.degree
        if d == 1 or not any(b[1:]):
            c = b[0]
            if not c:
                return f.zero
            return CycNumber._make(f, [x * c for x in a], self.den * o.den)
        if not any(a[1:]):
            c = a[0]
            if not c:
                return f.zero
            return CycNumber._make(f, [x * c for x in b], self.den * o.den)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        powers = f._powers
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = powers[k]
                for t in range(d):
                    out[t] += c * row[t]
        return CycNumber._make(f, out, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNumber":
        if not any(self.num):
            raise ZeroDivisionError("division by zero in Q(zeta_%d)" % self.field.order)
        f = self.field
        d = f.degree
        nz = [k for k, c in enumerate(self.num) if c]
        if len(nz) == 1:
            # c z^k -> z^(N-k) / c
            k = nz[0]
            c = self.num[k]
            pv = f.power_vector(-k)
            return CycNumber._make(f, [x * self.den for x in pv], c)
        # solve (multiplication-by-self) y = 1 over Q
        cols = []
        for s in range(d):
            col = [0] * (d + s)
            for t, c in enumerate(self.num):
                col[t + s] += c
            cols.append(f._reduce(col))
        m = [[Fraction(cols[s][t]) for s in range(d)] + [Fraction(int(t == 0))] for t in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if m[r][c] != 0)
            m[c], m[piv] = m[piv], m[c]
            inv = 1 / m[c][c]
            m[c] = [v * inv for v in m[c]]
            for r in range(d):
                if r != c and m[r][c] != 0:
                    fac = m[r][c]
                    m[r] = [v - fac * w for v, w in zip(m[r], m[c])]
        y = [m[t][d] * self.den for t in range(d)]
        return f.from_coeffs(y)

    def __truediv__(self, other):
        o = _as_number(self, other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _as_number(self, other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> "CycNumber":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- numeric embedding -------------------------------------------------

    def to_complex(self, embedding: int = 1):
        """Image under z -> exp(2 pi i embedding / N) at the current mpmath precision."""
        import mpmath

        w = mpmath.expjpi(mpmath.mpf(2 * embedding) / self.field.order)
        acc = mpmath.mpc(0)
        p = mpmath.mpc(1)
        for c in self.num:
            if c:
                acc += c * p
            p *= w
        return acc / self.den

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.num) - 1, -1, -1):
            c = Fraction(self.num[k], self.den)
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = "z" if k == 1 else f"z^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            terms.append((c < 0, body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] else "") + terms[0][1]
        for neg, body in terms[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"CycNumber({self.field.order}, {str(self)!r})"


_TERM = re.compile(r"([+-])?(\d+(?:/\d+)?)?(\*)?(z(?:\^(\d+))?)?")


def parse_scalar(text: str, order: int) -> CycNumber:
    """Parse the textual scalar grammar, e.g. ``-1/2*z^3 + 2``."""
    f = field(order)
    s = "".join(str(text).split())
    if not s:
        raise ScalarParseError("empty scalar")
    pos = 0
    coeffs: dict[int, Fraction] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, num, star, mono, exp = m.groups()
        if m.end() == pos or (num is None and mono is None):
            raise ScalarParseError(f"bad scalar {text!r} at offset {pos}")
        if sign is None and not first:
            raise ScalarParseError(f"missing operator in {text!r}")
        if star and (num is None or mono is None):
            raise ScalarParseError(f"dangling '*' in {text!r}")
        if num is not None and mono is not None and not star:
            raise ScalarParseError(f"missing '*' in {text!r}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        k = 0 if mono is None else (1 if exp is None else int(exp))
        coeffs[k] = coeffs.get(k, Fraction(0)) + c
        pos = m.end()
        first = False
    top = max(coeffs)
    return f.from_coeffs([coeffs.get(k, 0) for k in range(top + 1)])


def coerce(a: CycNumber, new_order: int) -> CycNumber:
    """Image of ``a`` under the embedding z_N -> z_M^(M/N), M = new_order."""
    n = a.field.order
    if new_order % n:
        raise NotADivisor(f"{n} does not divide {new_order}")
    if new_order == n:
        return a
    g = field(new_order)
    step = new_order // n
    acc = [0] * g.degree
    for k, c in enumerate(a.num):
        if c:
            row = g.power_vector(k * step)
            for t in range(g.degree):
                acc[t] += c * row[t]
    return CycNumber._make(g, acc, a.den)


def roots_of_unity(order: int, m: int) -> list[CycNumber]:
    """All m-th roots of unity in Q(zeta_order), by increasing exponent of z^(order/m)."""
    if m < 1 or order % m:
        raise NotADivisor(f"{m} does not divide {order}")
    f = field(order)
    step = order // m
    return [f.zeta(step * k) for k in range(m)]


# -- univariate polynomials over Q(zeta_N), coefficient lists low -> high ----

def _trim(p: list[CycNumber]) -> list[CycNumber]:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_eval(p: Sequence[CycNumber], t: CycNumber) -> CycNumber:
    acc = t.field.zero
    for c in reversed(p):
        acc = acc * t + c
    return acc


def poly_divmod(a: Sequence[CycNumber], b: Sequence[CycNumber]):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    f = b[-1].field
    if len(a) < len(b):
        return [], a
    inv = b[-1].inverse()
    rem = list(a)
    q = [f.zero] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + len(b) - 1] * inv
        q[k] = c
        if c:
            for t, bc in enumerate(b):
                rem[k + t] = rem[k + t] - c * bc
    return q, _trim(rem[: len(b) - 1])


def poly_gcd(a: Sequence[CycNumber], b: Sequence[CycNumber]) -> list[CycNumber]:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a]


def poly_derivative(p: Sequence[CycNumber]) -> list[CycNumber]:
    return [c * k for k, c in enumerate(p)][1:]


def locate_exact_root(p: Sequence, precision_bits: int = 256, max_denominator: int = 2**64,
                      order: int | None = None) -> list[CycNumber]:
    """Roots of ``p`` lying in Q(zeta_N), verified by exact substitution.

    ``p`` is a coefficient list, lowest degree first.  Candidates come from a
    high-precision complex embedding and an integer-relation search over the
    power basis; only candidates with ``p(r) == 0`` exactly are returned.
    The result is sound but may be incomplete for roots with large
    coordinates.
    """
    import mpmath

    if order is None:
        order = next(c.field.order for c in p if isinstance(c, CycNumber))
    f = field(order)
    poly = _trim([f.convert(c) for c in p])
    if not poly:
        raise ValueError("zero polynomial has every element as a root")
    if len(poly) == 1:
        return []
    sqf = poly_divmod(poly, poly_gcd(poly, poly_derivative(poly)))[0]
    found: list[CycNumber] = []
    with mpmath.workprec(precision_bits):
        coeffs = [c.to_complex() for c in reversed(sqf)]
        try:
            candidates = mpmath.polyroots(coeffs, maxsteps=200, extraprec=precision_bits)
        except mpmath.libmp.NoConvergence:
            return []
        if len(sqf) == 2:
            candidates = [candidates] if not isinstance(candidates, list) else candidates
        basis = [f.zeta(k).to_complex() for k in range(f.degree)]
        weight = mpmath.cbrt(mpmath.pi) + mpmath.e / 7
        # integer relation c0*r + sum c_k z^k = 0 holds for real and imaginary parts at once
        for r in candidates:
            vec = [mpmath.re(x) + weight * mpmath.im(x) for x in [r] + basis]
            try:
                rel = mpmath.pslq(vec, maxcoeff=max_denominator, maxsteps=20000)
            except (ValueError, ZeroDivisionError):
                rel = None
            if not rel or rel[0] == 0:
                continue
            cand = f.from_coeffs([Fraction(-c, rel[0]) for c in rel[1:]])
            if not poly_eval(poly, cand) and cand not in found:
                found.append(cand)
    return found


def sum_numbers(values: Iterable[CycNumber], f: CyclotomicField) -> CycNumber:
    acc = f.zero
    for v in values:
        acc = acc + v
    return acc
