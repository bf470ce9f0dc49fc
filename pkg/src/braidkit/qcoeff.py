"""Exact arithmetic in the field Q(q) of rational functions in one variable.

Polynomials are tuples of Python ints in ascending degree with no trailing
zeros; the zero polynomial is the empty tuple.  A :class:`QRat` holds a
numerator and denominator in lowest terms over Z[q] with a positive leading
denominator coefficient, so structural equality is mathematical equality.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce as _fold
from math import gcd as _igcd
from typing import Iterable, Sequence, Union

QPoly = tuple

__all__ = [
    "QPoly",
    "QRat",
    "PoleError",
    "poly",
    "poly_add",
    "poly_sub",
    "poly_mul",
    "poly_divmod_exact",
    "poly_gcd",
    "poly_eval",
    "qrat_normalize",
    "qrat_arith",
    "eval_q1",
    "q",
    "ZERO",
    "ONE",
]


class PoleError(ArithmeticError):
    """Raised when evaluating a rational function at a pole."""


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------

def poly(coeffs: Iterable[int]) -> QPoly:
    c = [int(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a: QPoly, b: QPoly) -> QPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_neg(a: QPoly) -> QPoly:
    return tuple(-v for v in a)


def poly_sub(a: QPoly, b: QPoly) -> QPoly:
    return poly_add(a, poly_neg(b))


def poly_mul(a: QPoly, b: QPoly) -> QPoly:
    if not a or not b:
        return ()
    if len(a) == 1:
        s = a[0]
        return tuple(s * v for v in b)
    if len(b) == 1:
        s = b[0]
        return tuple(s * v for v in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def poly_scale(a: QPoly, s: int) -> QPoly:
    if s == 0:
        return ()
    return tuple(s * v for v in a)


def content(a: QPoly) -> int:
    if not a:
        return 0
    return _fold(_igcd, a)


def _low_order(a: QPoly) -> int:
    for i, v in enumerate(a):
        if v:
            return i
    return len(a)


def poly_divmod_exact(a: QPoly, b: QPoly) -> QPoly:
    """Quotient ``a / b`` in Z[q]; raises ``ValueError`` if b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return ()
    if len(b) == 1:
        d = b[0]
        if any(v % d for v in a):
            raise ValueError("not divisible")
        return tuple(v // d for v in a)
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    qout = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1 - db, -1, -1):
        c = rem[k + db]
        if c == 0:
            continue
        if c % lead:
            raise ValueError("not divisible")
        t = c // lead
        qout[k] = t
        for j, bv in enumerate(b):
            rem[k + j] -= t * bv
    if any(rem):
        raise ValueError("not divisible")
    return poly(qout)


def _prem(a: list, b: QPoly) -> list:
    # pseudo-remainder of a by b, with content stripped as we go
    db = len(b) - 1
    lead = b[-1]
    r = list(a)
    while r and r[-1] == 0:
        r.pop()
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [lead * v for v in r]
        for j, bv in enumerate(b):
            r[shift + j] -= c * bv
        while r and r[-1] == 0:
            r.pop()
        if r:
            g = _fold(_igcd, r)
            if g > 1:
                r = [v // g for v in r]
    return r


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Greatest common divisor in Z[q], normalized to positive leading coefficient."""
    if not a:
        return _positive(b)
    if not b:
        return _positive(a)
    ca, cb = content(a), content(b)
    cg = _igcd(ca, cb)
    # strip common powers of q cheaply
    la, lb = _low_order(a), _low_order(b)
    shift = min(la, lb)
    pa = tuple(v // ca for v in a[la:])
    pb = tuple(v // cb for v in b[lb:])
    if len(pa) == 1 or len(pb) == 1:
        g: QPoly = (1,)
    else:
        if len(pa) < len(pb):
            pa, pb = pb, pa
        x, y = list(pa), pb
        while True:
            r = _prem(x, y)
            if not r:
                g = y
                break
            if len(r) == 1:
                g = (1,)
                break
            x, y = list(y), tuple(r)
        g = _positive(tuple(v // content(g) for v in g))
    return (0,) * shift + tuple(cg * v for v in g)


def _positive(a: QPoly) -> QPoly:
    if a and a[-1] < 0:
        return poly_neg(a)
    return a


def poly_eval(a: QPoly, x) -> object:
    acc = 0
    for v in reversed(a):
        acc = acc * x + v
    return acc


def poly_str(a: QPoly, var: str = "q") -> str:
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        m = abs(c)
        if k == 0:
            body = str(m)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if m == 1 else f"{m}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

Coercible = Union["QRat", int, Fraction]


class QRat:
    """An element of Q(q) in canonical form.  Immutable and hashable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Sequence[int] = (), den: Sequence[int] = (1,), *, _canonical: bool = False):
        if _canonical:
            self.num = num
            self.den = den
        else:
            n, d = _normalize(poly(num), poly(den))
            self.num = n
            self.den = d
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def _make(cls, num: QPoly, den: QPoly) -> "QRat":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def from_int(cls, v: int) -> "QRat":
        return cls._make(poly((v,)), (1,))

    @classmethod
    def from_fraction(cls, v: Fraction) -> "QRat":
        return cls((v.numerator,), (v.denominator,))

    @classmethod
    def coerce(cls, v: Coercible) -> "QRat":
        if isinstance(v, QRat):
            return v
        if isinstance(v, int):
            return cls.from_int(v)
        if isinstance(v, Fraction):
            return cls.from_fraction(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to QRat")

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "QRat":
        """``c * q**k`` for any integer k."""
        if c == 0:
            return ZERO
        if k >= 0:
            return cls._make((0,) * k + (c,), (1,))
        return cls._make((c,), (0,) * (-k) + (1,))

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_laurent(self) -> bool:
        """True if the denominator is a power of q."""
        return len(self.den) == 1 or (self.den[-1] == 1 and not any(self.den[:-1]))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: Coercible) -> "QRat":
        if not isinstance(other, QRat):
            if isinstance(other, int) and other == 0:
                return self
            other = QRat.coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            num = poly_add(self.num, other.num)
            if not num:
                return ZERO
            if self.den == (1,):
                return QRat._make(num, (1,))
            return QRat._make(*_normalize(num, self.den))
        num = poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den))
        if not num:
            return ZERO
        return QRat._make(*_normalize(num, poly_mul(self.den, other.den)))

    __radd__ = __add__

    def __neg__(self) -> "QRat":
        return QRat._make(poly_neg(self.num), self.den)

    def __sub__(self, other: Coercible) -> "QRat":
        return self + (-QRat.coerce(other))

    def __rsub__(self, other: Coercible) -> "QRat":
        return QRat.coerce(other) + (-self)

    def __mul__(self, other: Coercible) -> "QRat":
        if not isinstance(other, QRat):
            if isinstance(other, int):
                if other == 0 or not self.num:
                    return ZERO
                if other == 1:
                    return self
                return QRat._make(*_normalize(poly_scale(self.num, other), self.den))
            other = QRat.coerce(other)
        if not self.num or not other.num:
            return ZERO
        if self.den == (1,) and other.den == (1,):
            return QRat._make(poly_mul(self.num, other.num), (1,))
        return QRat._make(*_normalize(poly_mul(self.num, other.num), poly_mul(self.den, other.den)))

    __rmul__ = __mul__

    def inverse(self) -> "QRat":
        if not self.num:
            raise ZeroDivisionError("division by zero element of Q(q)")
        return QRat._make(*_normalize(self.den, self.num))

    def __truediv__(self, other: Coercible) -> "QRat":
        return self * QRat.coerce(other).inverse()

    def __rtruediv__(self, other: Coercible) -> "QRat":
        return QRat.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "QRat":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, QRat):
            return self.num == other.num and self.den == other.den
        if isinstance(other, int):
            return self.den == (1,) and self.num == poly((other,))
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # evaluation -----------------------------------------------------------
    def evaluate(self, x) -> object:
        """Value at ``q = x``; exact when x is int or Fraction."""
        d = poly_eval(self.den, x)
        if d == 0:
            raise PoleError(f"pole at q={x}")
        n = poly_eval(self.num, x)
        if isinstance(n, int) and isinstance(d, int):
            return Fraction(n, d)
        return n / d

    def divisible_by_braided_unit(self) -> bool:
        """Whether the numerator is divisible by ``q**2 - 1``.

        That is the condition for ``self / (q - 1/q)`` to introduce no new
        pole at ``q = +1`` or ``q = -1``.
        """
        if not self.num:
            return True
        return poly_eval(self.num, 1) == 0 and poly_eval(self.num, -1) == 0

    # serialization --------------------------------------------------------
    def to_json(self) -> dict:
        return {"num": list(self.num) or [0], "den": list(self.den)}

    @classmethod
    def from_json(cls, obj) -> "QRat":
        if isinstance(obj, int):
            return cls.from_int(obj)
        return cls(obj["num"], obj.get("den", [1]))

    def __repr__(self) -> str:
        return f"QRat({list(self.num) or [0]}, {list(self.den)})"

    def __str__(self) -> str:
        return self.render()

    def render(self) -> str:
        """Human-readable form with Laurent monomials written as ``q^-k``."""
        if not self.num:
            return "0"
        if self.den == (1,):
            return poly_str(self.num)
        if self.is_laurent():
            k = len(self.den) - 1
            c = self.den[-1]
            terms = []
            for i, v in enumerate(self.num):
                if v:
                    terms.append((i - k, v))
            if c == 1:
                return _laurent_str(terms)
        return f"({poly_str(self.num)})/({poly_str(self.den)})"


def _laurent_str(terms: list) -> str:
    parts = []
    for k, c in sorted(terms, key=lambda t: -t[0]):
        m = abs(c)
        if k == 0:
            body = str(m)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if m == 1 else f"{m}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


def _normalize(num: QPoly, den: QPoly) -> tuple:
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    if not num:
        return (), (1,)
    if len(den) == 1:
        d = den[0]
        g = _igcd(content(num), d)
        if d < 0:
            g = -g
        if g == 1:
            return num, den
        return tuple(v // g for v in num), (d // g,)
    g = poly_gcd(num, den)
    if g != (1,):
        num = poly_divmod_exact(num, g)
        den = poly_divmod_exact(den, g)
    if den[-1] < 0:
        num = poly_neg(num)
        den = poly_neg(den)
    return num, den


def qrat_normalize(num: Sequence[int], den: Sequence[int]) -> QRat:
    """Canonical QRat for ``num / den``; idempotent on canonical inputs."""
    return QRat(num, den)


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def qrat_arith(a: QRat, b: QRat, op: str) -> QRat:
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b)


def eval_q1(a: QRat) -> Fraction:
    """Exact value at ``q = 1`` of the canonical form."""
    d = poly_eval(a.den, 1)
    if d == 0:
        raise PoleError("pole at q=1")
    return Fraction(poly_eval(a.num, 1), d)


ZERO = QRat._make((), (1,))
ONE = QRat._make((1,), (1,))
q = QRat._make((0, 1), (1,))
QINV = QRat._make((1,), (0, 1))
#: ``q - q^{-1}``, the denominator of every R-commutator
QDIFF = q - QINV


def as_qrat(v: Coercible) -> QRat:
    return QRat.coerce(v)
