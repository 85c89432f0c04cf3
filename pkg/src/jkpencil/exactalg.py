"""Exact field arithmetic over Q and F_p, plus the small polynomial toolkit
needed to pull eigenvalues out of a characteristic polynomial.

Field elements are stored "raw" inside matrices and polynomials
(:class:`fractions.Fraction` over Q, ``int`` in ``[0, p)`` over F_p); the
:class:`Scalar` wrapper pairs a raw value with its field for the public API.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    CharTwoField,
    DivisionByZero,
    DuplicateAbscissa,
    EmptyInput,
    FieldTooLargeForSearch,
    InvalidField,
    MixedFields,
    NonSquare,
    ParseError,
    ZeroPolynomial,
)

#: exhaustive root search over F_p is allowed up to this modulus
MAX_SEARCH_PRIME = 65536

NEG_INF = -math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
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


@dataclass(frozen=True)
class Field:
    """Q when ``p`` is None, otherwise the prime field F_p (p odd)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is None:
            return
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InvalidField(f"modulus {self.p!r} is not a prime")
        if self.p == 2:
            raise CharTwoField("characteristic 2 is not supported")

    # -- construction -----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def size(self) -> int | None:
        return self.p

    def __str__(self) -> str:
        return "Q" if self.p is None else f"F_{self.p}"

    def elem(self, x) -> Fraction | int:
        """Coerce an int, Fraction, string or Scalar into a raw element."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise MixedFields(f"scalar over {x.field} used in {self}")
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise DivisionByZero(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def scalar(self, x) -> "Scalar":
        return Scalar(self, self.elem(x))

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    # -- arithmetic on raw values -----------------------------------------

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else a * b % self.p

    def neg(self, a):
        return -a if self.p is None else -a % self.p

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        return 1 / a if self.p is None else pow(a, -1, self.p)

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        return a / b if self.p is None else a * pow(b, -1, self.p) % self.p

    # -- text format --------------------------------------------------------

    def parse(self, text: str):
        s = str(text).strip()
        try:
            if self.p is None:
                if "/" in s:
                    num, den = s.split("/")
                    num, den = int(num), int(den)
                    if den <= 0:
                        raise ParseError(f"denominator must be positive in {text!r}")
                    return Fraction(num, den)
                return Fraction(int(s))
            return int(s) % self.p
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"cannot parse scalar {text!r} over {self}") from None

    def fmt(self, a) -> str:
        if self.p is None:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def sort_key(self, a):
        if self.p is None:
            return (a.numerator, a.denominator)
        return (a,)

    # -- enumeration / sampling -------------------------------------------

    def points(self, count: int) -> list:
        """The first ``count`` elements 0, 1, 2, ... in field order."""
        if self.p is not None and count > self.p:
            raise ValueError(f"{self} has only {self.p} elements")
        return [self.elem(i) for i in range(count)]

    def random(self, rng: random.Random, bound: int = 3):
        if self.p is None:
            return Fraction(rng.randint(-bound, bound))
        return rng.randrange(self.p)


Q = Field()


def GF(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class Scalar:
    field: Field
    value: object

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise MixedFields(f"cannot combine {self.field} and {other.field}")
            return other.value
        return self.field.elem(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return self.field.fmt(self.value)

    def __repr__(self):
        return f"Scalar({self.field}, {self})"

    def sort_key(self):
        return self.field.sort_key(self.value)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    if a.field != b.field:
        raise MixedFields(f"cannot combine {a.field} and {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable = ()):
        cs = [field.elem(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field, cs):
        p = cls.__new__(cls)
        cs = list(cs)
        while cs and not cs[-1]:
            cs.pop()
        p.field = field
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def monomial(cls, field: Field, deg: int = 1) -> "Poly":
        return cls._raw(field, [field.zero] * deg + [field.one])

    @classmethod
    def from_roots(cls, field: Field, roots) -> "Poly":
        out = cls._raw(field, [field.one])
        for r in roots:
            out = out * cls._raw(field, [field.neg(field.elem(r)), field.one])
        return out

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    @property
    def coefficients(self) -> list[Scalar]:
        return [Scalar(self.field, c) for c in self.coeffs]

    def _check(self, other: "Poly"):
        if other.field != self.field:
            raise MixedFields(f"cannot combine polynomials over {self.field} and {other.field}")

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly._raw(f, [f.add(a[i] if i < len(a) else f.zero, b[i] if i < len(b) else f.zero)
                             for i in range(n)])

    def __neg__(self):
        return Poly._raw(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        if not self.coeffs or not other.coeffs:
            return Poly._raw(f, [])
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly._raw(f, out)

    def __pow__(self, k: int) -> "Poly":
        out = Poly._raw(self.field, [self.field.one])
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "Poly":
        f = self.field
        return Poly._raw(f, [f.mul(c, a) for a in self.coeffs])

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no monic associate")
        return self.scale(self.field.inv(self.lead))

    def __divmod__(self, other: "Poly"):
        self._check(other)
        if not other.coeffs:
            raise DivisionByZero("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        d = len(other.coeffs) - 1
        inv_lead = f.inv(other.lead)
        quot = [f.zero] * max(len(rem) - d, 0)
        for k in range(len(rem) - d - 1, -1, -1):
            c = f.mul(rem[k + d], inv_lead)
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = f.sub(rem[k + j], f.mul(c, b))
        return Poly._raw(f, quot), Poly._raw(f, rem[:d])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "Poly":
        f = self.field
        return Poly._raw(f, [f.mul(f.elem(i), c) for i, c in enumerate(self.coeffs)][1:])

    def eval_raw(self, x):
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def __call__(self, x) -> Scalar:
        return poly_eval(self, x)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        f = self.field
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            s = f.fmt(c)
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and s == "1":
                s = mono
            elif mono and s == "-1":
                s = "-" + mono
            elif mono:
                s = f"{s}*{mono}"
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.field}, {self})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def poly_eval(p: Poly, x) -> Scalar:
    if isinstance(x, Scalar) and x.field != p.field:
        raise MixedFields(f"evaluating a polynomial over {p.field} at a scalar over {x.field}")
    return Scalar(p.field, p.eval_raw(p.field.elem(x)))


def poly_interpolate(points: Sequence[tuple]) -> Poly:
    """Lagrange interpolation through ``(x, y)`` pairs of Scalars."""
    if not points:
        raise EmptyInput("no interpolation points")
    f = points[0][0].field if isinstance(points[0][0], Scalar) else Q
    xs = [f.elem(x) for x, _ in points]
    ys = [f.elem(y) for _, y in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("interpolation abscissae must be distinct")
    result = Poly._raw(f, [])
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        basis = Poly._raw(f, [f.one])
        denom = f.one
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = basis * Poly._raw(f, [f.neg(xj), f.one])
            denom = f.mul(denom, f.sub(xi, xj))
        result = result + basis.scale(f.div(yi, denom))
    return result


def poly_sqrt(p: Poly) -> Poly | None:
    """Square root of a polynomial with square leading coefficient 1, or None."""
    if p.is_zero:
        return p
    if p.degree % 2 or p.lead != p.field.one:
        return None
    f = p.field
    n = p.degree // 2
    # determine coefficients from the top down
    r = [f.zero] * (n + 1)
    r[n] = f.one
    two = f.elem(2)
    for k in range(n - 1, -1, -1):
        # coefficient of t^(n + k) in r^2
        acc = f.zero
        for i in range(k + 1, n + 1):
            j = n + k - i
            if k < j <= n:
                acc = f.add(acc, f.mul(r[i], r[j]))
        r[k] = f.div(f.sub(p.coeffs[n + k], acc), two)
    root = Poly._raw(f, r)
    return root if root * root == p else None


def char_poly(M) -> Poly:
    """det(tI - M) by the division-free Berkowitz recurrence."""
    if M.rows != M.cols:
        raise NonSquare(f"char_poly needs a square matrix, got {M.rows}x{M.cols}")
    f = M.field
    n = M.rows
    a = M.data
    # vector of coefficients, highest degree first
    vec = [f.one]
    for r in range(n):
        # leading (r+1)x(r+1) block: R = a[r][:r], C = a[:r][r]
        col = [f.one, f.neg(a[r][r])]
        if r:
            C = [a[i][r] for i in range(r)]
            R = a[r][:r]
            w = C
            for _ in range(r):
                s = f.zero
                for x, y in zip(R, w):
                    s = f.add(s, f.mul(x, y))
                col.append(f.neg(s))
                w = [
                    _dot(f, a[i][:r], w) for i in range(r)
                ]
        # Toeplitz (r+2)x(r+1) lower triangular times vec
        new = []
        for i in range(r + 2):
            s = f.zero
            for j in range(max(0, i - len(col) + 1), min(i, r) + 1):
                s = f.add(s, f.mul(col[i - j], vec[j]))
            new.append(s)
        vec = new
    return Poly._raw(f, reversed(vec))


def _dot(f, xs, ys):
    s = f.zero
    for x, y in zip(xs, ys):
        if x and y:
            s = f.add(s, f.mul(x, y))
    return s


def _divisors(n: int) -> list[int]:
    n = abs(n)
    primes: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            primes[d] = primes.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        primes[n] = primes.get(n, 0) + 1
    divs = [1]
    for q, e in primes.items():
        divs = [x * q**k for x in divs for k in range(e + 1)]
    return sorted(divs)


def _candidate_roots(p: Poly) -> list:
    f = p.field
    if f.p is not None:
        if f.p > MAX_SEARCH_PRIME:
            raise FieldTooLargeForSearch(
                f"exhaustive root search over F_{f.p} exceeds bound {MAX_SEARCH_PRIME}")
        return [x for x in range(f.p) if not p.eval_raw(x)]
    # square-free part keeps the divisor search small
    g = poly_gcd(p, p.derivative())
    sf = p // g if g.degree > 0 else p
    lcm = 1
    for c in sf.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in sf.coeffs]
    out = []
    if ints[0] == 0:
        out.append(Fraction(0))
        k = next(i for i, c in enumerate(ints) if c)
        ints = ints[k:]
    if len(ints) > 1:
        for q in _divisors(ints[-1]):
            for num in _divisors(ints[0]):
                for cand in (Fraction(num, q), Fraction(-num, q)):
                    if cand not in out and not sf.eval_raw(cand):
                        out.append(cand)
    return out


def roots_in_field(p: Poly):
    """Strip every linear factor of ``p`` that exists over its field.

    Returns ``(roots, remainder)`` where ``roots`` is a list of
    ``(Scalar, multiplicity)`` in canonical order and
    ``p == remainder * prod((t - r)**m)``.
    """
    if p.is_zero:
        raise ZeroPolynomial("roots of the zero polynomial are undefined")
    f = p.field
    roots = []
    rem = p
    for r in sorted(_candidate_roots(p), key=f.sort_key):
        lin = Poly._raw(f, [f.neg(r), f.one])
        m = 0
        while rem.degree >= 1:
            q, s = divmod(rem, lin)
            if not s.is_zero:
                break
            rem = q
            m += 1
        if m:
            roots.append((Scalar(f, r), m))
    return roots, rem
