"""Exact arithmetic substrate: rational functions in one variable v (with
q = v**2 by convention) and box-truncated multigraded power series.

Everything here is exact: coefficients are ``fractions.Fraction``, every
rational function is kept in reduced canonical form (gcd 1, monic
denominator), and equality is therefore decidable and structural.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class PoleOrderError(ArithmeticError):
    """Raised when a counting function has a pole of order > 1 at q = 1."""


class BoxMismatchError(ValueError):
    """Raised when combining graded series over different truncation boxes."""


# ---------------------------------------------------------------------------
# dense univariate polynomials over Fraction, ascending coefficients
# ---------------------------------------------------------------------------

def _trim(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Univariate polynomial in v with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((Fraction(c),))

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "Poly":
        return cls((0,) * power + (Fraction(coeff),))

    def degree(self) -> int:
        # degree of the zero polynomial is -1 by convention
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        dlead = other.leading()
        dd = other.degree()
        while len(rem) - 1 >= dd and any(rem):
            rdeg = len(rem) - 1
            while rdeg >= 0 and rem[rdeg] == 0:
                rdeg -= 1
            if rdeg < dd:
                break
            factor = rem[rdeg] / dlead
            quot[rdeg - dd] = factor
            for i, c in enumerate(other.coeffs):
                rem[rdeg - dd + i] -= factor * c
            del rem[rdeg:]
        return Poly(quot), Poly(rem)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        return Poly([c / lead for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1].monic()
        return a.monic()

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*v" if c != 1 else "v")
            else:
                parts.append(f"{c}*v^{i}" if c != 1 else f"v^{i}")
        return " + ".join(parts)


V = Poly.monomial(1)          # the formal variable v
Q = Poly.monomial(2)          # q = v**2
ONE = Poly.const(1)


def q_poly(*coeffs) -> Poly:
    """Polynomial in q = v**2 from ascending q-coefficients."""
    out = []
    for c in coeffs:
        out.append(Fraction(c))
        out.append(Fraction(0))
    return Poly(out[:-1] if out else ())


# ---------------------------------------------------------------------------
# reduced rational functions in v
# ---------------------------------------------------------------------------

class RationalFunc:
    """Quotient of two ``Poly`` in canonical reduced form.

    The denominator is monic and coprime to the numerator, so two equal
    values always have identical representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        if isinstance(num, (int, Fraction)):
            num = Poly.const(num)
        if isinstance(den, (int, Fraction)):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = Poly(), ONE
        else:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead = den.leading()
            if lead != 1:
                num = num * (1 / lead)
                den = den.monic()
        self.num = num
        self.den = den

    @classmethod
    def from_fraction(cls, c) -> "RationalFunc":
        return cls(Poly.const(c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalFunc.from_fraction(other)
        return (isinstance(other, RationalFunc)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _coerce(other)
        return RationalFunc(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        return RationalFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n: int) -> "RationalFunc":
        if n < 0:
            return (RationalFunc(ONE) / self) ** (-n)
        result = RationalFunc(ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at v = {x}")
        return self.num(x) / d

    def is_regular_at(self, x) -> bool:
        return self.den(x) != 0

    def as_fraction(self) -> Fraction:
        """Value of a constant rational function."""
        if self.den.degree() != 0 or self.num.degree() > 0:
            raise ValueError(f"not a constant: {self!r}")
        return self.num(0) / self.den(0)

    def __repr__(self):
        if self.den == ONE:
            return f"({self.num!r})"
        return f"({self.num!r}) / ({self.den!r})"


def _coerce(x) -> RationalFunc:
    if isinstance(x, RationalFunc):
        return x
    if isinstance(x, Poly):
        return RationalFunc(x)
    if isinstance(x, (int, Fraction)):
        return RationalFunc.from_fraction(x)
    raise TypeError(f"cannot coerce {type(x)!r} to RationalFunc")


RF_ZERO = RationalFunc(Poly())
RF_ONE = RationalFunc(ONE)
Q_MINUS_1 = Poly((-1, 0, 1))            # v**2 - 1


def v_power(n: int) -> RationalFunc:
    """v**n for any integer n (negative powers allowed)."""
    if n >= 0:
        return RationalFunc(Poly.monomial(n))
    return RationalFunc(ONE, Poly.monomial(-n))


def polar_limit(f: RationalFunc) -> Fraction:
    """Value of (v**2 - 1) * f at v = -1.

    This realizes the "multiply by (q - 1), let q -> 1 with sign"
    extraction.  A pole of order > 1 at v = -1 means the input did not come
    from a virtual-indecomposable element and is rejected.
    """
    g = f * RationalFunc(Q_MINUS_1)
    if not g.is_regular_at(Fraction(-1)):
        raise PoleOrderError("element not supported on virtual indecomposables")
    return g(Fraction(-1))


def eval_at_q(f: RationalFunc, qval) -> Fraction:
    """Evaluate a rational function of q = v**2 at a rational value of q.

    Requires all odd v-coefficients to vanish (the input must genuinely be
    a function of q); counting functions such as stacky counts are.
    """
    qval = Fraction(qval)

    def as_q(poly: Poly) -> Fraction:
        acc = Fraction(0)
        for i, c in enumerate(poly.coeffs):
            if i % 2:
                if c != 0:
                    raise ValueError("not a function of q: odd v-power present")
            else:
                acc += c * qval ** (i // 2)
        return acc

    den = as_q(f.den)
    if den == 0:
        raise ZeroDivisionError(f"pole at q = {qval}")
    return as_q(f.num) / den


def polar_limit_unsigned(f: RationalFunc) -> Fraction:
    """Value of (v**2 - 1) * f at v = +1 (the unsigned Euler-characteristic
    variant of :func:`polar_limit`)."""
    g = f * RationalFunc(Q_MINUS_1)
    if not g.is_regular_at(Fraction(1)):
        raise PoleOrderError("element not supported on virtual indecomposables")
    return g(Fraction(1))


# ---------------------------------------------------------------------------
# box-truncated multigraded power series
# ---------------------------------------------------------------------------

class GradedSeries:
    """Power series graded by Z^k_{>=0}, truncated to a componentwise box.

    Coefficients may be ``Fraction`` or ``RationalFunc``; all operations are
    exact.  Keys outside the box are silently dropped, which makes the ring
    a genuine truncation of the full power-series ring.
    """

    __slots__ = ("box", "coeffs")

    def __init__(self, box, coeffs: Mapping = ()):
        self.box = tuple(int(b) for b in box)
        if any(b < 0 for b in self.box):
            raise ValueError("box entries must be >= 0")
        clean = {}
        for key, val in dict(coeffs).items():
            key = tuple(int(k) for k in key)
            if len(key) != len(self.box):
                raise ValueError(f"key {key} does not match box rank")
            if any(k < 0 for k in key):
                raise ValueError(f"negative exponent in key {key}")
            if self._inside(key) and not _is_zero_coeff(val):
                clean[key] = val
        self.coeffs = clean

    def _inside(self, key) -> bool:
        return all(k <= b for k, b in zip(key, self.box))

    @classmethod
    def zero(cls, box) -> "GradedSeries":
        return cls(box)

    @classmethod
    def one(cls, box) -> "GradedSeries":
        return cls(box, {(0,) * len(tuple(box)): Fraction(1)})

    @classmethod
    def monomial(cls, box, key, coeff=1) -> "GradedSeries":
        return cls(box, {tuple(key): Fraction(coeff)})

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), Fraction(0))

    def constant_term(self):
        return self[(0,) * len(self.box)]

    def _check_box(self, other: "GradedSeries"):
        if self.box != other.box:
            raise BoxMismatchError(f"box mismatch: {self.box} vs {other.box}")

    def __eq__(self, other) -> bool:
        return (isinstance(other, GradedSeries) and self.box == other.box
                and self.coeffs == other.coeffs)

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        self._check_box(other)
        out = dict(self.coeffs)
        for key, val in other.coeffs.items():
            out[key] = out.get(key, Fraction(0)) + val
        return GradedSeries(self.box, out)

    def __neg__(self) -> "GradedSeries":
        return GradedSeries(self.box, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_box(other)
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                if self._inside(key):
                    out[key] = out.get(key, Fraction(0)) + v1 * v2
        return GradedSeries(self.box, out)

    __rmul__ = __mul__

    def scale(self, c) -> "GradedSeries":
        c = Fraction(c) if isinstance(c, int) else c
        return GradedSeries(self.box, {k: v * c for k, v in self.coeffs.items()})

    def __pow__(self, n: int) -> "GradedSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = GradedSeries.one(self.box)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "GradedSeries":
        c0 = self.constant_term()
        if _is_zero_coeff(c0):
            raise ZeroDivisionError("series with zero constant term has no inverse")
        # (c0 + h)^-1 = c0^-1 * sum (-h/c0)^k, nilpotent h within the box
        inv0 = Fraction(1) / c0 if isinstance(c0, (int, Fraction)) else RF_ONE / c0
        h = self - GradedSeries(self.box, {(0,) * len(self.box): c0})
        result = GradedSeries.one(self.box)
        term = GradedSeries.one(self.box)
        for _ in range(sum(self.box)):
            term = (term * h).scale(-inv0)
            if not term.coeffs:
                break
            result = result + term
        return result.scale(inv0)

    def exp(self) -> "GradedSeries":
        if not _is_zero_coeff(self.constant_term()):
            raise ValueError("series_exp requires constant term 0")
        result = GradedSeries.one(self.box)
        term = GradedSeries.one(self.box)
        for k in range(1, sum(self.box) + 1):
            term = (term * self).scale(Fraction(1, k))
            if not term.coeffs:
                break
            result = result + term
        return result

    def log(self) -> "GradedSeries":
        if self.constant_term() != 1:
            raise ValueError("series_log requires constant term 1")
        u = self - GradedSeries.one(self.box)
        result = GradedSeries.zero(self.box)
        power = GradedSeries.one(self.box)
        for k in range(1, sum(self.box) + 1):
            power = power * u
            if not power.coeffs:
                break
            result = result + power.scale(Fraction((-1) ** (k - 1), k))
        return result

    def items_sorted(self):
        return sorted(self.coeffs.items())

    def __repr__(self):
        if not self.coeffs:
            return "GradedSeries(0)"
        body = " + ".join(f"{v}*x^{k}" for k, v in self.items_sorted())
        return f"GradedSeries({body})"


def _is_zero_coeff(val) -> bool:
    if isinstance(val, RationalFunc):
        return val.is_zero()
    return val == 0


def series_mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    return a * b


def series_exp(a: GradedSeries) -> GradedSeries:
    return a.exp()


def series_log(a: GradedSeries) -> GradedSeries:
    return a.log()


def binomial_series(box, key, coeff, exponent: int) -> GradedSeries:
    """Expansion of (1 + coeff * x^key) ** exponent inside the box.

    ``exponent`` may be any integer; the generalized binomial series is
    finite after truncation.
    """
    key = tuple(int(k) for k in key)
    if all(k == 0 for k in key):
        raise ValueError("binomial_series requires a nonconstant monomial")
    box = tuple(box)
    steps = min((b // k) for b, k in zip(box, key) if k) if any(key) else 0
    out = {(0,) * len(box): Fraction(1)}
    binom = Fraction(1)
    c_pow = Fraction(1)
    for j in range(1, steps + 1):
        binom *= Fraction(exponent - (j - 1), j)
        c_pow *= Fraction(coeff)
        if binom == 0:
            break
        out[tuple(k * j for k in key)] = binom * c_pow
    return GradedSeries(box, out)
