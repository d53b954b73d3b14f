"""Exact scalar arithmetic: rationals and the rational-function field Q(t).

Two scalar variants exist and they never mix inside one computation:
plain arbitrary-precision rationals (backed by fractions.Fraction), and
rational functions in a single parameter t with rational coefficients.
Both are kept in a unique canonical form -- reduced fractions, and for
rational functions a gcd-reduced pair with monic denominator -- so
structural equality is semantic equality.

Univariate polynomials are dense coefficient tuples, lowest degree
first, with no trailing zeros.  The polynomial gcd runs a primitive
pseudo-remainder sequence over the integers to keep coefficient growth
tame.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd


class ScalarError(ArithmeticError):
    pass


class DivisionByZero(ScalarError):
    pass


class MixedScalarVariants(ScalarError):
    pass


class ZeroDenominator(ScalarError):
    pass


class PoleAtEvaluationPoint(ScalarError):
    pass


class ScalarParseError(ScalarError):
    pass


# ---------------------------------------------------------------------------
# univariate polynomials over Q


class UniPoly:
    """Dense univariate polynomial over Q; coeffs[i] multiplies t**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((Fraction(c),))

    @classmethod
    def t(cls) -> "UniPoly":
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (Fraction(1),)

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise DivisionByZero("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        # convolve over content-stripped ints; Fractions only reappear in
        # the single scale pass at the end
        ai, an, ad = _to_int_parts(self)
        bi, bn, bd = _to_int_parts(other)
        out = [0] * (len(ai) + len(bi) - 1)
        for i, ca in enumerate(ai):
            if ca:
                for j, cb in enumerate(bi):
                    if cb:
                        out[i + j] += ca * cb
        scale = Fraction(an * bn, ad * bd)
        if scale == 1:
            return UniPoly([Fraction(c) for c in out])
        return UniPoly([scale * c for c in out])

    def scale(self, c: Fraction) -> "UniPoly":
        return UniPoly(tuple(x * c for x in self.coeffs))

    def __divmod__(self, other):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        d, lead = other.degree, other.leading()
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c:
                q = c / lead
                quo[k - d] = q
                for i, oc in enumerate(other.coeffs):
                    rem[k - d + i] -= q * oc
        return UniPoly(quo), UniPoly(rem)

    def evaluate(self, t0: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t0 + c
        return acc

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading())

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{i}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "UniPoly":
        coeffs: dict[int, Fraction] = {}
        for coef, exp in _poly_terms(text):
            coeffs[exp] = coeffs.get(exp, Fraction(0)) + coef
        if not coeffs:
            return cls()
        out = [Fraction(0)] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c
        return cls(out)

    def __repr__(self):
        return f"UniPoly({self.render()})"


def _poly_terms(text: str):
    """Yield (coefficient, exponent) pairs from 'c0 + c1*t + c3*t^3' text."""
    s = text.strip()
    if not s:
        raise ScalarParseError("empty polynomial")
    # normalize 'a - b' into 'a + -b' without touching exponents
    s = s.replace("- ", "+ -").replace("+-", "+ -")
    for raw in s.split("+"):
        term = raw.strip()
        if not term:
            continue
        sign = Fraction(1)
        while term.startswith("-"):
            sign = -sign
            term = term[1:].strip()
        if not term:
            raise ScalarParseError(f"dangling sign in {text!r}")
        coef, exp = Fraction(1), 0
        pieces = [p.strip() for p in term.split("*")]
        saw_t = False
        for p in pieces:
            if p.startswith("t"):
                saw_t = True
                if p == "t":
                    exp += 1
                elif p.startswith("t^"):
                    exp += int(p[2:])
                else:
                    raise ScalarParseError(f"bad factor {p!r} in {text!r}")
            else:
                try:
                    coef *= Fraction(p)
                except ValueError as e:
                    raise ScalarParseError(f"bad coefficient {p!r} in {text!r}") from e
        if not saw_t and len(pieces) > 1 and any(not p for p in pieces):
            raise ScalarParseError(f"bad term {term!r}")
        yield sign * coef, exp


def _int_primitive(cs: list[int]) -> list[int]:
    g = 0
    for c in cs:
        g = _igcd(g, abs(c))
        if g == 1:
            break
    if g > 1:
        cs = [c // g for c in cs]
    if cs and cs[-1] < 0:
        cs = [-c for c in cs]
    return cs


def _to_int_parts(p: UniPoly) -> tuple[list[int], int, int]:
    """Split p as (num/den) * primitive int poly; returns (coeffs, num, den)."""
    den = 1
    for c in p.coeffs:
        d = c.denominator
        den = den * d // _igcd(den, d)
    cs = [c.numerator * (den // c.denominator) for c in p.coeffs]
    num = 0
    for c in cs:
        num = _igcd(num, c)
        if num == 1:
            break
    if num > 1:
        cs = [c // num for c in cs]
    else:
        num = 1
    if cs and cs[-1] < 0:
        cs = [-c for c in cs]
        num = -num
    return cs, num, den


def _to_int_poly(p: UniPoly) -> list[int]:
    return _to_int_parts(p)[0]


def _int_prem(u: list[int], v: list[int]) -> list[int]:
    """Exact pseudo-remainder lc(v)**(deg u - deg v + 1) * u mod v."""
    dv, lv = len(v) - 1, v[-1]
    r = list(u)
    scales = 0
    for k in range(len(u) - 1 - dv, -1, -1):
        c = r[dv + k]
        if not c:
            continue
        if lv != 1:
            r = [lv * x for x in r]
            scales += 1
        for i, vc in enumerate(v):
            r[i + k] -= c * vc
    del r[dv:]
    while r and r[-1] == 0:
        r.pop()
    missing = len(u) - dv - scales
    if lv != 1 and missing and r:
        m = lv ** missing
        r = [x * m for x in r]
    return r


def _int_poly_gcd(u: list[int], v: list[int]) -> list[int]:
    """Gcd of nonzero primitive int polys, subresultant remainder sequence.

    The g*h**d divisors are exact, so coefficients stay determinant-sized
    without a content gcd at every step.
    """
    if len(u) < len(v):
        u, v = v, u
    if len(v) == 1:
        return [1]
    g = h = 1
    while True:
        d = len(u) - len(v)
        r = _int_prem(u, v)
        if not r:
            return _int_primitive(list(v))
        if len(r) == 1:
            return [1]
        div = g * h**d
        u, v = v, [c // div for c in r]
        g = u[-1]
        if d == 1:
            h = g
        elif d > 1:
            h = g**d // h ** (d - 1)


def _int_div_exact(u: list[int], v: list[int]):
    """Quotient of int polys when the division is exact; None if it is not."""
    dv, lv = len(v) - 1, v[-1]
    if len(u) < len(v):
        return None
    rem = list(u)
    quo = [0] * (len(u) - dv)
    for k in range(len(u) - 1 - dv, -1, -1):
        c = rem[dv + k]
        if c:
            q, s = divmod(c, lv)
            if s:
                return None
            quo[k] = q
            for i, vc in enumerate(v):
                rem[i + k] -= q * vc
    if any(rem[:dv]):
        return None
    return quo


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd via a primitive pseudo-remainder sequence."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    g = _int_poly_gcd(_to_int_poly(a), _to_int_poly(b))
    lead = g[-1]
    if lead == 1:
        return UniPoly([Fraction(c) for c in g])
    return UniPoly([Fraction(c, lead) for c in g])


def _poly_div_exact(p: UniPoly, g: UniPoly) -> UniPoly:
    """p / g for a known-exact division, working over Z where possible."""
    if g.is_one():
        return p
    pc, pn, pd = _to_int_parts(p)
    gc, gn, gd = _to_int_parts(g)
    q = _int_div_exact(pc, gc)
    if q is None:
        quo, _ = divmod(p, g)
        return quo
    scale = Fraction(pn * gd, pd * gn)
    if scale == 1:
        return UniPoly([Fraction(c) for c in q])
    return UniPoly([scale * c for c in q])


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Quotient of UniPolys, gcd-reduced, denominator monic and nonzero."""

    __slots__ = ("numer", "denom")

    def __init__(self, numer: UniPoly, denom: UniPoly = None):
        if denom is None:
            denom = UniPoly.constant(1)
        if denom.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if numer.is_zero():
            numer, denom = UniPoly(), UniPoly.constant(1)
        elif denom.degree == 0:
            d = denom.coeffs[0]
            if d != 1:
                numer = numer.scale(1 / d)
            denom = UniPoly.constant(1)
        else:
            nc, nn, nd = _to_int_parts(numer)
            dc, dn, dd = _to_int_parts(denom)
            g = _int_poly_gcd(nc, dc)
            if len(g) > 1:
                nc = _int_div_exact(nc, g)
                dc = _int_div_exact(dc, g)
            lead = dc[-1]
            scale = Fraction(nn * dd, nd * dn * lead)
            numer = UniPoly([scale * c for c in nc])
            if len(dc) == 1:
                denom = UniPoly.constant(1)
            elif lead == 1:
                denom = UniPoly([Fraction(c) for c in dc])
            else:
                denom = UniPoly([Fraction(c, lead) for c in dc])
        self.numer = numer
        self.denom = denom

    @classmethod
    def _reduced(cls, numer: UniPoly, denom: UniPoly) -> "RationalFunction":
        """Build from an already-coprime numer/denom pair, skipping the gcd."""
        self = object.__new__(cls)
        if numer.is_zero():
            numer, denom = UniPoly(), UniPoly.constant(1)
        else:
            lead = denom.leading()
            if lead != 1:
                numer = numer.scale(1 / lead)
                denom = denom.scale(1 / lead)
        self.numer = numer
        self.denom = denom
        return self

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(UniPoly.constant(c))

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(UniPoly.t())

    def is_zero(self) -> bool:
        return self.numer.is_zero()

    def is_one(self) -> bool:
        return self.numer.is_one() and self.denom.is_one()

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.numer == other.numer
            and self.denom == other.denom
        )

    def __hash__(self):
        return hash((self.numer, self.denom))

    def __neg__(self):
        return RationalFunction(-self.numer, self.denom)

    def __add__(self, other):
        # both operands are reduced, so only gcd(numer, g) can cancel below
        g = poly_gcd(self.denom, other.denom)
        if g.degree == 0:
            numer = self.numer * other.denom + other.numer * self.denom
            return RationalFunction._reduced(numer, self.denom * other.denom)
        d1 = _poly_div_exact(self.denom, g)
        d2 = _poly_div_exact(other.denom, g)
        numer = self.numer * d2 + other.numer * d1
        g2 = poly_gcd(numer, g)
        if g2.degree > 0:
            numer = _poly_div_exact(numer, g2)
            denom = d1 * _poly_div_exact(other.denom, g2)
        else:
            denom = d1 * other.denom
        return RationalFunction._reduced(numer, denom)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.numer.is_zero() or other.numer.is_zero():
            return RationalFunction(UniPoly())
        # cross-cancel; reduced inputs make the products reduced again
        g1 = poly_gcd(self.numer, other.denom)
        g2 = poly_gcd(other.numer, self.denom)
        n1, d2 = self.numer, other.denom
        n2, d1 = other.numer, self.denom
        if g1.degree > 0:
            n1 = _poly_div_exact(n1, g1)
            d2 = _poly_div_exact(d2, g1)
        if g2.degree > 0:
            n2 = _poly_div_exact(n2, g2)
            d1 = _poly_div_exact(d1, g2)
        return RationalFunction._reduced(n1 * n2, d1 * d2)

    def __truediv__(self, other):
        if other.is_zero():
            raise DivisionByZero("rational-function division by zero")
        return self * RationalFunction._reduced(other.denom, other.numer)

    def evaluate(self, t0: Fraction) -> Fraction:
        d = self.denom.evaluate(t0)
        if d == 0:
            raise PoleAtEvaluationPoint(f"pole at t = {t0}")
        return self.numer.evaluate(t0) / d

    def render(self) -> str:
        if self.denom.is_one():
            return f"({self.numer.render()})"
        return f"({self.numer.render()})/({self.denom.render()})"

    @classmethod
    def parse(cls, text: str) -> "RationalFunction":
        s = text.strip()
        if s.startswith("("):
            depth, split = 0, None
            for i, ch in enumerate(s):
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                elif ch == "/" and depth == 0:
                    split = i
                    break
            if split is None:
                if not s.endswith(")"):
                    raise ScalarParseError(f"unbalanced parens in {text!r}")
                return cls(UniPoly.parse(s[1:-1]))
            num, den = s[:split].strip(), s[split + 1 :].strip()
            if not (num.startswith("(") and num.endswith(")")):
                raise ScalarParseError(f"bad numerator in {text!r}")
            if not (den.startswith("(") and den.endswith(")")):
                raise ScalarParseError(f"bad denominator in {text!r}")
            return cls(UniPoly.parse(num[1:-1]), UniPoly.parse(den[1:-1]))
        return cls(UniPoly.parse(s))

    def __repr__(self):
        return f"RationalFunction({self.render()})"


# ---------------------------------------------------------------------------
# the tagged scalar union

RAT = "rat"
RATFUN = "ratfun"


class Scalar:
    """Tagged union of the two scalar variants.

    Arithmetic between different variants raises MixedScalarVariants;
    ints and Fractions are lifted into the variant of the other operand.
    """

    __slots__ = ("kind", "value")

    def __init__(self, kind: str, value):
        self.kind = kind
        self.value = value

    @classmethod
    def rational(cls, n, d=1) -> "Scalar":
        return cls(RAT, Fraction(n, d))

    @classmethod
    def ratfun(cls, rf: RationalFunction) -> "Scalar":
        return cls(RATFUN, rf)

    @classmethod
    def t(cls) -> "Scalar":
        return cls(RATFUN, RationalFunction.t())

    @staticmethod
    def zero(kind: str) -> "Scalar":
        return Scalar.of(kind, 0)

    @staticmethod
    def one(kind: str) -> "Scalar":
        return Scalar.of(kind, 1)

    @staticmethod
    def of(kind: str, c) -> "Scalar":
        """Lift an int or Fraction into the given variant."""
        if kind == RAT:
            return Scalar(RAT, Fraction(c))
        return Scalar(RATFUN, RationalFunction.constant(c))

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.kind != self.kind:
                raise MixedScalarVariants(
                    f"cannot combine {self.kind} with {other.kind}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.of(self.kind, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.value == 0 if self.kind == RAT else self.value.is_zero()

    def is_one(self) -> bool:
        return self.value == 1 if self.kind == RAT else self.value.is_one()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.of(self.kind, other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.kind == other.kind and self.value == other.value

    def __hash__(self):
        return hash((self.kind, self.value))

    def __neg__(self):
        return Scalar(self.kind, -self.value)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.kind, self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.kind, self.value - o.value)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.kind, o.value - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.kind, self.value * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZero("scalar division by zero")
        if self.kind == RAT:
            return Scalar(RAT, self.value / o.value)
        return Scalar(RATFUN, self.value / o.value)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def inverse(self) -> "Scalar":
        return Scalar.one(self.kind) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar.one(self.kind)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def render(self) -> str:
        return str(self.value) if self.kind == RAT else self.value.render()

    def __repr__(self):
        return f"Scalar({self.kind}, {self.render()})"


def field_arithmetic(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Apply one of '+', '-', '*', '/' with canonical output."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def canonicalize(s: Scalar) -> Scalar:
    """Re-normalize a scalar; idempotent on anything this module built."""
    if s.kind == RAT:
        return Scalar(RAT, Fraction(s.value))
    return Scalar(RATFUN, RationalFunction(s.value.numer, s.value.denom))


def specialize(s: Scalar, t0) -> Scalar:
    """Evaluate a rational-function scalar at t = t0, landing in Q."""
    if s.kind != RATFUN:
        raise ValueError("specialize expects the rational-function variant")
    return Scalar(RAT, s.value.evaluate(Fraction(t0)))


def parse_scalar(text: str, kind: str) -> Scalar:
    s = text.strip()
    if kind == RAT:
        try:
            return Scalar(RAT, Fraction(s))
        except (ValueError, ZeroDivisionError) as e:
            raise ScalarParseError(f"bad rational {text!r}") from e
    if s == "t":
        return Scalar.t()
    try:
        return Scalar(RATFUN, RationalFunction.parse(s))
    except ScalarParseError:
        raise
    except (ValueError, ZeroDivisionError) as e:
        raise ScalarParseError(f"bad rational function {text!r}") from e
