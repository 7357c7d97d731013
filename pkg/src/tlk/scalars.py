"""Exact coefficient field for all representations.

Scalars are rational functions in the four indeterminates a, b, d, f with
integer coefficients.  The symbol c is not an indeterminate: it denotes
d*(d-a)/b, so the relation d^2 - a*d - b*c = 0 holds identically and every
formula written with c is translated on input.  Equality is decidable
because numerator/denominator pairs are kept gcd-reduced with a normalized
sign.  The second root of X^2 - a*X - b*c is dcheck = a - d.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

from sympy.polys.domains import ZZ
from sympy.polys.fields import field as _frac_field

from .errors import PoleAtSpecialization

FIELD, a, b, d, f = _frac_field("a,b,d,f", ZZ)

#: Eliminated symbol: c = d*(d-a)/b, forcing d^2 - a*d - b*c = 0.
c = d * (d - a) / b

#: Second root of X^2 - a*X - b*c; satisfies d*dcheck = -b*c.
dcheck = a - d

ZERO = FIELD.zero
ONE = FIELD.one

PARAM_NAMES = ("a", "b", "d", "f")
_GENS = {"a": a, "b": b, "d": d, "f": f}

Scalar = type(a)  # sympy FracElement; immutable, hashable, canonical


def rational(value) -> Scalar:
    """Embed an int or Fraction into the field."""
    q = Fraction(value)
    return FIELD(q.numerator) / FIELD(q.denominator)


def _eval_poly(poly, values):
    """Evaluate a numerator/denominator polynomial at field elements."""
    total = ZERO
    for exps, coeff in poly.terms():
        term = FIELD(int(coeff))
        for gen_index, e in enumerate(exps):
            if e:
                term = term * values[gen_index] ** e
        total = total + term
    return total


@dataclass(frozen=True)
class Specialization:
    """Partial assignment of rational values to the parameters a, b, d, f.

    Unassigned parameters stay symbolic.  When a, b and d are all assigned,
    the induced value of c is d*(d-a)/b, nonzero iff d*(d-a) != 0.
    """

    values: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for name, value in self.values.items():
            if name not in PARAM_NAMES:
                raise ValueError(f"unknown parameter {name!r}")
            clean[name] = Fraction(value)
        object.__setattr__(self, "values", clean)

    def is_assigned(self, name: str) -> bool:
        return name in self.values

    def induced_c(self) -> Fraction:
        """Value of c = d*(d-a)/b; requires a, b, d all assigned."""
        v = self.values
        if not all(k in v for k in ("a", "b", "d")):
            raise ValueError("c is only determined once a, b, d are assigned")
        return v["d"] * (v["d"] - v["a"]) / v["b"]

    def is_star_compatible(self) -> bool:
        """Positive rationals for a, b, d with d > a > 0 and f unassigned.

        Under such an assignment c = d*(d-a)/b > 0 and evaluation at f = 0
        provides the order homomorphism required by the faithfulness and
        irreducibility hypotheses.
        """
        v = self.values
        if "f" in v:
            return False
        if not all(k in v for k in ("a", "b", "d")):
            return False
        return v["b"] > 0 and v["d"] > v["a"] > 0

    def key(self):
        return tuple(sorted(self.values.items()))


#: Smallest positive integers with d^2 = a*d + b*c and d > a; c comes out 2.
DEFAULT_STAR = Specialization({"a": 1, "b": 1, "d": 2})


def specialize(x: Scalar, spec: Specialization) -> Scalar:
    """Partially evaluate x; untouched indeterminates stay symbolic."""
    values = []
    for gen_index, name in enumerate(PARAM_NAMES):
        if spec.is_assigned(name):
            values.append(rational(spec.values[name]))
        else:
            values.append(FIELD.gens[gen_index])
    den = _eval_poly(x.denom, values)
    if not den:
        raise PoleAtSpecialization(f"denominator of {x} vanishes under {spec.values}")
    return _eval_poly(x.numer, values) / den


def as_fraction(x: Scalar) -> Fraction:
    """Convert a constant scalar to a Fraction; raises if symbols remain."""
    num, den = x.numer, x.denom
    if any(any(e for e in exps) for exps, _ in num.terms()):
        raise ValueError(f"{x} is not constant")
    if any(any(e for e in exps) for exps, _ in den.terms()):
        raise ValueError(f"{x} is not constant")
    n = sum(int(coeff) for _, coeff in num.terms())
    m = sum(int(coeff) for _, coeff in den.terms())
    return Fraction(n, m)


# ---------------------------------------------------------------------------
# Text form.  Fixed grammar: integers, a, b, c, d, f, dcheck (also spelled
# with the caron), +, -, *, /, ^ and parentheses.  c and dcheck are accepted
# on input via their definitions; on output, powers of d are reduced with
# d^2 -> a*d + b*c so expressions written with c display naturally.
# ---------------------------------------------------------------------------

_DISPLAY_VARS = ("a", "b", "c", "d", "f")


def _cform_terms(poly):
    """Rewrite a polynomial in (a, b, d, f) to terms in (a, b, c, d, f).

    Monomials are reduced until deg_d <= 1 by the substitution
    d^2 = a*d + b*c; the result is the canonical normal form modulo the
    defining relation with respect to the variable order d > a, b, c, f.
    """
    acc = {}
    work = [((ea, eb, 0, ed, ef), int(coeff)) for (ea, eb, ed, ef), coeff in poly.terms()]
    while work:
        (ea, eb, ec, ed, ef), coeff = work.pop()
        if ed >= 2:
            work.append(((ea + 1, eb, ec, ed - 1, ef), coeff))
            work.append(((ea, eb + 1, ec + 1, ed - 2, ef), coeff))
            continue
        key = (ea, eb, ec, ed, ef)
        acc[key] = acc.get(key, 0) + coeff
    return {k: v for k, v in acc.items() if v}


def _monomial_str(exps, coeff):
    parts = []
    if coeff == -1 and any(exps):
        sign = "-"
    elif coeff == 1 and any(exps):
        sign = ""
    else:
        sign = str(coeff)
        if any(exps):
            sign += "*"
    for name, e in zip(_DISPLAY_VARS, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return sign + "*".join(parts) if parts else str(coeff)


def _poly_str(terms):
    if not terms:
        return "0"
    ordered = sorted(terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))
    out = _monomial_str(*ordered[0])
    for exps, coeff in ordered[1:]:
        piece = _monomial_str(exps, abs(coeff))
        out += (" - " if coeff < 0 else " + ") + piece
    return out


def render(x: Scalar) -> str:
    """Canonical text form of a scalar, using c where d-degree permits."""
    if x == dcheck:
        return "dcheck"
    num = _cform_terms(x.numer)
    den = _cform_terms(x.denom)
    # cancel common content and common variable powers (display only)
    if num:
        g = 0
        for v in list(num.values()) + list(den.values()):
            g = gcd(g, abs(v))
        common = [min(min(e[i] for e in num), min(e[i] for e in den)) for i in range(5)]
        num = {tuple(e - m for e, m in zip(k, common)): v // g for k, v in num.items()}
        den = {tuple(e - m for e, m in zip(k, common)): v // g for k, v in den.items()}
    num_s = _poly_str(num)
    den_s = _poly_str(den)
    if den_s == "1":
        return num_s
    if den == {(0, 0, 0, 0, 0): -1}:
        return _poly_str({k: -v for k, v in num.items()})
    left = num_s if (len(num) <= 1 and not num_s.startswith("-")) else f"({num_s})"
    right = den_s if den_s.isalnum() else f"({den_s})"
    return f"{left}/{right}"


class _Parser:
    _ATOMS = {
        "a": a,
        "b": b,
        "c": c,
        "d": d,
        "f": f,
        "dcheck": dcheck,
        "ď": dcheck,
    }

    def __init__(self, text: str):
        self.text = text.replace("·", "*").replace("−", "-").replace("**", "^")
        self.pos = 0

    def parse(self) -> Scalar:
        value = self._sum()
        self._skip()
        if self.pos != len(self.text):
            raise ValueError(f"trailing input at {self.pos}: {self.text[self.pos:]!r}")
        return value

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _sum(self):
        sign = 1
        while self._peek() and self._peek() in "+-":
            if self.text[self.pos] == "-":
                sign = -sign
            self.pos += 1
        value = self._product() * sign
        while self._peek() and self._peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            term = self._product()
            value = value + term if op == "+" else value - term
        return value

    def _product(self):
        value = self._power()
        while self._peek() and self._peek() in "*/":
            op = self.text[self.pos]
            self.pos += 1
            nxt = self._power()
            value = value * nxt if op == "*" else value / nxt
        return value

    def _power(self):
        base = self._atom()
        if self._peek() == "^":
            self.pos += 1
            self._skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                raise ValueError("expected integer exponent")
            return base ** int(self.text[start : self.pos])
        return base

    def _atom(self):
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            value = self._sum()
            if self._peek() != ")":
                raise ValueError("missing closing parenthesis")
            self.pos += 1
            return value
        if ch == "-":
            self.pos += 1
            return -self._atom()
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return FIELD(int(self.text[start : self.pos]))
        if ch.isalpha() or ch == "ď":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "ď"):
                self.pos += 1
            name = self.text[start : self.pos]
            if name not in self._ATOMS:
                raise ValueError(f"unknown symbol {name!r}")
            return self._ATOMS[name]
        raise ValueError(f"unexpected character {ch!r} at {self.pos}")


def parse(text: str) -> Scalar:
    """Parse the fixed scalar grammar; c and dcheck expand to their definitions."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Univariate polynomials over the field, dense low-to-high coefficients.
# ---------------------------------------------------------------------------


class Poly:
    """Polynomial in one variable X over the scalar field."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [x if isinstance(x, Scalar) else FIELD(x) for x in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x_minus(cls, root: Scalar) -> "Poly":
        return cls([-root, ONE])

    @classmethod
    def from_factors(cls, factors) -> "Poly":
        """Product of declared factors, each a Poly or a root r meaning X - r."""
        out = cls([ONE])
        for fac in factors:
            out = out * (fac if isinstance(fac, cls) else cls.x_minus(fac))
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        pad = lambda cs: list(cs) + [ZERO] * (n - len(cs))
        return Poly([x + y for x, y in zip(pad(self.coeffs), pad(other.coeffs))])

    def __sub__(self, other):
        return self + Poly([-x for x in other.coeffs])

    def __mul__(self, other):
        if isinstance(other, Poly):
            out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
            for i, x in enumerate(self.coeffs):
                if not x:
                    continue
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] = out[i + j] + x * y
            return Poly(out)
        return Poly([x * other for x in self.coeffs])

    def __call__(self, value: Scalar) -> Scalar:
        acc = ZERO
        for coeff in reversed(self.coeffs):
            acc = acc * value + coeff
        return acc

    def shifted_by_root(self, root: Scalar) -> "Poly":
        return self * Poly.x_minus(root)

    def __repr__(self):
        return f"Poly({self.render()})"

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            coeff = self.coeffs[k]
            if not coeff:
                continue
            xs = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            cs = render(coeff)
            if cs == "1" and xs:
                parts.append(xs)
            elif cs == "-1" and xs:
                parts.append(f"-{xs}")
            else:
                if ("+" in cs[1:] or "-" in cs[1:] or "/" in cs) and xs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{xs}" if xs else cs)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out
