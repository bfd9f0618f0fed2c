"""Exact scalar fields: rationals, Gaussian rationals and prime fields.

Every field object knows how to coerce Python ints/Fractions into its
elements, how to parse a token from a text file and how to print an element
in the canonical, diffable form used by the CLI.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering

__all__ = [
    "GaussianRational",
    "ModP",
    "Field",
    "RATIONAL",
    "GAUSSIAN",
    "prime_field",
    "field_from_spec",
    "is_prime",
    "FieldError",
]


class FieldError(ValueError):
    """Raised for non-invertible divisions or unparsable scalars."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


class GaussianRational:
    """a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @staticmethod
    def _lift(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise FieldError("division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = GaussianRational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


@total_ordering
class ModP:
    """Residue class modulo a prime p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _lift(self, x):
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldError(f"mixing GF({self.p}) and GF({x.p})")
            return x
        if isinstance(x, int):
            return ModP(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} is not {self.p}-integral")
            return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ModP(self.v + o.v, self.p)

    __radd__ = __add__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ModP(self.v - o.v, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ModP(o.v - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * o.v, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "ModP":
        if self.v == 0:
            raise FieldError(f"division by zero in GF({self.p})")
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (int, Fraction)):
            try:
                return self.v == self._lift(other).v
            except FieldError:
                return False
        return NotImplemented

    def __lt__(self, other):
        # only used to give residues a deterministic sort order
        return (self.p, self.v) < (other.p, other.v)

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"ModP({self.v}, {self.p})"


_RAT = r"[+-]?\d+(?:/\d+)?"
_GAUSS_RE = re.compile(rf"^(?:(?P<re>{_RAT})(?=[+-]|$))?(?:(?P<im>[+-]?(?:\d+(?:/\d+)?)?)i)?$")


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Field:
    """An exact field: `kind` is 'rational', 'gaussian' or 'gf'."""

    def __init__(self, kind: str, p: int | None = None):
        if kind == "gf":
            if p is None or not is_prime(p):
                raise FieldError(f"GF(p) needs a prime p, got {p}")
        self.kind = kind
        self.p = p

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "gf" else 0

    def __call__(self, x):
        if self.kind == "rational":
            if isinstance(x, ModP):
                raise FieldError("cannot lift a residue into the rationals")
            if isinstance(x, GaussianRational):
                if x.im:
                    raise FieldError(f"{x} is not real")
                return x.re
            return _frac(x)
        if self.kind == "gaussian":
            if isinstance(x, ModP):
                raise FieldError("cannot lift a residue into Q(i)")
            return GaussianRational._lift(x)
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldError(f"mixing GF({self.p}) and GF({x.p})")
            return x
        if isinstance(x, GaussianRational):
            if x.im:
                raise FieldError("Gaussian values cannot be reduced mod p")
            x = x.re
        return ModP(0, self.p)._lift(x)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, token: str):
        token = token.strip()
        if self.kind == "gaussian":
            m = _GAUSS_RE.match(token)
            if not m or not token:
                raise FieldError(f"bad Gaussian scalar {token!r}")
            re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
            im_tok = m.group("im")
            if im_tok is None:
                im_part = Fraction(0)
            elif im_tok in ("", "+"):
                im_part = Fraction(1)
            elif im_tok == "-":
                im_part = Fraction(-1)
            else:
                im_part = Fraction(im_tok)
            return GaussianRational(re_part, im_part)
        if not re.fullmatch(_RAT, token):
            raise FieldError(f"bad scalar {token!r}")
        return self(Fraction(token))

    def format(self, x) -> str:
        x = self(x)
        if self.kind == "rational":
            return _fmt_frac(x)
        if self.kind == "gf":
            return str(x.v)
        if x.im == 0:
            return _fmt_frac(x.re)
        im = x.im
        im_s = ("" if abs(im) == 1 else _fmt_frac(abs(im))) + "i"
        if x.re == 0:
            return ("-" if im < 0 else "") + im_s
        return _fmt_frac(x.re) + ("-" if im < 0 else "+") + im_s

    def lift_rational(self, x) -> Fraction:
        """Canonical rational representative (least residue for GF(p))."""
        if self.kind == "gf":
            return Fraction(self(x).v)
        if self.kind == "gaussian":
            raise FieldError("Gaussian values have no rational lift")
        return self(x)

    def spec(self) -> str:
        return f"gf {self.p}" if self.kind == "gf" else self.kind

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"Field({self.spec()!r})"


RATIONAL = Field("rational")
GAUSSIAN = Field("gaussian")


def prime_field(p: int) -> Field:
    return Field("gf", p)


def field_from_spec(words: list[str] | str) -> Field:
    """`rational`, `gaussian`, `gf 7` or `gf7`."""
    if isinstance(words, str):
        words = words.split()
    if not words:
        raise FieldError("empty field selector")
    head = words[0].lower()
    if head == "rational":
        return RATIONAL
    if head == "gaussian":
        return GAUSSIAN
    if head.startswith("gf"):
        rest = head[2:] or (words[1] if len(words) > 1 else "")
        try:
            return prime_field(int(rest))
        except ValueError:
            raise FieldError(f"bad prime in field selector {words!r}") from None
    raise FieldError(f"unknown field {words!r}")
