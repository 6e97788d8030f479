"""Scalar fields: exact rationals (default) and prime fields GF(p)."""

from __future__ import annotations

from fractions import Fraction

try:  # gmpy2 rationals are an order of magnitude faster than Fraction
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = Fraction


class Rationals:
    characteristic = 0
    name = "q"

    def __init__(self):
        self.zero = _mpq(0)
        self.one = _mpq(1)

    def __call__(self, x) -> object:
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            return _mpq(x.numerator, x.denominator)
        return _mpq(x)

    def random(self, rng, bound=3):
        return _mpq(rng.randint(-bound, bound))

    def to_str(self, x) -> str:
        x = _mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class GFElement:
    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _c(self, other):
        if isinstance(other, GFElement):
            return other.v
        return int(other) % self.p

    def __add__(self, o):
        return GFElement(self.v + self._c(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return GFElement(self.v - self._c(o), self.p)

    def __rsub__(self, o):
        return GFElement(self._c(o) - self.v, self.p)

    def __mul__(self, o):
        return GFElement(self.v * self._c(o), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GFElement(-self.v, self.p)

    def __truediv__(self, o):
        d = self._c(o)
        if d == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return GFElement(self.v * pow(d, -1, self.p), self.p)

    def __rtruediv__(self, o):
        return GFElement(self._c(o), self.p) / self

    def __eq__(self, o):
        if isinstance(o, GFElement):
            return self.v == o.v
        return self.v == int(o) % self.p

    def __ne__(self, o):
        return not self.__eq__(o)

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"zp:{p}"
        self.zero = GFElement(0, p)
        self.one = GFElement(1, p)

    def __call__(self, x):
        if isinstance(x, GFElement):
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction) or hasattr(x, "denominator"):
            x = Fraction(int(x.numerator), int(x.denominator))
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} is not defined in GF({self.p})")
            return GFElement(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return GFElement(int(x), self.p)

    def random(self, rng, bound=None):
        return GFElement(rng.randrange(self.p), self.p)

    def to_str(self, x) -> str:
        return str(self(x).v)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def field_from_spec(spec: str | None):
    """Parse a ``--field`` value: ``q`` (default) or ``zp:<p>``."""
    if spec is None or spec.lower() in ("q", "qq", "rationals"):
        return QQ
    spec = spec.lower()
    if spec.startswith("zp:"):
        return PrimeField(int(spec[3:]))
    raise ValueError(f"unknown field {spec!r}; use 'q' or 'zp:<p>'")
