"""Exact coefficient fields: the rationals, prime fields and simple extensions.

Elements of the rationals are ``gmpy2.mpq`` values (always reduced). Prime
field and extension field elements are small immutable wrapper classes that
support the usual arithmetic operators, so the linear algebra layer can be
written once for every field.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpq


class FieldError(ValueError):
    """Raised on invalid field construction or mixed-field arithmetic."""


class UnsupportedFieldError(FieldError):
    pass


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


class Field:
    """Common interface of all coefficient fields."""

    characteristic: int = 0
    kind: str = ""

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_finite(self) -> bool:
        return self.characteristic != 0

    def order(self) -> int | None:
        return None

    def random_element(self, rng, bound: int = 10):
        raise NotImplementedError

    def format(self, x):
        return str(x)

    def parse(self, s):
        return self(s)


# ---------------------------------------------------------------- rationals


class RationalField(Field):
    kind = "Q"
    characteristic = 0
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __call__(self, x):
        if isinstance(x, str):
            x = x.strip()
            if "/" in x:
                num, den = x.split("/")
                return mpq(int(num), int(den))
            return mpq(int(x))
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        if isinstance(x, (FpElement, ExtElement)):
            raise FieldError(f"cannot coerce {x!r} into Q")
        return mpq(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"

    def to_json(self):
        return {"kind": "Q"}

    def random_element(self, rng, bound: int = 10):
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        return mpq(num, den)

    def roots_of_unity_order(self) -> int:
        return 2


QQ = RationalField()


# ------------------------------------------------------------- prime fields


class FpElement:
    __slots__ = ("v", "field")

    def __init__(self, v: int, field: "PrimeField"):
        self.v = v
        self.field = field

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.field.p != self.field.p:
                raise FieldError(f"field mismatch: F_{self.field.p} vs F_{other.field.p}")
            return other.v
        if isinstance(other, int):
            return other
        if type(other) is type(mpq(0)):
            if other.denominator == 1:
                return int(other.numerator)
            p = self.field.p
            return int(other.numerator) * pow(int(other.denominator), -1, p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement((self.v + o) % self.field.p, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement((self.v - o) % self.field.p, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement((o - self.v) % self.field.p, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement((self.v * o) % self.field.p, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement((-self.v) % self.field.p, self.field)

    def __pos__(self):
        return self

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.field.p)
        return FpElement(pow(self.v, -1, self.field.p), self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        if o % p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % p)
        return FpElement(self.v * pow(o, -1, p) % p, self.field)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o % self.field.p, self.field) / self

    def __pow__(self, e: int):
        p = self.field.p
        if e < 0:
            return self.inverse() ** (-e)
        return FpElement(pow(self.v, e, p), self.field)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.v == other.v and self.field.p == other.field.p
        if isinstance(other, int):
            return (self.v - other) % self.field.p == 0
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.field.p})"

    def __str__(self):
        return str(self.v)


class PrimeField(Field):
    kind = "Fp"

    def __init__(self, p: int):
        p = int(p)
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, x):
        if isinstance(x, FpElement):
            if x.field.p != self.p:
                raise FieldError(f"field mismatch: F_{self.p} vs F_{x.field.p}")
            return x
        if isinstance(x, str):
            x = QQ(x)
        if isinstance(x, Fraction):
            x = mpq(x.numerator, x.denominator)
        if isinstance(x, int):
            return FpElement(x % self.p, self)
        if type(x) is type(mpq(0)):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return FpElement(num * pow(den, -1, self.p) % self.p, self)
        raise FieldError(f"cannot coerce {x!r} into F_{self.p}")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def to_json(self):
        return {"kind": "Fp", "p": self.p}

    def order(self) -> int:
        return self.p

    def elements(self):
        return [FpElement(i, self) for i in range(self.p)]

    def random_element(self, rng, bound: int = 10):
        return FpElement(rng.randrange(self.p), self)

    def roots_of_unity_order(self) -> int:
        return self.p - 1

    def primitive_root(self) -> FpElement:
        p = self.p
        if p == 2:
            return self(1)
        factors = _prime_factors(p - 1)
        for g in range(2, p):
            if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
                return self(g)
        raise AssertionError("no primitive root")  # pragma: no cover


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------- simple extensions


def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


class ExtElement:
    """Element of ``base[x]/(modulus)``, stored as ``deg(modulus)`` coefficients."""

    __slots__ = ("c", "field")

    def __init__(self, c: tuple, field: "ExtensionField"):
        self.c = c
        self.field = field

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            if other.field != self.field:
                raise FieldError("field mismatch between extension elements")
            return other
        try:
            return self.field(other)
        except FieldError:
            return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ExtElement(tuple(a + b for a, b in zip(self.c, o.c)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ExtElement(tuple(a - b for a, b in zip(self.c, o.c)), self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return ExtElement(tuple(-a for a in self.c), self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.field._mul(self, o)

    __rmul__ = __mul__

    def inverse(self):
        return self.field._inverse(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, ExtElement):
            return self.field == other.field and self.c == other.c
        try:
            o = self.field(other)
        except (FieldError, TypeError):
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(bool(a) for a in self.c)

    def __repr__(self):
        return f"Ext({[str(a) for a in self.c]})"

    __str__ = __repr__


class ExtensionField(Field):
    """``base[x]/(modulus)``. Irreducibility is the caller's responsibility;
    use :func:`modsym.poly.make_extension` for a checked construction."""

    kind = "ext"

    def __init__(self, base: Field, modulus_coeffs):
        coeffs = [base(c) for c in modulus_coeffs]
        _trim(coeffs)
        if len(coeffs) < 2:
            raise FieldError("extension modulus must have degree >= 1")
        if coeffs[-1] != base.one:
            raise FieldError("extension modulus must be monic")
        self.base = base
        self.modulus = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.characteristic = base.characteristic

    def __call__(self, x):
        if isinstance(x, ExtElement):
            if x.field != self:
                raise FieldError("field mismatch")
            return x
        if isinstance(x, (list, tuple)):
            vals = [self.base(a) for a in x]
            if len(vals) > self.degree:
                return self._reduce(vals)
            vals += [self.base.zero] * (self.degree - len(vals))
            return ExtElement(tuple(vals), self)
        a = self.base(x)
        return ExtElement((a,) + (self.base.zero,) * (self.degree - 1), self)

    def gen(self) -> ExtElement:
        """Class of x."""
        if self.degree == 1:
            return self(-self.modulus[0])
        return self([0, 1])

    def _reduce(self, vals: list) -> ExtElement:
        vals = list(vals)
        m = self.modulus
        d = self.degree
        for i in range(len(vals) - 1, d - 1, -1):
            c = vals[i]
            if c:
                for j in range(d):
                    vals[i - d + j] = vals[i - d + j] - c * m[j]
            vals[i] = self.base.zero
        vals = vals[:d]
        vals += [self.base.zero] * (d - len(vals))
        return ExtElement(tuple(vals), self)

    def _mul(self, a: ExtElement, b: ExtElement) -> ExtElement:
        zero = self.base.zero
        prod = [zero] * (2 * self.degree - 1)
        for i, x in enumerate(a.c):
            if not x:
                continue
            for j, y in enumerate(b.c):
                if y:
                    prod[i + j] = prod[i + j] + x * y
        return self._reduce(prod)

    def _inverse(self, a: ExtElement) -> ExtElement:
        if not a:
            raise ZeroDivisionError("inverse of zero in extension field")
        # extended Euclid on coefficient lists over the base field
        base = self.base
        r0, r1 = list(self.modulus), _trim(list(a.c))
        s0, s1 = [], [base.one]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1, base)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, base), base)
        if not r1:
            raise FieldError("modulus is reducible: non-invertible element found")
        c = r1[0].inverse() if hasattr(r1[0], "inverse") else 1 / r1[0]
        return self._reduce([x * c for x in s1] or [base.zero])

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ext", self.base, self.modulus))

    def __repr__(self):
        return f"Ext({self.base!r}, {[str(c) for c in self.modulus]})"

    def to_json(self):
        return {
            "kind": "ext",
            "base": self.base.to_json(),
            "modulus": [self.base.format(c) for c in self.modulus],
        }

    def format(self, x):
        return [self.base.format(a) for a in x.c]

    def order(self) -> int | None:
        q = self.base.order()
        return None if q is None else q**self.degree

    def random_element(self, rng, bound: int = 10):
        return ExtElement(
            tuple(self.base.random_element(rng, bound) for _ in range(self.degree)), self
        )


def _poly_mul(a, b, base):
    if not a or not b:
        return []
    out = [base.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _poly_sub(a, b, base):
    n = max(len(a), len(b))
    out = [
        (a[i] if i < len(a) else base.zero) - (b[i] if i < len(b) else base.zero)
        for i in range(n)
    ]
    return _trim(out)


def _poly_divmod(a, b, base):
    a = list(a)
    inv = 1 / b[-1] if not hasattr(b[-1], "inverse") else b[-1].inverse()
    q = [base.zero] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = a[shift + i] - c * y
        a.pop()
        _trim(a)
    return _trim(q), a


# ------------------------------------------------------------------ helpers


def field_from_json(doc) -> Field:
    kind = doc.get("kind")
    if kind == "Q":
        return QQ
    if kind == "Fp":
        return PrimeField(int(doc["p"]))
    if kind == "ext":
        from .poly import Poly, make_extension

        base = field_from_json(doc["base"])
        return make_extension(base, Poly(base, [base(c) for c in doc["modulus"]]))
    raise FieldError(f"unknown field kind {kind!r}")


def parse_field(text: str) -> Field:
    """Parse the command-line syntax ``q`` or ``fp:P``."""
    s = text.strip().lower()
    if s in ("q", "qq"):
        return QQ
    if s.startswith("fp:"):
        return PrimeField(int(s[3:]))
    raise FieldError(f"unrecognised field {text!r}; expected 'q' or 'fp:P'")


def inverse(x):
    if hasattr(x, "inverse"):
        return x.inverse()
    return 1 / x

