"""Univariate polynomials over exact fields and their factorization.

Factorization over prime fields is squarefree + distinct-degree +
Cantor-Zassenhaus equal-degree splitting. Over the rationals the
squarefree parts are factored modulo a good prime, Hensel lifted and
recombined by exhaustive search over factor subsets.
"""

from __future__ import annotations

import itertools
import os
import random
from math import gcd, isqrt

from gmpy2 import mpq

from .fields import (
    QQ,
    ExtensionField,
    Field,
    FieldError,
    PrimeField,
    UnsupportedFieldError,
    inverse,
    is_prime,
)

DEFAULT_SEED = 0
SEED_ENV = "MODSYM_SEED"


def engine_seed() -> int:
    """The engine-wide seed: ``$MODSYM_SEED`` if set, else 0."""
    value = os.environ.get(SEED_ENV)
    return int(value) if value else DEFAULT_SEED


class Poly:
    """Polynomial with ascending coefficient list; the zero polynomial is ``[]``."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        c = [field(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.field = field
        self.coeffs = c

    @classmethod
    def _raw(cls, field, coeffs):
        p = cls.__new__(cls)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        p.field = field
        p.coeffs = coeffs
        return p

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        inv = inverse(self.coeffs[-1])
        return Poly._raw(self.field, [c * inv for c in self.coeffs])

    def _check(self, other):
        if not isinstance(other, Poly):
            other = Poly(self.field, [other])
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = out[i] + y
        return Poly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(self.field, [])
        zero = self.field.zero
        out = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Poly(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        inv = inverse(b[-1])
        db = len(b) - 1
        q = [self.field.zero] * max(len(a) - db, 0)
        for shift in range(len(a) - len(b), -1, -1):
            c = a[shift + db]
            if not c:
                continue
            c = c * inv
            q[shift] = c
            for i, y in enumerate(b):
                a[shift + i] = a[shift + i] - c * y
        return Poly._raw(self.field, q), Poly._raw(self.field, a[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            if self.degree() <= 0:
                return (self.coeffs[0] if self.coeffs else self.field.zero) == other
            return False
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, tuple(self.coeffs)))

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw(
            self.field, [c * i for i, c in enumerate(self.coeffs)][1:]
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        out = ""
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = self.field.format(c)
            if isinstance(cs, list):
                cs = "(" + ",".join(cs) + ")"
            neg = cs.startswith("-")
            if neg and out:
                cs = cs[1:]
            mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mon and cs in ("1", "-1"):
                term = "-" + mon if cs == "-1" else mon
            elif mon:
                term = f"{cs}*{mon}"
            else:
                term = cs
            if out:
                out += (" - " if neg else " + ") + term
            else:
                out = term
        return out

    def to_json(self):
        return [self.field.format(c) for c in self.coeffs]


# ------------------------------------------------------------ gcd and friends


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    if a.field != b.field:
        raise FieldError(f"field mismatch: {a.field!r} vs {b.field!r}")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly(F, [1]), Poly(F, [])
    t0, t1 = Poly(F, []), Poly(F, [1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = inverse(r0.lc())
    return r0 * inv, s0 * inv, t0 * inv


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly(a.field, [])
    return (a * b // poly_gcd(a, b)).monic()


def poly_powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly(base.field, [1]) % mod
    base = base % mod
    while e:
        if e & 1:
            result = result * base % mod
        base = base * base % mod
        e >>= 1
    return result


# --------------------------------------------------- integer-list helpers mod p
#
# Factorization works on plain Python int lists; this is several times faster
# than going through FpElement objects.


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _zp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _zp_sub(a, b, p):
    n = max(len(a), len(b))
    return _trim(
        [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    )


def _zp_add(a, b, p):
    n = max(len(a), len(b))
    return _trim(
        [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]
    )


def _zp_divmod(a, b, p):
    """Division by ``b`` whose leading coefficient is a unit mod ``p`` (p may be
    a prime power)."""
    a = [c % p for c in a]
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    for shift in range(len(a) - len(b), -1, -1):
        c = a[shift + db] % p
        if not c:
            continue
        c = c * inv % p
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
    return _trim(q), _trim(a[:db])


def _zp_mod(a, b, p):
    return _zp_divmod(a, b, p)[1]


def _zp_monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _zp_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _zp_mod(a, b, p)
    return _zp_monic(a, p)


def _zp_xgcd(a, b, p):
    r0, r1 = _trim(list(a)), _trim(list(b))
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _zp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _zp_sub(s0, _zp_mul(q, s1, p), p)
        t0, t1 = t1, _zp_sub(t0, _zp_mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [c * inv % p for c in r0], [c * inv % p for c in s0], [c * inv % p for c in t0]


def _zp_powmod(base, e, mod, p):
    result = [1]
    base = _zp_mod(base, mod, p)
    while e:
        if e & 1:
            result = _zp_mod(_zp_mul(result, base, p), mod, p)
        base = _zp_mod(_zp_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _zp_deriv(a, p):
    return _trim([(i * c) % p for i, c in enumerate(a)][1:])


def _zp_squarefree(f, p):
    """Squarefree decomposition of monic ``f`` over F_p: list of (g, mult)."""
    out = []
    _zp_sqf_rec(f, p, 1, out)
    merged = {}
    for g, m in out:
        key = tuple(g)
        merged[key] = merged.get(key, 0) + m
    return [(list(k), m) for k, m in merged.items()]


def _zp_sqf_rec(f, p, mult, out):
    if len(f) <= 1:
        return
    df = _zp_deriv(f, p)
    if not df:
        # f is a p-th power: take the p-th root coefficientwise (a^p = a in F_p)
        root = [f[i] for i in range(0, len(f), p)]
        _zp_sqf_rec(root, p, mult * p, out)
        return
    c = _zp_gcd(f, df, p)
    w = _zp_divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = _zp_gcd(w, c, p)
        z = _zp_divmod(w, y, p)[0]
        if len(z) > 1:
            out.append((z, mult * i))
        i += 1
        w = y
        c = _zp_divmod(c, y, p)[0]
    if len(c) > 1:
        root = [c[i] for i in range(0, len(c), p)]
        _zp_sqf_rec(root, p, mult * p, out)


def _zp_ddf(f, p):
    """Distinct-degree factorization of squarefree monic ``f``."""
    out = []
    d = 0
    h = [0, 1]
    f = list(f)
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _zp_powmod(h, p, f, p)
        g = _zp_gcd(f, _zp_sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            f = _zp_divmod(f, g, p)[0]
            h = _zp_mod(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _zp_edf(f, d, p, rng):
    """Split a product of degree-``d`` irreducibles (Cantor-Zassenhaus)."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            # trace map x + x^2 + ... + x^(2^(d-1))
            t = a
            acc = list(a)
            for _ in range(d - 1):
                t = _zp_mod(_zp_mul(t, t, p), f, p)
                acc = _zp_add(acc, t, p)
            b = acc
        else:
            b = _zp_sub(_zp_powmod(a, (p**d - 1) // 2, f, p), [1], p)
        g = _zp_gcd(f, b, p)
        if 1 < len(g) < len(f):
            h = _zp_divmod(f, g, p)[0]
            return _zp_edf(g, d, p, rng) + _zp_edf(h, d, p, rng)


def _zp_factor(f, p, rng):
    """Factor monic ``f`` over F_p into (monic irreducible, multiplicity)."""
    out = []
    for g, m in _zp_squarefree(f, p):
        for h, d in _zp_ddf(g, p):
            for irr in _zp_edf(h, d, p, rng):
                out.append((irr, m))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1]))
    return out


# ------------------------------------------------------ rational factorization


def _int_content(f):
    c = 0
    for x in f:
        c = gcd(c, x)
    return c


def _int_primitive(poly: Poly):
    """Clear denominators of a rational polynomial; return primitive int list."""
    den = 1
    for c in poly.coeffs:
        d = int(c.denominator)
        den = den * d // gcd(den, d)
    ints = [int(c * den) for c in poly.coeffs]
    cont = _int_content(ints)
    if ints[-1] < 0:
        cont = -cont
    return [x // cont for x in ints]


def _int_divides(g, f):
    """Exact division of integer polynomials; None if ``g`` does not divide ``f``."""
    f = list(f)
    dg = len(g) - 1
    if len(f) < len(g):
        return None
    q = [0] * (len(f) - dg)
    for shift in range(len(f) - len(g), -1, -1):
        c = f[shift + dg]
        if c % g[-1]:
            return None
        c //= g[-1]
        q[shift] = c
        if c:
            for i, y in enumerate(g):
                f[shift + i] -= c * y
    if any(f[:dg]):
        return None
    return q


def _sym(c, m):
    c %= m
    return c - m if c > m // 2 else c


def _hensel_step(f, g, h, s, t, m):
    """Quadratic Hensel step from modulus ``m`` to ``m*m``; ``h`` is monic."""
    M = m * m
    e = _zp_sub(f, _zp_mul(g, h, M), M)
    q, r = _zp_divmod(_zp_mul(s, e, M), h, M)
    g2 = _zp_add(_zp_add(g, _zp_mul(t, e, M), M), _zp_mul(q, g, M), M)
    h2 = _zp_add(h, r, M)
    b = _zp_sub(_zp_add(_zp_mul(s, g2, M), _zp_mul(t, h2, M), M), [1], M)
    c, d = _zp_divmod(_zp_mul(s, b, M), h2, M)
    s2 = _zp_sub(s, d, M)
    t2 = _zp_sub(_zp_sub(t, _zp_mul(t, b, M), M), _zp_mul(c, g2, M), M)
    return g2, h2, s2, t2


def _hensel_lift(f, factors, p, k):
    """Lift monic factors of ``f mod p`` (with f = lc * prod) to mod ``p**k``."""
    pk = p**k
    lc = f[-1]
    if len(factors) == 1:
        return [_zp_monic([c % pk for c in f], pk)]
    half = len(factors) // 2
    A, B = factors[:half], factors[half:]
    g = [lc % p]
    for a in A:
        g = _zp_mul(g, a, p)
    h = [1]
    for b in B:
        h = _zp_mul(h, b, p)
    one, s, t = _zp_xgcd(g, h, p)
    assert one == [1]
    m = p
    while m < pk:
        g, h, s, t = _hensel_step(f, g, h, s, t, m)
        m = m * m
    g = [c % pk for c in g]
    h = [c % pk for c in h]
    return _hensel_lift(g, A, p, k) + _hensel_lift(h, B, p, k)


def _mignotte_bound(f):
    n = len(f) - 1
    norm2 = isqrt(sum(c * c for c in f)) + 1
    return (2**n) * norm2 * abs(f[-1])


def _zassenhaus(f, rng):
    """Irreducible factors of a squarefree primitive integer polynomial."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    lc = f[-1]
    p = 3
    while True:
        p = int(_next_prime(p))
        if lc % p == 0:
            continue
        fp = _zp_monic([c % p for c in f], p)
        if len(_zp_gcd(fp, _zp_deriv(fp, p), p)) == 1:
            break
    modular = [g for g, _ in _zp_factor(fp, p, rng)]
    if len(modular) == 1:
        return [f]
    bound = 2 * _mignotte_bound(f) * abs(lc) + 1
    k = 1
    while p**k <= bound:
        k += 1
    pk = p**k
    lifted = _hensel_lift(f, modular, p, k)

    found = []
    remaining = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(remaining):
        progress = False
        for subset in itertools.combinations(remaining, size):
            lc_f = f[-1]
            cand = [lc_f % pk]
            for i in subset:
                cand = _zp_mul(cand, lifted[i], pk)
            cand = [_sym(c, pk) for c in cand]
            cont = _int_content(cand)
            cand = [c // cont for c in cand]
            if cand[-1] < 0:
                cand = [-c for c in cand]
            q = _int_divides(cand, f)
            if q is not None:
                found.append(cand)
                f = q
                remaining = [i for i in remaining if i not in subset]
                progress = True
                break
        if not progress:
            size += 1
    found.append(f)
    return found


def _next_prime(n):
    n += 1
    while not is_prime(n):
        n += 1
    return n


def _yun(f: Poly):
    """Squarefree decomposition in characteristic 0."""
    out = []
    f = f.monic()
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    i = 1
    while b.degree() > 0:
        g = poly_gcd(b, d)
        if g.degree() > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


def poly_factor(f: Poly, seed: int | None = None) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicities, sorted by degree."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    F = f.field
    rng = random.Random(engine_seed() if seed is None else seed)
    if f.degree() == 0:
        return []
    if isinstance(F, PrimeField):
        p = F.p
        ints = _zp_monic([int(c) for c in f.coeffs], p)
        return [(Poly(F, g), m) for g, m in _zp_factor(ints, p, rng)]
    if F == QQ:
        out = []
        for g, m in _yun(f):
            for h in _zassenhaus(_int_primitive(g), rng):
                out.append((Poly(QQ, [mpq(c) for c in h]).monic(), m))
        out.sort(key=lambda t: (t[0].degree(), [str(c) for c in reversed(t[0].coeffs)]))
        return out
    raise UnsupportedFieldError(f"factorization over {F!r} is not supported")


def is_irreducible(f: Poly) -> bool:
    fac = poly_factor(f)
    return len(fac) == 1 and fac[0][1] == 1


def make_extension(base: Field, modulus: Poly) -> ExtensionField:
    """Checked construction of ``base[x]/(modulus)``."""
    if modulus.field != base:
        raise FieldError("modulus must be defined over the base field")
    if modulus.degree() < 1:
        raise FieldError("extension modulus must have degree >= 1")
    if modulus.lc() != base.one:
        raise FieldError("extension modulus must be monic")
    if modulus.degree() > 1:
        factors = poly_factor(modulus)
        if len(factors) != 1 or factors[0][1] != 1:
            raise FieldError(f"modulus {modulus!r} is reducible: factor {factors[0][0]!r}")
    return ExtensionField(base, modulus.coeffs)
