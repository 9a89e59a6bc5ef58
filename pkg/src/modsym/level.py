"""Level-N combinatorics: P^1(Z/N), Dirichlet characters and cusp classes."""

from __future__ import annotations

import itertools
from collections import namedtuple
from functools import lru_cache
from math import gcd

from .fields import Field, PrimeField, RationalField, UnsupportedFieldError


class DomainError(ValueError):
    pass


class NotProjectiveError(DomainError):
    pass


P1Element = namedtuple("P1Element", ["u", "v"])


def _check_level(N):
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"level must be a positive integer, got {N!r}")


def _units(N):
    if N == 1:
        return [0]
    return [a for a in range(1, N) if gcd(a, N) == 1]


class P1Table:
    """All classes of P^1(Z/N) with an O(1) lookup for raw pairs.

    The canonical representative of an orbit under unit scaling is its
    lexicographically smallest pair (u, v) with entries in [0, N).
    ``lookup(u, v)`` returns ``(index, lam)`` with ``(u, v) = lam * rep``.
    """

    def __init__(self, N: int):
        _check_level(N)
        self.N = N
        units = _units(N)
        table = [None] * (N * N)
        elements = []
        for u in range(N):
            for v in range(N):
                if table[u * N + v] is not None or gcd(gcd(u, v), N) != 1:
                    continue
                idx = len(elements)
                elements.append(P1Element(u, v))
                for lam in units:
                    table[(lam * u % N) * N + lam * v % N] = (idx, lam)
        self.elements = elements
        self._table = table

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def lookup(self, u: int, v: int):
        N = self.N
        hit = self._table[(u % N) * N + v % N]
        if hit is None:
            raise NotProjectiveError(f"({u}, {v}) does not generate Z/{N}Z")
        return hit

    def index(self, u: int, v: int) -> int:
        return self.lookup(u, v)[0]


@lru_cache(maxsize=64)
def p1_table(N: int) -> P1Table:
    return P1Table(N)


def p1_normalize(u: int, v: int, N: int) -> P1Element:
    _check_level(N)
    if gcd(gcd(u % N, v % N), N) != 1:
        raise NotProjectiveError(f"({u}, {v}) does not generate Z/{N}Z")
    return min(P1Element(lam * u % N, lam * v % N) for lam in _units(N))


def p1_list(N: int) -> list:
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"level must be a positive integer, got {N!r}")
    return list(p1_table(N).elements)


# ------------------------------------------------------------- characters


def _factor_int(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _primitive_root_mod_prime_power(p, e):
    q = p**e
    phi = (p - 1) * p ** (e - 1)
    fac = [r for r, _ in _factor_int(phi)]
    for g in range(2, q):
        if gcd(g, p) == 1 and all(pow(g, phi // r, q) != 1 for r in fac):
            return g
    raise AssertionError("no primitive root")


def _crt_lift(residue, q, N):
    """Integer x mod N with x = residue mod q and x = 1 mod N/q."""
    m = N // q
    # x = residue + q*t with q*t = 1 - residue mod m
    if m == 1:
        return residue % N
    t = ((1 - residue) * pow(q, -1, m)) % m
    return (residue + q * t) % N


def unit_group_generators(N: int) -> list[tuple[int, int]]:
    """Generators of the cyclic factors of (Z/N)^x with their orders."""
    gens = []
    for p, e in _factor_int(N):
        q = p**e
        if p == 2:
            if e == 2:
                gens.append((_crt_lift(q - 1, q, N), 2))
            elif e >= 3:
                gens.append((_crt_lift(q - 1, q, N), 2))
                gens.append((_crt_lift(5, q, N), 2 ** (e - 2)))
        else:
            g = _primitive_root_mod_prime_power(p, e)
            gens.append((_crt_lift(g, q, N), (p - 1) * p ** (e - 1)))
    return gens


class DirichletCharacter:
    """Character (Z/N)^x -> K^x, extended by zero to non-units."""

    def __init__(self, N: int, field: Field, images):
        _check_level(N)
        self.N = N
        self.field = field
        self.gens = unit_group_generators(N)
        self.images = tuple(field(x) for x in images)
        if len(self.images) != len(self.gens):
            raise DomainError("one image per generator is required")
        for (g, order), z in zip(self.gens, self.images):
            if z**order != field.one:
                raise DomainError(f"image of generator {g} has order not dividing {order}")
        values = {1 % N: field.one}
        frontier = [1 % N]
        while frontier:
            nxt = []
            for a in frontier:
                for (g, _), z in zip(self.gens, self.images):
                    b = a * g % N
                    if b not in values:
                        values[b] = values[a] * z
                        nxt.append(b)
            frontier = nxt
        self._values = values

    def __call__(self, a: int):
        v = self._values.get(a % self.N)
        return self.field.zero if v is None else v

    def is_trivial(self) -> bool:
        return all(z == self.field.one for z in self.images)

    def order(self) -> int:
        one = self.field.one
        o = 1
        for z in self.images:
            k = 1
            w = z
            while w != one:
                w = w * z
                k += 1
            o = o * k // gcd(o, k)
        return o

    def parity(self) -> int:
        return 1 if self(-1) == self.field.one else -1

    def to_json(self):
        return {
            "modulus": self.N,
            "generators": [str(g) for g, _ in self.gens],
            "images": [self.field.format(z) for z in self.images],
        }

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.N == other.N
            and self.field == other.field
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.N, self.images))

    def __repr__(self):
        imgs = ", ".join(f"{g}->{self.field.format(z)}" for (g, _), z in zip(self.gens, self.images))
        return f"DirichletCharacter(N={self.N}, {imgs or 'trivial'})"


def trivial_character(N: int, field: Field) -> DirichletCharacter:
    return DirichletCharacter(N, field, [field.one] * len(unit_group_generators(N)))


def char_group(N: int, field: Field) -> list:
    """All characters mod N with values in ``field``; index 0 is trivial."""
    _check_level(N)
    if isinstance(field, RationalField):
        mu, root = 2, field(-1)
    elif isinstance(field, PrimeField):
        mu, root = field.p - 1, field.primitive_root()
    else:
        raise UnsupportedFieldError("characters are only enumerated over Q and prime fields")
    choices = []
    for _, order in unit_group_generators(N):
        m = gcd(order, mu)
        z = root ** (mu // m)
        choices.append([z**t for t in range(m)])
    return [DirichletCharacter(N, field, imgs) for imgs in itertools.product(*choices)]


# ------------------------------------------------------------------ cusps


class Cusp:
    """Element a/c of P^1(Q) in lowest terms with c >= 0; infinity is 1/0."""

    __slots__ = ("a", "c")

    def __init__(self, a: int, c: int = 1):
        if a == 0 and c == 0:
            raise DomainError("0/0 is not a cusp")
        g = gcd(a, c)
        a, c = a // g, c // g
        if c < 0 or (c == 0 and a < 0):
            a, c = -a, -c
        self.a = a
        self.c = c

    @classmethod
    def infinity(cls):
        return cls(1, 0)

    def is_infinity(self) -> bool:
        return self.c == 0

    def __eq__(self, other):
        return isinstance(other, Cusp) and (self.a, self.c) == (other.a, other.c)

    def __hash__(self):
        return hash((self.a, self.c))

    def __repr__(self):
        return "oo" if self.c == 0 else (f"{self.a}" if self.c == 1 else f"{self.a}/{self.c}")


def _inv_mod(a, m):
    if m == 0:
        if a in (1, -1):
            return a
        raise DomainError(f"{a} is not invertible in Z")
    if m == 1:
        return 0
    return pow(a, -1, m)


def cusps_equivalent(x: Cusp, y: Cusp, N: int) -> bool:
    """Gamma_0(N)-equivalence of cusps by the denominator criterion.

    With s_j a_j = 1 mod c_j, a1/c1 ~ a2/c2 iff s1 c2 = s2 c1 mod gcd(c1 c2, N).
    """
    s1 = _inv_mod(x.a, x.c)
    s2 = _inv_mod(y.a, y.c)
    m = gcd(x.c * y.c, N)
    return (s1 * y.c - s2 * x.c) % m == 0


def sl2_lift(c: int, d: int, N: int):
    """Matrix in SL_2(Z) whose bottom row reduces to (c, d) mod N."""
    c %= N
    d %= N
    if c == 0:
        if d not in (1 % N, N - 1):
            raise DomainError(f"(0, {d}) has no lift with unit bottom row mod {N}")
        dd = 1 if d == 1 % N else -1
        return ((dd, 0), (0, dd))
    while gcd(c, d) != 1:
        d += N
    # a d - b c = 1
    g, x, y = _xgcd(d, c)
    return ((x, -y), (c, d))


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def matrix_for_cusp(x: Cusp):
    """Some g in SL_2(Z) with g(oo) = x."""
    if x.c == 0:
        return ((1, 0), (0, 1))
    g, s, t = _xgcd(x.a, x.c)
    # a s + c t = 1, so [[a, -t], [c, s]] has determinant 1
    return ((x.a, -t), (x.c, s))


class CuspClass:
    __slots__ = ("index", "rep", "matrix", "width", "p1_orbit", "alive")

    def __init__(self, index, rep, matrix, width, p1_orbit, alive):
        self.index = index
        self.rep = rep
        self.matrix = matrix
        self.width = width
        self.p1_orbit = p1_orbit
        self.alive = alive

    def __repr__(self):
        state = "alive" if self.alive else "killed"
        return f"CuspClass({self.rep}, width={self.width}, {state})"


def _mat_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _sl2_inv(a):
    return ((a[1][1], -a[0][1]), (-a[1][0], a[0][0]))


class CuspData:
    """Cusp classes of Gamma_0(N) through T-orbits on P^1(Z/N).

    Gamma_0(N) g oo is determined by the orbit of the bottom row of g under
    (c:d) -> (c:d+c); the orbit length is the cusp width.
    """

    def __init__(self, N: int, chi: DirichletCharacter | None = None):
        _check_level(N)
        self.N = N
        tab = p1_table(N)
        self.orbit_of = [None] * len(tab)
        self.offset = [0] * len(tab)
        classes = []
        for i, (c, d) in enumerate(tab.elements):
            if self.orbit_of[i] is not None:
                continue
            k = len(classes)
            members = []
            s = 0
            j = i
            while True:
                self.orbit_of[j] = k
                self.offset[j] = s
                members.append(j)
                s += 1
                j = tab.index(c, d + s * c)
                if j == i:
                    break
            M0 = sl2_lift(c, d, N)
            rep = Cusp(M0[0][0], M0[1][0])
            alive = True
            if chi is not None:
                gamma0 = _mat_mul(_mat_mul(M0, ((1, s), (0, 1))), _sl2_inv(M0))
                alive = chi(gamma0[1][1]) == chi.field.one
            classes.append(CuspClass(k, rep, M0, s, members, alive))
        self.classes = classes

    def __len__(self):
        return len(self.classes)

    def class_of(self, x: Cusp) -> int:
        g = matrix_for_cusp(x)
        return self.orbit_of[p1_table(self.N).index(g[1][0], g[1][1])]


def cusp_classes(N: int, chi: DirichletCharacter | None = None):
    """Cusp class representatives and their status ('alive' or 'killed')."""
    data = CuspData(N, chi)
    return [cl.rep for cl in data.classes], ["alive" if cl.alive else "killed" for cl in data.classes]
