"""Hecke and diamond operators on Manin symbol spaces, Hecke algebras and q-expansions."""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from math import gcd

from .level import DomainError, _factor_int
from .linalg import InvarianceError, Matrix, Subspace, restrict_operator, span_closure
from .manin import ManinSpace, mat_mul


def sigma_matrix(a: int, N: int):
    """An element of SL_2(Z) congruent to diag(a^-1, a) mod N."""
    if gcd(a, N) != 1:
        raise DomainError(f"{a} is not a unit mod {N}")
    # x a - y N = 1
    if N == 1:
        return ((1, a - 1), (1, a))
    x = pow(a, -1, N)
    y = (x * a - 1) // N
    return ((x, y), (N, a))


def coset_reps(n: int, N: int):
    """sigma_a (a b; 0 d) for a | n, gcd(a, N) = 1, d = n/a, 0 <= b < d."""
    if n < 1:
        raise DomainError("n must be positive")
    reps = []
    for a in range(1, n + 1):
        if n % a or gcd(a, N) != 1:
            continue
        d = n // a
        s = sigma_matrix(a, N) if a != 1 else ((1, 0), (0, 1))
        for b in range(d):
            reps.append(mat_mul(s, ((a, b), (0, d))))
    return reps


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(n**0.5) + 1))


def primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


def index_mu(N: int) -> int:
    mu = N
    for p, _ in _factor_int(N):
        mu = mu // p * (p + 1)
    return mu


def sturm_bound(N: int, k: int) -> int:
    if N < 1 or k < 1:
        raise DomainError("level and weight must be positive")
    return -(-k * index_mu(N) // 12)


class HeckeContext:
    """Hecke operators on a Manin space, cached per n, on the full quotient."""

    def __init__(self, space: ManinSpace, threads: int = 1):
        self.space = space
        self.threads = max(1, int(threads))
        self._cache = {}
        self._lock = threading.Lock()

    def _compute(self, mats) -> Matrix:
        sp = self.space
        if self.threads == 1 or sp.dim == 0:
            return sp.apply_matrices(mats)
        # split the representatives between workers and add the partial sums
        chunks = [mats[i :: self.threads] for i in range(self.threads)]
        chunks = [c for c in chunks if c]
        with ThreadPoolExecutor(max_workers=len(chunks)) as ex:
            parts = list(ex.map(sp.apply_matrices, chunks))
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total

    def _store(self, key, m):
        with self._lock:
            self._cache.setdefault(key, m)
        return self._cache[key]

    def diamond_scalar(self, a: int):
        return self.space.chi(a)

    def diamond_matrix(self, a: int) -> Matrix:
        """Action of sigma_a; a scalar chi(a) on the whole space."""
        N = self.space.N
        if gcd(a, N) != 1:
            raise DomainError(f"diamond operator needs gcd(a, N) = 1, got a = {a}")
        key = ("diamond", a % N)
        if key in self._cache:
            return self._cache[key]
        m = self._compute([sigma_matrix(a % N if N > 1 else 1, N)])
        expected = Matrix.identity(self.space.field, self.space.dim).scale(self.space.chi(a))
        if m != expected:
            raise AssertionError(f"diamond operator <{a}> is not the scalar chi({a})")
        return self._store(key, m)

    def hecke_direct(self, n: int) -> Matrix:
        """T_n as the sum over all coset representatives of determinant n."""
        key = ("direct", n)
        if key not in self._cache:
            self._store(key, self._compute(coset_reps(n, self.space.N)))
        return self._cache[key]

    def hecke_matrix(self, n: int) -> Matrix:
        if not isinstance(n, int) or n < 1:
            raise DomainError(f"Hecke index must be a positive integer, got {n!r}")
        if n in self._cache:
            return self._cache[n]
        sp = self.space
        F = sp.field
        if n == 1:
            return self._store(1, Matrix.identity(F, sp.dim))
        fac = _factor_int(n)
        if len(fac) > 1:
            m = None
            for p, e in fac:
                t = self.hecke_matrix(p**e)
                m = t if m is None else m * t
            return self._store(n, m)
        p, e = fac[0]
        if e == 1:
            return self._store(n, self._compute(coset_reps(p, sp.N)))
        tp = self.hecke_matrix(p)
        m = tp * self.hecke_matrix(p ** (e - 1))
        if sp.N % p:
            c = F(p ** (sp.k - 1)) * sp.chi(p)
            m = m - self.hecke_matrix(p ** (e - 2)).scale(c)
        return self._store(n, m)

    def on_subspace(self, n: int, sub: Subspace) -> Matrix:
        return restrict_operator(self.hecke_matrix(n), sub)


class HeckeAlgebra:
    """Linear span of T_1..T_B on a subspace, with coordinates of each T_n."""

    def __init__(self, ctx: HeckeContext, tag: str = "plus", bound: int | None = None):
        self.ctx = ctx
        self.tag = tag
        space = ctx.space
        self.subspace = space.subspace(tag)
        self.field = space.field
        self.size = self.subspace.dim()
        self.bound = sturm_bound(space.N, space.k) if bound is None else bound
        self.basis = []
        self.generator_indices = []
        self._span = Subspace(self.field, self.size * self.size)
        for n in range(1, self.bound + 1):
            self._try_add(n)
        # dual coordinates: a basis vector's coordinates are read off the echelon form
        self._solve = Subspace(self.field, self.size * self.size, [b.flatten() for b in self.basis])
        self._to_basis = self._change_of_basis()

    def _try_add(self, n):
        m = self.operator(n)
        v = m.flatten()
        if self.size and v not in self._span:
            self.basis.append(m)
            self.generator_indices.append(n)
            self._span = Subspace(self.field, self.size * self.size, self._span.basis + [v])

    def _change_of_basis(self):
        # echelon coordinates -> coordinates in self.basis
        r = len(self.basis)
        if r == 0:
            return Matrix.zero(self.field, 0, 0)
        ech = Matrix.from_columns(
            self.field, [self._solve.coordinates(b.flatten()) for b in self.basis], r
        )
        from .linalg import echelonize

        aug = Matrix(self.field, [row + [1 if i == j else 0 for j in range(r)] for i, row in enumerate(ech.rows)])
        red, _ = echelonize(aug)
        return Matrix._raw(self.field, [row[r:] for row in red.rows], r)

    def operator(self, n: int) -> Matrix:
        return self.ctx.on_subspace(n, self.subspace)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, m: Matrix):
        """Coordinates of an operator in the algebra basis, or None if outside the span."""
        e = self._solve.coordinates(m.flatten())
        if e is None:
            return None
        return self._to_basis.apply(e)

    def span_dim_with(self, extra) -> int:
        return span_closure(self.basis + [self.operator(n) for n in extra]).dim() if self.size else 0

    def qexp_basis(self, precision: int):
        if precision < 1:
            raise DomainError("precision must be at least 1")
        coords = [self.coordinates(self.operator(n)) for n in range(1, precision + 1)]
        for n, c in enumerate(coords, 1):
            if c is None:
                raise InvarianceError(f"T_{n} lies outside the span of T_1..T_{self.bound}")
        return [[c[j] for c in coords] for j in range(self.dim)]


def hecke_algebra(ctx: HeckeContext, tag: str = "plus") -> HeckeAlgebra:
    return HeckeAlgebra(ctx, tag)


def qexp_basis(alg: HeckeAlgebra, precision: int):
    return alg.qexp_basis(precision)
