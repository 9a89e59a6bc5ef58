"""Modular symbol spaces for Gamma_0(N) with character, presented by Manin symbols.

A generator is a pair ((c:d), X^i Y^(k-2-i)). Writing g for a fixed lift of
(c:d) to SL_2(Z), it stands for the modular symbol {g0, g oo} (x) g.P, where
matrices act on polynomials by (g.P)(X, Y) = P(aX + cY, bX + dY). In the
quotient, gamma.x = chi(d_gamma) x for gamma in Gamma_0(N).
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from .fields import Field, FieldError
from .level import (
    Cusp,
    CuspData,
    DirichletCharacter,
    DomainError,
    char_group,
    matrix_for_cusp,
    p1_table,
    sl2_lift,
    trivial_character,
)
from .linalg import Matrix, Subspace, kernel_basis, sparse_rref, stack

SIGMA = ((0, -1), (1, 0))
TAU = ((-1, 1), (-1, 0))
T = ((1, 1), (0, 1))
ETA = ((-1, 0), (0, 1))
IDENTITY = ((1, 0), (0, 1))


class ParityError(DomainError):
    pass


class UnsupportedCharacteristicError(DomainError):
    pass


class DeterminantError(DomainError):
    pass


def mat_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def adjugate(a):
    """Inverse for determinant 1, adjugate in general."""
    return ((a[1][1], -a[0][1]), (-a[1][0], a[0][0]))


def det(a):
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def t_power(q):
    return ((1, q), (0, 1))


def word_product(word):
    m = IDENTITY
    for atom in word:
        m = mat_mul(m, SIGMA if atom == "S" else t_power(atom[1]))
    return m


def psl2_word(m):
    """Atoms ``"S"`` (sigma) and ``("T", n)`` whose product is +-m."""
    (a, b), (c, d) = m
    if a * d - b * c != 1:
        raise DeterminantError(f"determinant of {m} is not 1")
    word = []
    if abs(c) > abs(a):
        word.append("S")
        a, b, c, d = -c, -d, a, b
    while c != 0:
        q = a // c
        if q:
            word.append(("T", q))
        word.append("S")
        # sigma * T^-q * M
        a, b, c, d = -c, -d, a - q * c, b - q * d
    # now M = +-T^b' with a = d = +-1
    if b * a != 0:
        word.append(("T", b * a))
    return word


@lru_cache(maxsize=4096)
def action_matrix(g, n: int):
    """Integer matrix of P -> g.P on monomials X^i Y^(n-i); column i is g.X^i Y^(n-i)."""
    (a, b), (c, d) = g

    def binom_row(x, y, e):
        # (x X + y Y)^e as coefficients of X^j Y^(e-j)
        return [comb(e, j) * x**j * y ** (e - j) for j in range(e + 1)]

    cols = []
    for i in range(n + 1):
        p1 = binom_row(a, c, i)
        p2 = binom_row(b, d, n - i)
        col = [0] * (n + 1)
        for j1, u in enumerate(p1):
            if u:
                for j2, w in enumerate(p2):
                    if w:
                        col[j1 + j2] += u * w
        cols.append(col)
    return tuple(tuple(cols[i][j] for i in range(n + 1)) for j in range(n + 1))


class WeightModule:
    """Homogeneous polynomials of degree k-2 in X, Y over a field."""

    def __init__(self, k: int, field: Field):
        if k < 2:
            raise DomainError("weight must be at least 2")
        self.k = k
        self.n = k - 2
        self.field = field

    @property
    def dim(self):
        return self.n + 1

    def matrix(self, g) -> Matrix:
        return Matrix(self.field, action_matrix(g, self.n))

    def act(self, g, coeffs):
        A = action_matrix(g, self.n)
        F = self.field
        out = []
        for row in A:
            acc = F.zero
            for a, x in zip(row, coeffs):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out


class ModularSymbolPath:
    """{alpha, beta} (x) P with P given on monomials X^i Y^(k-2-i)."""

    def __init__(self, alpha, beta, coeffs):
        self.alpha = alpha if isinstance(alpha, Cusp) else _as_cusp(alpha)
        self.beta = beta if isinstance(beta, Cusp) else _as_cusp(beta)
        self.coeffs = list(coeffs)

    def __repr__(self):
        return f"{{{self.alpha}, {self.beta}}} (x) {self.coeffs}"


def _as_cusp(x):
    if x is None or x == "oo":
        return Cusp.infinity()
    if isinstance(x, tuple):
        return Cusp(*x)
    if isinstance(x, int):
        return Cusp(x, 1)
    return Cusp(int(x.numerator), int(x.denominator))


@lru_cache(maxsize=100000)
def _terms_to_infinity(a: int, c: int):
    """Matrices h with {a/c, oo} (x) Q = sum [h^-1 Q, h] (Manin symbols by matrix)."""
    if c == 0:
        return ()
    g = matrix_for_cusp(Cusp(a, c))
    h = IDENTITY
    out = []
    for atom in psl2_word(g):
        if atom == "S":
            out.append(h)
            h = mat_mul(h, SIGMA)
        else:
            h = mat_mul(h, t_power(atom[1]))
    return tuple(out)


class ManinSpace:
    """Quotient of the free module on Manin symbols by the sigma/tau relations."""

    def __init__(self, N: int, k: int, chi: DirichletCharacter | None, field: Field):
        if not isinstance(N, int) or N < 1:
            raise DomainError(f"level must be a positive integer, got {N!r}")
        if not isinstance(k, int) or k < 2:
            raise DomainError(f"weight must be an integer >= 2, got {k!r}")
        if field.characteristic in (2, 3):
            raise UnsupportedCharacteristicError(
                f"characteristic {field.characteristic} is not supported (need 0 or p > 3)"
            )
        if chi is None:
            chi = trivial_character(N, field)
        if chi.N != N:
            raise DomainError(f"character modulus {chi.N} differs from level {N}")
        if chi.field != field:
            raise FieldError("character and space use different fields")
        sign = field.one if k % 2 == 0 else -field.one
        if chi(-1) != sign:
            raise ParityError(f"chi(-1) must equal (-1)^k for weight {k}")
        self.N = N
        self.k = k
        self.n = k - 2
        self.chi = chi
        self.field = field
        self.weight = WeightModule(k, field)
        self.p1 = p1_table(N)
        self.ngens = len(self.p1) * (self.n + 1)
        self._lifts = [sl2_lift(c, d, N) for c, d in self.p1.elements]
        self._build_quotient()
        self._cache = {}

    # --------------------------------------------------------- presentation

    def gen_index(self, p1_index: int, i: int) -> int:
        return p1_index * (self.n + 1) + i

    def _symbol_terms(self, c, d, h_inv):
        """Terms of [h^-1 m_i, (c, d) h] for all i, as (i, generator, coefficient)."""
        idx, lam = self.p1.lookup(c, d)
        x = self.chi(lam)
        A = action_matrix(h_inv, self.n)
        out = []
        for j, row in enumerate(A):
            g = self.gen_index(idx, j)
            for i, a in enumerate(row):
                if a:
                    out.append((i, g, x * a))
        return out

    def relations(self):
        """Sparse rows (dict generator -> coefficient), sigma family then tau family."""
        F = self.field
        n1 = self.n + 1
        sig_inv = adjugate(SIGMA)
        tau_inv = adjugate(TAU)
        tau2_inv = mat_mul(tau_inv, tau_inv)
        rows = []
        for fam in ("sigma", "tau"):
            for r, (c, d) in enumerate(self.p1.elements):
                if fam == "sigma":
                    terms = self._symbol_terms(d, -c, sig_inv)
                else:
                    terms = self._symbol_terms(-c - d, c, tau_inv) + self._symbol_terms(d, -c - d, tau2_inv)
                per = [dict() for _ in range(n1)]
                for i, g, v in terms:
                    per[i][g] = per[i].get(g, F.zero) + v
                for i in range(n1):
                    row = per[i]
                    g0 = self.gen_index(r, i)
                    row[g0] = row.get(g0, F.zero) + F.one
                    rows.append({g: v for g, v in row.items() if v})
        return rows

    def _build_quotient(self):
        F = self.field
        piv = sparse_rref(self.relations(), F)
        self.free = [g for g in range(self.ngens) if g not in piv]
        self.qindex = {g: j for j, g in enumerate(self.free)}
        qmap = []
        for g in range(self.ngens):
            j = self.qindex.get(g)
            if j is not None:
                qmap.append({j: F.one})
            else:
                qmap.append({self.qindex[c]: -v for c, v in piv[g].items() if c != g})
        self.qmap = qmap

    @property
    def dim(self) -> int:
        return len(self.free)

    def generator_label(self, j: int):
        """(c:d) and monomial exponent of the j-th quotient basis vector."""
        g = self.free[j]
        p, i = divmod(g, self.n + 1)
        return self.p1.elements[p], i

    def reduce(self, sparse):
        """Image in the quotient basis of a sparse combination of generators."""
        F = self.field
        out = [F.zero] * self.dim
        for g, v in sparse.items():
            if not v:
                continue
            for j, w in self.qmap[g].items():
                out[j] = out[j] + v * w
        return out

    # ------------------------------------------------------- modular symbols

    def _add_paths(self, cols, M, sign):
        """cols[i] += sign * image of {M0, M oo} (x) M.m_i for every monomial i."""
        chi = self.chi
        n1 = self.n + 1
        qmap = self.qmap
        (a, b), (c, d) = M
        for (x, y), s in (((b, d), sign), ((a, c), -sign)):
            if y == 0 and x != 0:
                continue
            cusp = Cusp(x, y)
            for h in _terms_to_infinity(cusp.a, cusp.c):
                idx, lam = self.p1.lookup(h[1][0], h[1][1])
                factor = chi(lam)
                if s < 0:
                    factor = -factor
                A = action_matrix(mat_mul(adjugate(h), M), self.n)
                base = idx * n1
                for j, row in enumerate(A):
                    gvec = qmap[base + j]
                    if not gvec:
                        continue
                    for i, coef in enumerate(row):
                        if coef:
                            f = factor * coef
                            col = cols[i]
                            for q, w in gvec.items():
                                col[q] = col[q] + f * w

    def modular_to_vector(self, path: ModularSymbolPath):
        """Quotient coordinates of {alpha, beta} (x) P."""
        F = self.field
        out = [F.zero] * self.dim
        coeffs = [F(x) if not hasattr(x, "field") else x for x in path.coeffs]
        if len(coeffs) != self.n + 1:
            raise DomainError(f"coefficient vector must have length {self.n + 1}")
        for cusp, s in ((path.alpha, 1), (path.beta, -1)):
            for h in _terms_to_infinity(cusp.a, cusp.c):
                idx, lam = self.p1.lookup(h[1][0], h[1][1])
                factor = self.chi(lam) if s > 0 else -self.chi(lam)
                Q = self.weight.act(adjugate(h), coeffs)
                base = idx * (self.n + 1)
                for j, v in enumerate(Q):
                    if v:
                        for q, w in self.qmap[base + j].items():
                            out[q] = out[q] + factor * v * w
        return out

    def lift(self, p1_index: int):
        return self._lifts[p1_index]

    def apply_matrices(self, mats, generators=None):
        """Matrix (quotient basis columns) of x -> sum over delta in mats of delta.x.

        Each delta acts on {g0, g oo} (x) g.P as {dg0, dg oo} (x) dg.P.
        """
        F = self.field
        n1 = self.n + 1
        by_p1 = {}
        for j, g in enumerate(self.free):
            p, i = divmod(g, n1)
            by_p1.setdefault(p, []).append((j, i))
        columns = [None] * self.dim
        for p, items in by_p1.items():
            cols = [[F.zero] * self.dim for _ in range(n1)]
            g = self._lifts[p]
            for delta in mats:
                self._add_paths(cols, mat_mul(delta, g), 1)
            for j, i in items:
                columns[j] = cols[i]
        return Matrix.from_columns(F, columns, self.dim)

    # -------------------------------------------------------------- boundary

    @property
    def cusps(self) -> CuspData:
        if "cusps" not in self._cache:
            self._cache["cusps"] = CuspData(self.N, self.chi)
            self._setup_cusp_quotients()
        return self._cache["cusps"]

    def _setup_cusp_quotients(self):
        F = self.field
        data = self._cache["cusps"]
        n1 = self.n + 1
        quotients = []
        offset = 0
        for cl in data.classes:
            M0 = cl.matrix
            gamma0 = mat_mul(mat_mul(M0, t_power(cl.width)), adjugate(M0))
            c = self.chi(gamma0[1][1])
            A = action_matrix(t_power(cl.width), self.n)
            images = []
            for i in range(n1):
                col = [F(A[j][i]) for j in range(n1)]
                col[i] = col[i] - c
                images.append(col)
            W = Subspace(F, n1, images)
            free = [j for j in range(n1) if j not in W.pivots]
            quotients.append((W, free, offset))
            offset += len(free)
        self._cache["cusp_quotients"] = quotients
        self._cache["boundary_dim"] = offset

    @property
    def boundary_dim(self) -> int:
        self.cusps
        return self._cache["boundary_dim"]

    def cusp_value(self, M, Q):
        """Boundary-space coordinates of {M oo} (x) Q for M in SL_2(Z)."""
        data = self.cusps
        F = self.field
        out = [F.zero] * self.boundary_dim
        j = self.p1.index(M[1][0], M[1][1])
        k = data.orbit_of[j]
        s = data.offset[j]
        cl = data.classes[k]
        W, free, offset = self._cache["cusp_quotients"][k]
        if not free:
            return out
        gamma = mat_mul(mat_mul(M, t_power(-s)), adjugate(cl.matrix))
        assert gamma[1][0] % self.N == 0, "cusp lookup produced a matrix outside Gamma_0(N)"
        x = self.chi(gamma[1][1])
        R = self.weight.act(mat_mul(t_power(s), adjugate(M)), Q)
        for b, p in zip(W.basis, W.pivots):
            f = R[p]
            if f:
                R = [r - f * bb for r, bb in zip(R, b)]
        for t, col in enumerate(free):
            out[offset + t] = x * R[col]
        return out

    def generator_boundary(self, g: int):
        """Boundary of the free generator g: {g oo} (x) g.P - {g0} (x) g.P."""
        p, i = divmod(g, self.n + 1)
        lift = self._lifts[p]
        F = self.field
        m = [F.zero] * (self.n + 1)
        m[i] = F.one
        Q = self.weight.act(lift, m)
        top = self.cusp_value(lift, Q)
        bottom = self.cusp_value(mat_mul(lift, SIGMA), Q)
        return [a - b for a, b in zip(top, bottom)]

    def boundary_matrix(self) -> Matrix:
        if "boundary" not in self._cache:
            cols = [self.generator_boundary(g) for g in self.free]
            self._cache["boundary"] = Matrix.from_columns(self.field, cols, self.boundary_dim)
        return self._cache["boundary"]

    # ------------------------------------------------------------- subspaces

    def eta_matrix(self) -> Matrix:
        if "eta" not in self._cache:
            F = self.field
            cols = []
            for g in self.free:
                p, i = divmod(g, self.n + 1)
                c, d = self.p1.elements[p]
                idx, lam = self.p1.lookup(-c, d)
                x = self.chi(lam)
                if i % 2:
                    x = -x
                cols.append(self.reduce({self.gen_index(idx, i): x}))
            self._cache["eta"] = Matrix.from_columns(F, cols, self.dim)
        return self._cache["eta"]

    def cuspidal_subspace(self) -> Subspace:
        if "cusp" not in self._cache:
            B = self.boundary_matrix()
            if B.nrows == 0:
                self._cache["cusp"] = Subspace.full(self.field, self.dim)
            else:
                self._cache["cusp"] = kernel_basis(B)
        return self._cache["cusp"]

    def _sign_subspace(self, sign):
        key = "plus" if sign > 0 else "minus"
        if key not in self._cache:
            F = self.field
            E = self.eta_matrix()
            D = E - Matrix.identity(F, self.dim).scale(sign)
            parts = [D]
            B = self.boundary_matrix()
            if B.nrows:
                parts.insert(0, B)
            self._cache[key] = kernel_basis(stack(parts)) if self.dim else Subspace(F, 0)
        return self._cache[key]

    def plus_subspace(self) -> Subspace:
        return self._sign_subspace(1)

    def minus_subspace(self) -> Subspace:
        return self._sign_subspace(-1)

    def subspace(self, tag: str) -> Subspace:
        if tag == "full":
            return Subspace.full(self.field, self.dim)
        if tag in ("cusp", "cuspidal"):
            return self.cuspidal_subspace()
        if tag == "plus":
            return self.plus_subspace()
        if tag == "minus":
            return self.minus_subspace()
        raise DomainError(f"unknown subspace tag {tag!r}")

    def dimensions(self) -> dict:
        cusp = self.cuspidal_subspace().dim()
        return {
            "dim_full": self.dim,
            "dim_cuspidal": cusp,
            "dim_eisenstein": self.dim - cusp,
            "dim_plus": self.plus_subspace().dim(),
            "dim_minus": self.minus_subspace().dim(),
        }

    def __repr__(self):
        return f"ManinSpace(N={self.N}, k={self.k}, chi={self.chi!r}, field={self.field!r}, dim={self.dim})"


def build_space(N: int, k: int, chi=None, field: Field | None = None) -> ManinSpace:
    """``chi`` may be a character, an index into ``char_group(N, field)``, or None."""
    from .fields import QQ

    field = QQ if field is None else field
    if field.characteristic in (2, 3):
        raise UnsupportedCharacteristicError(
            f"characteristic {field.characteristic} is not supported (need 0 or p > 3)"
        )
    if isinstance(chi, int):
        group = char_group(N, field)
        if not 0 <= chi < len(group):
            raise DomainError(f"character index {chi} out of range 0..{len(group) - 1}")
        chi = group[chi]
    return ManinSpace(N, k, chi, field)
