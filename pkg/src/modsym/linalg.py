"""Dense exact linear algebra over a :mod:`modsym.fields` field.

Matrices act on column vectors. Subspaces are stored through a reduced
row echelon basis, so two subspaces are equal exactly when their bases are.
"""

from __future__ import annotations

from .fields import Field, FieldError, inverse
from .poly import Poly, poly_lcm


class ShapeError(ValueError):
    pass


class InvarianceError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows, ncols: int | None = None):
        rows = [[field(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def _raw(cls, field, rows, ncols):
        m = cls.__new__(cls)
        m.field = field
        m.nrows = len(rows)
        m.ncols = ncols
        m.rows = rows
        return m

    @classmethod
    def zero(cls, field, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        z = field.zero
        return cls._raw(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        m = cls.zero(field, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def diagonal(cls, field, entries):
        entries = list(entries)
        m = cls.zero(field, len(entries))
        for i, e in enumerate(entries):
            m.rows[i][i] = field(e)
        return m

    @classmethod
    def from_columns(cls, field, columns, nrows: int):
        rows = [[col[i] for col in columns] for i in range(nrows)]
        return cls._raw(field, rows, len(columns))

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.field, [list(c) for c in zip(*self.rows)] if self.nrows else
                           [[] for _ in range(self.ncols)], self.nrows)

    def copy(self) -> "Matrix":
        return Matrix._raw(self.field, [list(r) for r in self.rows], self.ncols)

    def _same_shape(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.field != self.field:
            raise FieldError("field mismatch")
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ShapeError(
                f"shape mismatch {self.nrows}x{self.ncols} vs {other.nrows}x{other.ncols}"
            )

    def __add__(self, other):
        self._same_shape(other)
        return Matrix._raw(
            self.field,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix._raw(
            self.field,
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __neg__(self):
        return Matrix._raw(self.field, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix._raw(self.field, [[c * a for a in r] for r in self.rows], self.ncols)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        if other.field != self.field:
            raise FieldError("field mismatch")
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        zero = self.field.zero
        ocols = other.ncols
        orows = other.rows
        out = []
        for r in self.rows:
            acc = [zero] * ocols
            for k, a in enumerate(r):
                if not a:
                    continue
                ok = orows[k]
                for j in range(ocols):
                    b = ok[j]
                    if b:
                        acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix._raw(self.field, out, ocols)

    def __rmul__(self, c):
        return self.scale(c)

    def apply(self, vec):
        """``self @ vec`` for a column vector given as a list."""
        zero = self.field.zero
        out = []
        for r in self.rows:
            acc = zero
            for a, b in zip(r, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def __pow__(self, e: int):
        if not self.is_square():
            raise ShapeError("power of non-square matrix")
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(tuple(r) for r in self.rows)))

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def flatten(self) -> list:
        return [a for r in self.rows for a in r]

    def to_json(self):
        return [[self.field.format(a) for a in r] for r in self.rows]

    @classmethod
    def from_json(cls, field, doc):
        return cls(field, [[field.parse(x) for x in r] for r in doc], len(doc[0]) if doc else 0)

    def __repr__(self):
        body = "\n".join(" ".join(str(self.field.format(a)) for a in r) for r in self.rows)
        return f"Matrix {self.nrows}x{self.ncols} over {self.field!r}\n{body}"


# ----------------------------------------------------------------- echelon


def _rref_rows(rows, ncols, field):
    """In-place Gauss-Jordan; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = inverse(prow[c])
        if prow[c] != field.one:
            prow = [a * inv for a in prow]
            rows[r] = prow
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in range(c, ncols):
                        b = prow[j]
                        if b:
                            row[j] = row[j] - f * b
        pivots.append(c)
        r += 1
    return pivots


def echelonize(m: Matrix):
    """Reduced row echelon form and its pivot columns."""
    rows = [list(r) for r in m.rows]
    pivots = _rref_rows(rows, m.ncols, m.field)
    return Matrix._raw(m.field, rows, m.ncols), pivots


def rank(m: Matrix) -> int:
    return len(echelonize(m)[1])


class Subspace:
    """Subspace of ``field^n`` with a reduced echelon basis (rows)."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field: Field, ambient: int, vectors=()):
        rows = [[field(x) for x in v] for v in vectors]
        if any(len(v) != ambient for v in rows):
            raise ShapeError("vector length differs from ambient dimension")
        pivots = _rref_rows(rows, ambient, field)
        self.field = field
        self.ambient = ambient
        self.basis = rows[: len(pivots)]
        self.pivots = pivots

    @classmethod
    def full(cls, field, n):
        return cls(field, n, Matrix.identity(field, n).rows)

    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def coordinates(self, v):
        """Coordinates of ``v`` in the echelon basis, or None if ``v`` is outside."""
        coords = [v[p] for p in self.pivots]
        zero = self.field.zero
        rest = list(v)
        for c, b in zip(coords, self.basis):
            if c:
                for j in range(self.ambient):
                    if b[j]:
                        rest[j] = rest[j] - c * b[j]
        if any(x != zero for x in rest):
            return None
        return coords

    def __contains__(self, v):
        return self.coordinates(v) is not None

    def combine(self, coords):
        zero = self.field.zero
        out = [zero] * self.ambient
        for c, b in zip(coords, self.basis):
            if c:
                for j, x in enumerate(b):
                    if x:
                        out[j] = out[j] + c * x
        return out

    def matrix(self) -> Matrix:
        return Matrix._raw(self.field, [list(b) for b in self.basis], self.ambient)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim()}, ambient={self.ambient})"


def kernel_basis(m: Matrix) -> Subspace:
    """Right kernel ``{v : m v = 0}``."""
    red, pivots = echelonize(m)
    F = m.field
    pivset = set(pivots)
    vecs = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [F.zero] * m.ncols
        v[f] = F.one
        for i, p in enumerate(pivots):
            v[p] = -red.rows[i][f]
        vecs.append(v)
    return Subspace(F, m.ncols, vecs)


def stack(mats) -> Matrix:
    mats = list(mats)
    ncols = mats[0].ncols
    rows = []
    for m in mats:
        if m.ncols != ncols:
            raise ShapeError("cannot stack matrices with different column counts")
        rows.extend(list(r) for r in m.rows)
    return Matrix._raw(mats[0].field, rows, ncols)


# ---------------------------------------------------------- polynomials of M


def evaluate_poly(f: Poly, m: Matrix) -> Matrix:
    if not m.is_square():
        raise ShapeError("polynomial of a non-square matrix")
    n = m.nrows
    result = Matrix.zero(m.field, n)
    ident = Matrix.identity(m.field, n)
    for c in reversed(f.coeffs):
        result = result * m + ident.scale(c)
    return result


def _vector_annihilator(m: Matrix, v):
    """Least monic polynomial p with p(m) v = 0, plus the Krylov vectors."""
    F = m.field
    n = m.nrows
    basis = {}  # pivot col -> (row, coeff list)
    order = []
    w = list(v)
    krylov = []
    j = 0
    while True:
        coeff = [F.zero] * (j + 1)
        coeff[j] = F.one
        r = list(w)
        for pc in order:
            f = r[pc]
            if f:
                brow, bco = basis[pc]
                for t in range(n):
                    if brow[t]:
                        r[t] = r[t] - f * brow[t]
                for t, b in enumerate(bco):
                    if b:
                        coeff[t] = coeff[t] - f * b
        piv = next((t for t in range(n) if r[t]), None)
        if piv is None:
            return Poly(F, coeff), krylov
        krylov.append(w)
        inv = inverse(r[piv])
        r = [a * inv for a in r]
        coeff = [a * inv for a in coeff]
        for pc in order:
            brow, bco = basis[pc]
            f = brow[piv]
            if f:
                brow = [a - f * b for a, b in zip(brow, r)]
                bco = bco + [F.zero] * (len(coeff) - len(bco))
                bco = [a - f * b for a, b in zip(bco, coeff)]
                basis[pc] = (brow, bco)
        basis[piv] = (r, coeff)
        order.append(piv)
        w = m.apply(w)
        j += 1


def minimal_polynomial(m: Matrix) -> Poly:
    """Monic minimal polynomial: lcm of the annihilators of standard vectors,
    skipping vectors already inside the accumulated Krylov span."""
    if not m.is_square():
        raise ShapeError("minimal polynomial of a non-square matrix")
    F = m.field
    n = m.nrows
    result = Poly(F, [1])
    span = Subspace(F, n)
    for i in range(n):
        e = [F.zero] * n
        e[i] = F.one
        if span.dim() and e in span:
            continue
        ann, krylov = _vector_annihilator(m, e)
        result = poly_lcm(result, ann)
        span = Subspace(F, n, span.basis + krylov)
        if span.dim() == n:
            break
    return result


def char_polynomial(m: Matrix) -> Poly:
    """Characteristic polynomial via reduction to Hessenberg form."""
    if not m.is_square():
        raise ShapeError("characteristic polynomial of a non-square matrix")
    F = m.field
    n = m.nrows
    H = [list(r) for r in m.rows]
    for j in range(n - 2):
        i = next((i for i in range(j + 1, n) if H[i][j]), None)
        if i is None:
            continue
        if i != j + 1:
            H[i], H[j + 1] = H[j + 1], H[i]
            for r in H:
                r[i], r[j + 1] = r[j + 1], r[i]
        inv = inverse(H[j + 1][j])
        for k in range(j + 2, n):
            u = H[k][j] * inv
            if u:
                H[k] = [a - u * b for a, b in zip(H[k], H[j + 1])]
                for r in H:
                    r[j + 1] = r[j + 1] + u * r[k]
    x = Poly.x(F)
    polys = [Poly(F, [1])]
    for mm in range(n):
        p = (x - H[mm][mm]) * polys[mm]
        t = F.one
        for i in range(1, mm + 1):
            t = t * H[mm - i + 1][mm - i]
            c = t * H[mm - i][mm]
            if c:
                p = p - polys[mm - i] * c
        polys.append(p)
    return polys[n]


# ------------------------------------------------------------ operator spans


def span_closure(mats) -> Subspace:
    """Linear span of square matrices viewed as vectors of length n^2."""
    mats = list(mats)
    if not mats:
        raise ShapeError("span of an empty list")
    n = mats[0].nrows
    F = mats[0].field
    for m in mats:
        if not m.is_square() or m.nrows != n:
            raise ShapeError("span_closure needs square matrices of equal size")
        if m.field != F:
            raise FieldError("field mismatch")
    return Subspace(F, n * n, [m.flatten() for m in mats])


def restrict_operator(m: Matrix, w: Subspace) -> Matrix:
    """Matrix of ``m`` on the invariant subspace ``w`` in the basis of ``w``."""
    if m.ncols != w.ambient or not m.is_square():
        raise ShapeError("operator and subspace do not match")
    cols = []
    for b in w.basis:
        image = m.apply(b)
        coords = w.coordinates(image)
        if coords is None:
            raise InvarianceError("subspace is not invariant under the operator", witness=b)
        cols.append(coords)
    return Matrix.from_columns(m.field, cols, w.dim())


def subspace_image(w: Subspace, inside: Subspace) -> Subspace:
    """Express ``w`` (a subspace of the ambient of ``inside``) in the coordinates of ``inside``."""
    vecs = []
    for b in w.basis:
        c = inside.coordinates(b)
        if c is None:
            raise InvarianceError("subspace is not contained in the target", witness=b)
        vecs.append(c)
    return Subspace(w.field, inside.dim(), vecs)


def lift_subspace(w: Subspace, inside: Subspace) -> Subspace:
    """Inverse of :func:`subspace_image`: coordinates in ``inside`` back to its ambient."""
    return Subspace(w.field, inside.ambient, [inside.combine(b) for b in w.basis])


# ---------------------------------------------------------- sparse elimination


def sparse_rref(rows, field):
    """Reduced echelon form of sparse rows (``dict col -> value``).

    Returns ``{pivot_col: row}``; every returned row has a 1 at its pivot and
    no entries at other pivot columns.
    """
    piv = {}
    one = field.one
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            c = min(r)
            prow = piv.get(c)
            if prow is None:
                inv = inverse(r[c])
                if r[c] != one:
                    r = {k: v * inv for k, v in r.items()}
                piv[c] = r
                break
            f = r[c]
            for k, v in prow.items():
                nv = r.get(k)
                nv = -f * v if nv is None else nv - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    for c in sorted(piv, reverse=True):
        r = piv[c]
        for k in [k for k in r if k != c and k in piv]:
            f = r.pop(k)
            for kk, v in piv[k].items():
                if kk == k:
                    continue
                nv = r.get(kk)
                nv = -f * v if nv is None else nv - f * v
                if nv:
                    r[kk] = nv
                else:
                    r.pop(kk, None)
    return piv


def solve_combination(vectors, target, field):
    """Coefficients c with sum c_i vectors[i] = target, or None if none exist."""
    r = len(vectors)
    n = len(target)
    rows = [[vectors[i][j] for i in range(r)] + [target[j]] for j in range(n)]
    pivots = _rref_rows(rows, r + 1, field)
    if r in pivots:
        return None
    coeffs = [field.zero] * r
    for i, p in enumerate(pivots):
        coeffs[p] = rows[i][r]
    return coeffs
