"""Local decomposition of commutative operator algebras and eigenform classes."""

from __future__ import annotations

from .fields import PrimeField, RationalField, UnsupportedFieldError
from .hecke import HeckeAlgebra, primes_up_to
from .linalg import (
    Matrix,
    ShapeError,
    Subspace,
    kernel_basis,
    evaluate_poly,
    lift_subspace,
    minimal_polynomial,
    restrict_operator,
    solve_combination,
)
from .poly import Poly, make_extension, poly_factor


class CommutativityError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotLocalError(ValueError):
    pass


class PrimitiveElementError(RuntimeError):
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


def _check_commuting(ops):
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if ops[i] * ops[j] != ops[j] * ops[i]:
                raise CommutativityError(f"operators {i} and {j} do not commute", witness=(i, j))


def common_eigenspaces(ops, mode: str = "primary"):
    """Split the ambient space by the factors of each operator's minimal polynomial.

    Operators are consumed in the given order. In primary mode the pieces are
    kernels of p(T)^e and partition the space; in generalized mode they are
    kernels of p(T).
    """
    if mode not in ("primary", "generalized"):
        raise ValueError(f"unknown mode {mode!r}")
    ops = list(ops)
    if not ops:
        return []
    n = ops[0].nrows
    for m in ops:
        if not m.is_square() or m.nrows != n:
            raise ShapeError("operators must be square of equal size")
    _check_commuting(ops)
    F = ops[0].field
    pieces = [Subspace.full(F, n)]
    for op in ops:
        refined = []
        for W in pieces:
            if W.dim() == 0:
                continue
            R = restrict_operator(op, W)
            factors = poly_factor(minimal_polynomial(R))
            if mode == "primary" and len(factors) == 1:
                refined.append(W)
                continue
            for p, e in factors:
                q = p ** (e if mode == "primary" else 1)
                K = kernel_basis(evaluate_poly(q, R))
                refined.append(lift_subspace(K, W))
        pieces = refined
    return pieces


def idempotents_of(m: Matrix):
    """Complete set of orthogonal primitive idempotents of the algebra K[m]."""
    if not m.is_square():
        raise ShapeError("idempotents of a non-square matrix")
    F = m.field
    n = m.nrows
    ident = Matrix.identity(F, n)
    if n == 0:
        return []
    f = minimal_polynomial(m)
    x = Poly.x(F)
    out = []
    has_x = False
    for p, e in poly_factor(f):
        if p == x:
            has_x = True
            continue
        g = f // p**e
        m1 = evaluate_poly(g, m)
        h = minimal_polynomial(m1)
        while h.coeffs and not h.coeffs[0]:
            h = h // x
        h = h * (1 / h.coeffs[0])
        out.append(ident - evaluate_poly(h, m1))
    if has_x:
        total = ident
        for e_ in out:
            total = total - e_
        out.append(total)
    return out


class LocalFactor:
    """Invariant subspace on which each generator has prime-power minimal polynomial."""

    def __init__(self, subspace: Subspace, ops):
        self.subspace = subspace
        self.generators = [restrict_operator(op, subspace) for op in ops]
        self.field = subspace.field
        self._minpolys = None
        self.residue_modulus = None

    @property
    def dim(self):
        return self.subspace.dim()

    def minimal_factors(self):
        if self._minpolys is None:
            self._minpolys = [poly_factor(minimal_polynomial(a)) for a in self.generators]
        return self._minpolys

    def is_field(self) -> bool:
        """True when the maximal ideal is zero, i.e. the local algebra is its residue field."""
        return all(m.is_zero() for m in maximal_ideal(self))

    def algebra_dim(self) -> int:
        return len(self._algebra_basis())

    def residue_degree(self) -> int:
        basis = self._algebra_basis()
        return len(basis) - len(self._ideal_basis(basis))

    def _algebra_basis(self):
        """Vector space basis (matrices) of the algebra generated by the generators."""
        F = self.field
        d = self.dim
        ident = Matrix.identity(F, d)
        basis = [ident]
        span = Subspace(F, d * d, [ident.flatten()])
        frontier = [ident]
        while frontier:
            new = []
            for b in frontier:
                for a in self.generators:
                    c = b * a
                    v = c.flatten()
                    if v not in span:
                        span = Subspace(F, d * d, span.basis + [v])
                        basis.append(c)
                        new.append(c)
            frontier = new
        return basis

    def _ideal_basis(self, algebra_basis):
        F = self.field
        d = self.dim
        gens = maximal_ideal(self)
        vecs = [(b * g).flatten() for b in algebra_basis for g in gens]
        return Subspace(F, d * d, vecs).basis


def maximal_ideal(factor: LocalFactor):
    """Generators p_i(a_i) of the maximal ideal, p_i^e_i the minimal polynomial of a_i."""
    out = []
    for a, facs in zip(factor.generators, factor.minimal_factors()):
        if len(facs) != 1:
            raise NotLocalError("a generator has a minimal polynomial with several prime factors")
        out.append(evaluate_poly(facs[0][0], a))
    return out


class EigenformClass:
    """Galois conjugacy class of normalized eigenforms."""

    def __init__(self, base_field, modulus: Poly, residue_field, an, dim: int):
        self.base_field = base_field
        self.modulus = modulus
        self.residue_field = residue_field
        self.an = an
        self.dim = dim

    @property
    def degree(self) -> int:
        return self.modulus.degree()

    def coordinates(self, n: int):
        """a_n as coordinates in the power basis of the residue field."""
        x = self.an[n - 1]
        if self.degree == 1:
            return [x]
        return list(x.c)

    def to_json(self):
        F = self.base_field
        return {
            "modulus": [F.format(c) for c in self.modulus.coeffs],
            "degree": self.degree,
            "an": [[F.format(c) for c in self.coordinates(n)] for n in range(1, len(self.an) + 1)],
        }

    def __repr__(self):
        return f"EigenformClass(degree={self.degree}, modulus={self.modulus})"


def _primitive_element(factor: LocalFactor, degree: int, max_trials: int = 100):
    gens = factor.generators
    F = factor.field
    ident = Matrix.identity(F, factor.dim)
    candidates = [(a, (i,)) for i, a in enumerate(gens)]
    c = 1
    while len(candidates) < max_trials:
        added = False
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                candidates.append((gens[i] + gens[j].scale(c), (i, j, c)))
                added = True
        if not added:
            break
        c += 1
    if not gens:
        candidates = [(ident, ())]
    for a, _label in candidates[:max_trials]:
        facs = poly_factor(minimal_polynomial(a))
        if len(facs) == 1 and facs[0][0].degree() == degree:
            return a, facs[0][0]
    raise PrimitiveElementError(
        f"no primitive element found in {max_trials} trials", factor=factor
    )


def eigenform_classes(alg: HeckeAlgebra, precision: int):
    """Galois classes of normalized eigenforms with a_1..a_P in their residue fields."""
    F = alg.field
    if not isinstance(F, (RationalField, PrimeField)):
        raise UnsupportedFieldError("decomposition needs base field Q or F_p")
    if alg.size == 0:
        return []
    primes = primes_up_to(alg.bound)
    ops = [alg.operator(p) for p in primes]
    pieces = common_eigenspaces(ops, "primary") if ops else [Subspace.full(F, alg.size)]
    classes = []
    tn = [alg.operator(n) for n in range(1, precision + 1)]
    for W in pieces:
        factor = LocalFactor(W, ops)
        abasis = factor._algebra_basis()
        ideal = factor._ideal_basis(abasis)
        degree = len(abasis) - len(ideal)
        a, modulus = _primitive_element(factor, degree)
        factor.residue_modulus = modulus
        residue = F if degree == 1 else make_extension(F, modulus)
        powers = [Matrix.identity(F, factor.dim)]
        for _ in range(1, degree):
            powers.append(powers[-1] * a)
        vecs = [p.flatten() for p in powers] + list(ideal)
        an = []
        for t in tn:
            coeffs = solve_combination(vecs, restrict_operator(t, W).flatten(), F)
            if coeffs is None:
                raise AssertionError("Hecke operator outside the local algebra")
            c = coeffs[:degree]
            an.append(c[0] if degree == 1 else residue(c))
        classes.append(EigenformClass(F, modulus, residue, an, W.dim()))
    return classes
