"""Independent checks: integer power series, eta quotients and dimension formulas.

Nothing here imports the symbol engine.
"""

from __future__ import annotations

from math import gcd


class OracleError(ValueError):
    pass


class IntSeries:
    """c_0 + c_1 q + ... + c_{P-1} q^{P-1} + O(q^P)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, precision: int | None = None):
        coeffs = [int(c) for c in coeffs]
        if precision is not None:
            coeffs = (coeffs + [0] * precision)[:precision]
        self.coeffs = coeffs

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __eq__(self, other):
        return isinstance(other, IntSeries) and self.coeffs == other.coeffs

    def __repr__(self):
        terms = [f"{c}q^{i}" for i, c in enumerate(self.coeffs) if c]
        return (" + ".join(terms) or "0") + f" + O(q^{self.precision})"


def series_mul(a: IntSeries, b: IntSeries) -> IntSeries:
    P = min(a.precision, b.precision)
    out = [0] * P
    for i in range(P):
        x = a.coeffs[i]
        if x:
            for j in range(P - i):
                y = b.coeffs[j]
                if y:
                    out[i + j] += x * y
    return IntSeries(out)


def _euler_power(d: int, r: int, P: int) -> IntSeries:
    """prod_{n>=1} (1 - q^{dn})^r to precision P, for any integer r."""
    out = [0] * P
    out[0] = 1
    e = abs(r)
    for n in range(1, (P - 1) // d + 1):
        step = d * n
        for _ in range(e):
            if r > 0:
                # multiply by (1 - q^step)
                for i in range(P - 1, step - 1, -1):
                    out[i] -= out[i - step]
            else:
                # multiply by 1/(1 - q^step)
                for i in range(step, P):
                    out[i] += out[i - step]
    return IntSeries(out)


def eta_quotient(exponents: dict, precision: int) -> IntSeries:
    """Coefficients of q^{s} prod_d prod_n (1 - q^{dn})^{r_d} at q^0..q^{precision},
    where s = sum d r_d / 24 (index n holds the coefficient of q^n)."""
    total = sum(d * r for d, r in exponents.items())
    if total % 24:
        raise OracleError("sum of d * r_d must be divisible by 24")
    shift = total // 24
    if shift < 0:
        raise OracleError("eta quotient has a pole at infinity")
    P = precision + 1
    inner = P - shift
    acc = IntSeries([1], inner) if inner > 0 else IntSeries([])
    if inner > 0:
        for d, r in sorted(exponents.items()):
            if r:
                acc = series_mul(acc, _euler_power(d, r, inner))
    return IntSeries([0] * shift + acc.coeffs, P)


def _prime_factors(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def index_mu(N: int) -> int:
    if N < 1:
        raise OracleError("level must be positive")
    mu = N
    for p in _prime_factors(N):
        mu = mu // p * (p + 1)
    return mu


def _kronecker_minus4(p: int) -> int:
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def _kronecker_minus3(p: int) -> int:
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


def _phi(n: int) -> int:
    r = n
    for p in _prime_factors(n):
        r = r // p * (p - 1)
    return r


def elliptic_and_cusp_counts(N: int):
    nu2 = 0 if N % 4 == 0 else 1
    nu3 = 0 if N % 9 == 0 else 1
    for p in _prime_factors(N):
        if nu2:
            nu2 *= 1 + _kronecker_minus4(p)
        if nu3:
            nu3 *= 1 + _kronecker_minus3(p)
    nucusps = sum(_phi(gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0)
    return nu2, nu3, nucusps


def dim_cuspforms(N: int, k: int) -> int:
    """dim S_k(Gamma_0(N)) for even k >= 2, trivial character."""
    if k % 2 or k < 2:
        raise OracleError("only even weights k >= 2 are supported")
    mu = index_mu(N)
    nu2, nu3, c = elliptic_and_cusp_counts(N)
    # 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 c
    g12 = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * c
    if g12 % 12:
        raise AssertionError("genus formula gave a non-integer")
    g = g12 // 12
    if k == 2:
        return g
    return (k - 1) * (g - 1) + (k // 2 - 1) * c + nu2 * (k // 4) + nu3 * (k // 3)
