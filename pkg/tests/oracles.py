"""Brute-force reference computations used by the tests.

These deliberately avoid the package's own algorithms.
"""

from itertools import product
from math import gcd


def brute_p1_orbits(N):
    """Orbits of pairs generating Z/N under unit scaling."""
    units = [a for a in range(N) if gcd(a, N) == 1] if N > 1 else [0]
    seen = set()
    orbits = []
    for u, v in product(range(N), repeat=2):
        if gcd(gcd(u, v), N) != 1 or (u, v) in seen:
            continue
        orb = {(a * u % N, a * v % N) for a in units}
        seen |= orb
        orbits.append(orb)
    return orbits


def mat_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def gamma0_elements(N, max_len):
    """Elements of Gamma_0(N) reached by words in S, T, T^-1 of length <= max_len."""
    gens = [((0, -1), (1, 0)), ((1, 1), (0, 1)), ((1, -1), (0, 1))]
    frontier = {((1, 0), (0, 1))}
    seen = set(frontier)
    for _ in range(max_len):
        nxt = set()
        for m in frontier:
            for g in gens:
                x = mat_mul(m, g)
                if x not in seen:
                    seen.add(x)
                    nxt.add(x)
        frontier = nxt
    return [m for m in seen if m[1][0] % N == 0]


def act_on_cusp(m, a, c):
    x, y = m[0][0] * a + m[0][1] * c, m[1][0] * a + m[1][1] * c
    g = gcd(x, y)
    x, y = x // g, y // g
    if y < 0 or (y == 0 and x < 0):
        x, y = -x, -y
    return x, y


def cusps_with_denominator_at_most(B):
    out = {(1, 0)}
    for c in range(1, B + 1):
        for a in range(-c, c + 1):
            if gcd(a, c) == 1:
                out.add((a, c))
    return sorted(out)


def brute_roots_mod_p(coeffs, p):
    """Roots in F_p of sum coeffs[i] x^i."""
    return [x for x in range(p) if sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p == 0]


def det_int(m):
    """Integer determinant by cofactor expansion (small matrices only)."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * m[0][j] * det_int(minor)
    return total


def ramanujan_tau_table(P):
    """tau(n) for n < P from the product q prod (1 - q^n)^24, naive multiplication."""
    series = [1] + [0] * (P - 1)
    for n in range(1, P):
        for _ in range(24):
            for i in range(P - 1, n - 1, -1):
                series[i] -= series[i - n]
    return [0] + series[: P - 1]
