import random
from math import gcd

import pytest

from modsym.fields import QQ, PrimeField
from modsym.level import Cusp, char_group
from modsym.linalg import Matrix
from modsym.manin import (
    ETA,
    IDENTITY,
    SIGMA,
    TAU,
    DeterminantError,
    ModularSymbolPath,
    ParityError,
    T,
    UnsupportedCharacteristicError,
    WeightModule,
    action_matrix,
    build_space,
    mat_mul,
    psl2_word,
    word_product,
)
from modsym.oracle import dim_cuspforms

from oracles import act_on_cusp

NEG = ((-1, 0), (0, -1))

# spaces with nontrivial characters over a field containing their values
F13 = PrimeField(13)
CHAR_SPACES = [
    (13, 2, char_group(13, F13)[2], F13),
    (13, 3, char_group(13, F13)[1], F13),
    (9, 2, char_group(9, F13)[2], F13),
    (5, 2, char_group(5, QQ)[1], QQ),
    (4, 3, char_group(4, QQ)[1], QQ),
]


def space_params():
    out = [(11, 2, None, QQ), (1, 12, None, QQ), (2, 8, None, QQ), (15, 2, None, QQ), (12, 4, None, QQ),
           (11, 2, None, PrimeField(5))]
    return out + CHAR_SPACES


def _id(p):
    return f"N{p[0]}k{p[1]}{'chi' if p[2] is not None else ''}{p[3]!r}"


# ------------------------------------------------------------ generators


def test_generator_matrix_identities():
    assert mat_mul(SIGMA, SIGMA) == NEG
    # tau has order 3 in SL_2(Z) itself, hence also in PSL_2(Z)
    assert mat_mul(mat_mul(TAU, TAU), TAU) == IDENTITY
    assert mat_mul(TAU, TAU) not in (IDENTITY, NEG)
    assert mat_mul(TAU, SIGMA) == T
    assert mat_mul(ETA, ETA) == IDENTITY


def test_weight_module_action_is_compatible():
    rng = random.Random(0)
    for _ in range(100):
        n = rng.randint(0, 6)
        g, h = (((rng.randint(-4, 4), rng.randint(-4, 4)), (rng.randint(-4, 4), rng.randint(-4, 4))) for _ in range(2))
        W = WeightModule(n + 2, QQ)
        assert W.matrix(mat_mul(g, h)) == W.matrix(g) * W.matrix(h)
        assert W.matrix(IDENTITY) == Matrix.identity(QQ, n + 1)


def test_weight_module_is_degree_preserving_substitution():
    # (g.P)(X, Y) = P(aX + cY, bX + dY); check on X^2 with g = [[1, 2], [3, 4]]: (X + 3Y)^2
    A = action_matrix(((1, 2), (3, 4)), 2)
    col = [A[j][2] for j in range(3)]
    assert col == [9, 6, 1]


# --------------------------------------------------------------- build


def test_build_space_examples():
    assert build_space(11, 2).dim == 3
    assert build_space(1, 12).dim == 3
    assert build_space(11, 2, field=PrimeField(5)).dim == 3


def test_parity_error():
    with pytest.raises(ParityError):
        build_space(11, 3)
    with pytest.raises(ParityError):
        build_space(5, 2, char_group(5, F13)[1], F13)


@pytest.mark.parametrize("p", [2, 3])
def test_small_characteristic_rejected(p):
    with pytest.raises(UnsupportedCharacteristicError):
        build_space(11, 2, field=PrimeField(p))


@pytest.mark.parametrize("params", space_params(), ids=_id)
def test_relations_vanish_in_quotient(params):
    S = build_space(*params)
    for row in S.relations():
        assert all(x == S.field.zero for x in S.reduce(row))


@pytest.mark.parametrize("params", space_params(), ids=_id)
def test_boundary_kills_every_relation(params):
    S = build_space(*params)
    F = S.field
    bnd = [S.generator_boundary(g) for g in range(S.ngens)]
    for row in S.relations():
        total = [F.zero] * S.boundary_dim
        for g, v in row.items():
            total = [t + v * b for t, b in zip(total, bnd[g])]
        assert all(t == F.zero for t in total)


@pytest.mark.parametrize("params", space_params(), ids=_id)
def test_eta_involution_and_sign_split(params):
    S = build_space(*params)
    E = S.eta_matrix()
    assert E * E == Matrix.identity(S.field, S.dim)
    d = S.dimensions()
    assert d["dim_plus"] + d["dim_minus"] == d["dim_cuspidal"]


@pytest.mark.parametrize("params", space_params(), ids=_id)
def test_cuspidal_rank_identity(params):
    from modsym.linalg import rank

    S = build_space(*params)
    assert S.cuspidal_subspace().dim() + rank(S.boundary_matrix()) == S.dim


def test_dimension_examples():
    d = build_space(11, 2).dimensions()
    assert (d["dim_full"], d["dim_cuspidal"], d["dim_eisenstein"], d["dim_plus"], d["dim_minus"]) == (3, 2, 1, 1, 1)
    assert build_space(1, 12).cuspidal_subspace().dim() == 2
    assert build_space(1, 12).plus_subspace().dim() == 1
    assert build_space(1, 2).cuspidal_subspace().dim() == 0


def test_full_dimension_is_eisenstein_plus_twice_cusp():
    # dim M_k = dim S_k + (number of cusps) for k >= 4, and one less for k = 2
    from modsym.oracle import elliptic_and_cusp_counts

    for N in range(1, 21):
        c = elliptic_and_cusp_counts(N)[2]
        for k in (2, 4):
            S = build_space(N, k)
            eis = c - 1 if k == 2 else c
            assert S.dim == 2 * dim_cuspforms(N, k) + eis


# ------------------------------------------------------------- psl2_word


def test_psl2_word_examples():
    assert psl2_word(IDENTITY) == []
    assert psl2_word(SIGMA) == ["S"]
    assert psl2_word(((1, 0), (1, 1))) == [("T", 1), "S", ("T", 1)]
    with pytest.raises(DeterminantError):
        psl2_word(((2, 0), (0, 1)))


def _same_up_to_sign(a, b):
    return a == b or a == mat_mul(NEG, b)


def test_psl2_word_roundtrip_random():
    rng = random.Random(42)
    for _ in range(1000):
        word = []
        for _ in range(rng.randint(0, 40)):
            word.append("S" if rng.random() < 0.5 else ("T", rng.randint(-5, 5)))
        m = word_product(word)
        out = psl2_word(m)
        assert _same_up_to_sign(word_product(out), m)
        # atoms alternate between sigma and nonzero powers of T
        for a, b in zip(out, out[1:]):
            assert (a == "S") != (b == "S")
        assert all(a == "S" or a[1] != 0 for a in out)


# -------------------------------------------------------- modular symbols


def test_modular_symbol_examples():
    S = build_space(11, 2)
    F = S.field
    assert S.modular_to_vector(ModularSymbolPath(Cusp.infinity(), Cusp.infinity(), [1])) == [F.zero] * 3
    zero_inf = S.modular_to_vector(ModularSymbolPath(Cusp(0), Cusp.infinity(), [1]))
    assert zero_inf == S.reduce({S.gen_index(S.p1.index(0, 1), 0): F.one})
    zero_one = S.modular_to_vector(ModularSymbolPath(Cusp(0), Cusp(1), [1]))
    assert zero_one == S.reduce({S.gen_index(S.p1.index(1, 1), 0): F.one})


def test_boundary_examples():
    S = build_space(11, 2)
    B = S.boundary_matrix()
    v = S.modular_to_vector(ModularSymbolPath(Cusp(0), Cusp.infinity(), [1]))
    assert [str(x) for x in B.apply(v)] == ["1", "-1"]
    w = S.modular_to_vector(ModularSymbolPath(Cusp(0), Cusp(1), [1]))
    assert all(x == 0 for x in B.apply(w))
    # a single cusp class at level 1: boundary rank at most 1; for weight 2 the space is 0
    from modsym.linalg import rank

    S1 = build_space(1, 12)
    assert S1.boundary_dim == 1 and rank(S1.boundary_matrix()) <= 1
    assert build_space(1, 2).dim == 0


def _random_cusp(rng):
    if rng.random() < 0.1:
        return Cusp.infinity()
    c = rng.randint(1, 60)
    a = rng.randint(-100, 100)
    while gcd(a, c) != 1:
        a += 1
    return Cusp(a, c)


@pytest.mark.parametrize("params", space_params(), ids=_id)
def test_three_term_relation(params):
    S = build_space(*params)
    F = S.field
    rng = random.Random(9)
    for _ in range(100):
        a, b, c = (_random_cusp(rng) for _ in range(3))
        P = [F(rng.randint(-3, 3)) for _ in range(S.n + 1)]
        total = [F.zero] * S.dim
        for x, y in ((a, b), (b, c), (c, a)):
            v = S.modular_to_vector(ModularSymbolPath(x, y, P))
            total = [s + t for s, t in zip(total, v)]
        assert all(t == F.zero for t in total)


def _random_gamma0(N, rng):
    while True:
        c = N * rng.randint(-5, 5)
        d = rng.randint(-30, 30)
        if gcd(c, d) != 1:
            continue
        # a d - b c = 1
        from modsym.level import _xgcd

        g, x, y = _xgcd(d, c)
        x, y = x * g, y * g
        m = ((x, -y), (c, d))
        assert m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1
        return m


@pytest.mark.parametrize("params", space_params(), ids=_id)
def test_gamma0_invariance_of_symbols(params):
    """gamma.({a, b} (x) P) equals chi(d_gamma) {a, b} (x) P in the quotient."""
    S = build_space(*params)
    F = S.field
    W = WeightModule(S.k, F)
    rng = random.Random(10)
    for _ in range(40):
        g = _random_gamma0(S.N, rng)
        a, b = _random_cusp(rng), _random_cusp(rng)
        P = [F(rng.randint(-3, 3)) for _ in range(S.n + 1)]
        left = S.modular_to_vector(
            ModularSymbolPath(Cusp(*act_on_cusp(g, a.a, a.c)), Cusp(*act_on_cusp(g, b.a, b.c)), W.act(g, P))
        )
        right = [S.chi(g[1][1]) * x for x in S.modular_to_vector(ModularSymbolPath(a, b, P))]
        assert left == right


def test_plus_space_matches_oracle_small_levels():
    for N in range(1, 21):
        for k in (2, 4):
            assert build_space(N, k).plus_subspace().dim() == dim_cuspforms(N, k)
