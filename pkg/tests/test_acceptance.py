"""Acceptance suite; a summary line per criterion is printed at the end of the run."""

import random
from collections import Counter

import pytest

from uq_adjoint.cyclotomic import field
from uq_adjoint.decomp import (
    ad_candidates,
    casimir_block_filtration,
    decompose,
    decompose_N_j,
    is_isomorphic_by_blocks,
)
from uq_adjoint.modcat import (
    ModuleLabel,
    block_indices,
    dual,
    is_isomorphic,
    is_morphism,
    map_is_invertible,
    projective,
    simple,
    verma,
)
from uq_adjoint.smallqg import small_quantum_group
from uq_adjoint.verify import (
    _alternating,
    build_A,
    build_Aprime,
    corank,
    d_vanishing_blocks,
    expected_multiplicities,
    machine_A,
    quantum_integer_signs,
    run_verification,
    sign_twist,
)
from uq_adjoint.linalg import Matrix

from helpers import random_sum, scramble

LS = [3, 5, 7]
P = lambda lam: ModuleLabel("P", lam)
L = lambda lam: ModuleLabel("L", lam)


def crit(n, title):
    return pytest.mark.criterion(n, title)


@crit(1, "decomposition of ad")
@pytest.mark.parametrize("l", LS)
def test_main_theorem(l):
    U = small_quantum_group(l)
    d = decompose(U.adjoint_rep())
    assert d.summands == expected_multiplicities(l).entries
    assert d.verify()


@crit(2, "dimensions of u and its weight spaces")
@pytest.mark.parametrize("l", LS)
def test_dimensions(l):
    U = small_quantum_group(l)
    assert U.dim == l ** 3 == len(U.basis())
    ad = U.adjoint_rep()
    assert {w // 2: ad.d(w) for w in ad.dims} == {m: l * (l - abs(m)) for m in range(1 - l, l)}


@crit(3, "Casimir equation and centrality")
@pytest.mark.parametrize("l", LS)
def test_casimir(l):
    U = small_quantum_group(l)
    K, X = U.K, U.casimir()
    prod = U.one()
    for j in range(l):
        prod = prod * (X - U.scalar(K.casimir_root(j)))
    assert prod == U.zero()
    for m in U.basis():
        x = U.monomial(*m)
        assert X * x == x * X, m


@crit(4, "block and filtration dimensions")
@pytest.mark.parametrize("l", LS)
def test_block_dimensions(l):
    U = small_quantum_group(l)
    for bi in block_indices(U.K):
        f = casimir_block_filtration(U, bi.j)
        if bi.j == -1:
            assert f.block.dim == l * l
            continue
        J, Jp = bi.J, bi.J_prime
        assert f.block.dim == 2 * l * l
        assert f.dim_N() == (J + 1) ** 2 + (Jp + 1) ** 2
        assert f.dim_M() - f.dim_N() == 4 * (J + 1) * (Jp + 1)


def _expected_N(l, J):
    e = Counter({L(2 * i): 2 for i in range(J + 1)})
    e.update(P(2 * i) for i in range(J + 1, (l - 1) // 2))
    e[P(l - 1)] += 1  # L(l-1) is projective
    return e


@crit(5, "N_j and the Steinberg block")
@pytest.mark.parametrize("l", LS)
def test_N_j(l):
    U = small_quantum_group(l)
    for bi in block_indices(U.K):
        if bi.j >= 0:
            assert decompose_N_j(U, bi.j).summands == _expected_N(l, bi.J), bi.j
    st = casimir_block_filtration(U, -1).block
    assert decompose(st, ad_candidates(U.K)).summands == Counter(P(2 * i) for i in range((l + 1) // 2))


@crit(6, "matrix cross-validation")
@pytest.mark.parametrize("l", LS)
def test_A_matrix_up_to_basis_signs(l):
    U = small_quantum_group(l)
    for bi in block_indices(U.K):
        assert sign_twist(machine_A(U, bi.j), _alternating(l)) == build_A(U.K, bi.j).entries


@crit(6, "matrix cross-validation")
@pytest.mark.xfail(strict=True, reason=(
    "literal entrywise A(j): the subdiagonal (q^i-q^-i)^2 b_j has the opposite sign in the basis "
    "(X-b_j) pr_j K^i; equality holds after v_i -> (-1)^i v_i (see decisions ledger)"))
@pytest.mark.parametrize("l", LS)
def test_A_matrix_literal(l):
    U = small_quantum_group(l)
    for bi in block_indices(U.K):
        assert machine_A(U, bi.j) == build_A(U.K, bi.j).entries, bi.j


@crit(6, "matrix cross-validation")
@pytest.mark.parametrize("l", LS)
def test_Aprime_corank_and_d(l):
    K = field(l)
    for bi in block_indices(K):
        if bi.j < 0:
            continue
        Ap = build_Aprime(K, bi.j).entries
        for k in range(0, l - 1, 2):
            c = corank(Ap - Matrix.scalar(K, 2 * l, K.casimir_root(k)))
            assert (c == 3) == (k <= 2 * bi.J)
    for k in range(0, l - 1, 2):
        assert len(d_vanishing_blocks(K, k)) == (l - 1 - k) // 2


def _constructed_modules(U):
    K, l = U.K, U.l
    mods = [U.adjoint_rep(), dual(U.adjoint_rep())]
    for lam in range(-l, 2 * l):
        mods += [simple(K, lam), projective(K, lam), verma(K, lam), verma(K, lam, "raising"), dual(projective(K, lam))]
    for bi in block_indices(K):
        f = casimir_block_filtration(U, bi.j)
        mods += [f.block, f.N_module(), f.M_module()]
    return mods


@crit(7, "Hopf axioms, module invariants, roundtrip")
@pytest.mark.parametrize("l", LS)
def test_hopf_and_invariants(l):
    U = small_quantum_group(l)
    rep = run_verification(l, ["algebra"])
    assert rep.passed, rep.to_text()
    for M in _constructed_modules(U):
        assert M.check_invariants() == [], M.name


@crit(7, "Hopf axioms, module invariants, roundtrip")
def test_roundtrip_200():
    rng = random.Random(2024)
    cases = 0
    for n in range(200):
        K = field(rng.choice(LS))
        M, labels = random_sum(K, rng, max_dim=60)
        assert M.dim <= 60
        if n % 2:
            M = scramble(M, rng)
        d = decompose(M)
        assert d.summands == labels, (K.l, n)
        cases += 1
    assert cases >= 200


@crit(8, "autoduality of ad")
@pytest.mark.parametrize("l", [3, 5])
def test_autoduality(l):
    ad = small_quantum_group(l).adjoint_rep()
    D = dual(ad)
    ok, phi = is_isomorphic_by_blocks(D, ad)
    assert ok and is_morphism(phi, D, ad) and map_is_invertible(phi)


@crit(8, "autoduality of ad")
def test_autoduality_direct_l3():
    ad = small_quantum_group(3).adjoint_rep()
    ok, phi = is_isomorphic(dual(ad), ad)
    assert ok and map_is_invertible(phi)


@crit(9, "sign of quantum integers")
@pytest.mark.parametrize("l", LS)
def test_sign_lemma(l):
    signs = quantum_integer_signs(field(l))
    assert sorted(signs) == list(range(1, l))
    assert all((s > 0) == (t % 2 == 1) for t, s in signs.items())
