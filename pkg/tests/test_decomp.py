import random
from collections import Counter

import pytest

from uq_adjoint.cyclotomic import field
from uq_adjoint.decomp import (
    UnidentifiedSummand,
    ad_candidates,
    casimir_block_filtration,
    decompose,
    decompose_N_j,
    default_candidates,
    endomorphism_algebra,
    fitting_split,
    is_indecomposable,
    is_isomorphic_by_blocks,
    is_semisimple_matrix,
    radical,
)
from uq_adjoint.linalg import Matrix
from uq_adjoint.modcat import (
    ModuleLabel,
    compose,
    composition_multiplicities,
    direct_sum,
    dual,
    is_morphism,
    projective,
    simple,
)

from helpers import random_sum, scramble

P = lambda lam: ModuleLabel("P", lam)
L = lambda lam: ModuleLabel("L", lam)


def test_endomorphism_algebras(K3):
    for lam in range(-3, 6):
        A = endomorphism_algebra(simple(K3, lam))
        assert A.dim == 1 and radical(A) == []
    S, _, _ = direct_sum([simple(K3, 0), simple(K3, 0)])
    assert endomorphism_algebra(S).dim == 4
    A = endomorphism_algebra(projective(K3, 0))
    assert A.dim == 2 and A.is_closed() and A.contains_identity()
    assert len(radical(A)) == 1
    T, _, _ = direct_sum([simple(K3, 0), simple(K3, 4)])
    assert radical(endomorphism_algebra(T)) == []


def test_quotient_by_radical_is_semisimple(K3):
    S, _, _ = direct_sum([projective(K3, 0), projective(K3, 0), simple(K3, 0)])
    A = endomorphism_algebra(S)
    rad = radical(A)
    # End(P(0)^2 + L(0)) / J = M_2 x k, dimension 5
    assert A.dim - len(rad) == 5


def test_is_indecomposable(K3, K5):
    assert is_indecomposable(simple(K3, 1))
    assert is_indecomposable(projective(K3, 0))
    assert is_indecomposable(projective(K5, 7))
    S, _, _ = direct_sum([simple(K3, 0), simple(K3, 0)])
    assert not is_indecomposable(S)


def test_fitting_split(K3):
    S, inj, pr = direct_sum([simple(K3, 0), simple(K3, 4)])
    ker, im = fitting_split(S, compose(inj[0], pr[0]))
    assert (ker.dim, im.dim) == (2, 1)
    Pm = projective(K3, 0)
    assert fitting_split(Pm, Pm.identity()) is None
    for r in radical(endomorphism_algebra(Pm)):
        assert fitting_split(Pm, r) is None


def test_decompose_small(K3):
    S, _, _ = direct_sum([simple(K3, 0), projective(K3, 0)])
    d = decompose(S)
    assert d.summands == Counter({L(0): 1, P(0): 1})
    assert d.verify()
    assert d.to_json() == [{"kind": "L", "weight": 0, "multiplicity": 1},
                           {"kind": "P", "weight": 0, "multiplicity": 1}]


def test_unidentified_summand(K3):
    S, _, _ = direct_sum([simple(K3, 0), projective(K3, 0)])
    with pytest.raises(UnidentifiedSummand) as info:
        decompose(S, candidates=[(L(0), simple(K3, 0))])
    assert info.value.dim == 6


@pytest.mark.parametrize("seed", range(12))
def test_roundtrip_scrambled(seed):
    rng = random.Random(seed)
    K = field(rng.choice([3, 5]))
    M, labels = random_sum(K, rng, max_dim=40)
    M = scramble(M, rng)
    d = decompose(M)
    assert d.summands == labels
    assert d.verify()
    assert d.implied_composition() == composition_multiplicities(M)


def test_filtration_l5(U5):
    f = casimir_block_filtration(U5, 1)
    assert f.dim_N() == 13
    assert f.dim_M() - f.dim_N() == 4 * 2 * 3
    assert f.is_nested()
    assert f.M_module().check_invariants() == []
    f0 = casimir_block_filtration(U5, 0)
    assert f0.dim_N() == 1 + 16
    st = casimir_block_filtration(U5, -1)
    assert st.dim_N() == st.block.dim == 25


def test_decompose_N_j_l5(U5):
    assert decompose_N_j(U5, 1).summands == Counter({L(0): 2, L(2): 2, P(4): 1})
    d0 = decompose_N_j(U5, 0)
    assert d0.summands == Counter({L(0): 2, P(2): 1, P(4): 1})
    assert d0.total_dim() == 17


def test_ad_block_decomposition_l3(U3):
    f = casimir_block_filtration(U3, -1)
    d = decompose(f.block, ad_candidates(U3.K))
    assert d.summands == Counter({P(0): 1, P(2): 1})


def test_blockwise_isomorphism(U3):
    ad = U3.adjoint_rep()
    ok, phi = is_isomorphic_by_blocks(dual(ad), ad)
    assert ok and is_morphism(phi, dual(ad), ad)
    ok, _ = is_isomorphic_by_blocks(simple(U3.K, 0), simple(U3.K, 2))
    assert not ok


def test_semisimple_matrix(K3):
    D = Matrix.from_values(K3, [[1, -2, 0], [-1, 0, -3], [0, -1, 2]])
    assert is_semisimple_matrix(D)
    J = Matrix.from_values(K3, [[1, 1], [0, 1]])
    assert not is_semisimple_matrix(J)


def test_default_candidates_cover_character(K5):
    M = projective(K5, 1)
    labels = {lab for lab, _ in default_candidates(M)}
    assert P(1) in labels and L(1) in labels
