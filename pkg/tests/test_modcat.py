import random
from collections import Counter

import pytest

from uq_adjoint.cyclotomic import field
from uq_adjoint.linalg import Matrix, Subspace
from uq_adjoint.modcat import (
    GradedModule,
    Inconclusive,
    ModuleLabel,
    NegativeMultiplicity,
    block_indices,
    block_of_weight,
    canonical_label,
    composition_multiplicities,
    compose,
    direct_sum,
    dual,
    hom_space,
    is_isomorphic,
    is_morphism,
    label_dim,
    projective,
    simple,
    simple_character,
    singular_vectors,
    verma,
)

L = lambda lam: ModuleLabel("L", lam)


@pytest.mark.parametrize("l", [3, 5, 7])
def test_constructions_satisfy_invariants(l):
    K = field(l)
    for lam in range(-l, 2 * l):
        for M in (verma(K, lam), verma(K, lam, "raising"), simple(K, lam), projective(K, lam)):
            assert M.check_invariants() == [], M.name


@pytest.mark.parametrize("l", [3, 5])
def test_dimensions(l):
    K = field(l)
    for lam in range(-l, 2 * l):
        assert verma(K, lam).dim == l
        assert simple(K, lam).dim == lam % l + 1
        assert projective(K, lam).dim == (l if lam % l == l - 1 else 2 * l)
        assert label_dim(ModuleLabel("P", lam), l) == projective(K, lam).dim
    assert simple(K, l - 1).dim == l


def test_verma_examples(K3):
    M = verma(K3, 0)
    assert not any(M.act_E(0, [K3.one]))
    assert not any(M.act_E(-2, [K3.one]))  # v_1 is upper singular in M^-(0)
    assert len(singular_vectors(M, 0, "upper")) == 1


def test_simple_examples(K3):
    S = simple(K3, 4)
    assert S.dims == {4: 1, 2: 1}
    L0 = simple(K3, 0)
    assert L0.dims == {0: 1} and not L0.E and not L0.F


def test_projective_examples(K3):
    assert projective(K3, 2).dims == simple(K3, 2).dims
    assert composition_multiplicities(projective(K3, 0)) == Counter({L(0): 2, L(-2): 1, L(4): 1})
    K5 = field(5)
    assert composition_multiplicities(projective(K5, 0)) == Counter({L(0): 2, L(-2): 1, L(8): 1})


@pytest.mark.parametrize("l", [3, 5])
def test_casimir_scalar_and_nonsemisimple(l):
    K = field(l)
    for lam in range(0, 2 * l):
        b = K.casimir_root(lam)
        for M in (simple(K, lam), verma(K, lam)):
            for w in M.dims:
                assert M.casimir_block(w) == Matrix.scalar(K, M.d(w), b)
        P = projective(K, lam)
        semisimple = all((P.casimir_block(w) - Matrix.scalar(K, P.d(w), b)).is_zero() for w in P.dims)
        assert semisimple == (lam % l == l - 1)


def test_shift_by_2l(K5):
    for lam in range(0, 5):
        P = projective(K5, lam)
        Q = projective(K5, lam + 10)
        assert {w + 10: d for w, d in P.dims.items()} == Q.dims


def test_block_labels(K5):
    bis = block_indices(K5)
    assert [b.j for b in bis] == [-1, 0, 1]
    for b in bis[1:]:
        assert simple(K5, b.J).dim + simple(K5, b.J_prime).dim == 5
    assert block_of_weight(K5, 4) == -1
    assert block_of_weight(K5, 3) == 0 and block_of_weight(K5, 8) == 0


def test_dual(K5):
    for lam in range(-5, 10):
        S = simple(K5, lam)
        assert is_isomorphic(dual(S), S)[0]
        P = projective(K5, lam)
        assert dual(P).dims == P.dims
        assert dual(P).check_invariants() == []
        assert is_isomorphic(dual(dual(P)), P)[0]


def test_hom_spaces(K3):
    for lam in range(0, 6):
        assert len(hom_space(simple(K3, lam), projective(K3, lam))) == 1
        for mu in range(0, 6):
            assert len(hom_space(simple(K3, lam), simple(K3, mu))) == (1 if lam == mu else 0)
    assert len(hom_space(projective(K3, 0), projective(K3, 0))) == 2
    P = projective(K3, 1)
    for f in hom_space(P, P):
        assert is_morphism(f, P, P)


def test_is_isomorphic_examples(K3):
    P = projective(K3, 0)
    ok, phi = is_isomorphic(P, P)
    assert ok and is_morphism(phi, P, P)
    assert is_isomorphic(simple(K3, 0), simple(K3, 2)) == (False, None)
    # same character, different modules
    S, _, _ = direct_sum([simple(K3, 0), simple(K3, 0), simple(K3, 4), simple(K3, -2)])
    assert S.dims == P.dims
    assert not is_isomorphic(S, P)[0]


def test_composition_multiplicities(K3, U3):
    assert composition_multiplicities(simple(K3, 4)) == Counter({L(4): 1})
    comp = composition_multiplicities(U3.adjoint_rep())
    assert sum(m * label_dim(lab, 3) for lab, m in comp.items()) == 27
    with pytest.raises(NegativeMultiplicity):
        composition_multiplicities({0: 1, 2: 1}, 3)
    with pytest.raises(ValueError):
        composition_multiplicities({0: 1})


def test_submodule_and_quotient(K3):
    P = projective(K3, 0)
    soc = P.generated_submodule(0, singular_vectors(P, 0, "upper")[:1])
    assert P.is_submodule(soc)
    sub, incl, _ = P.submodule(soc)
    assert sub.check_invariants() == [] and is_morphism(incl, sub, P)
    quo, proj = P.quotient(soc)
    assert quo.dim + sub.dim == P.dim
    assert is_morphism(proj, P, quo)
    assert not map_is_zero_after(incl, proj)


def map_is_zero_after(incl, proj):
    return not all(m.is_zero() for m in compose(proj, incl).values())


def test_json_roundtrip(K5):
    P = projective(K5, 2)
    Q = GradedModule.from_json(P.to_json())
    assert Q.dims == P.dims
    for w in P.dims:
        assert Q.E_block(w) == P.E_block(w) and Q.F_block(w) == P.F_block(w)


def test_invariant_violation_reported(K3):
    M = simple(K3, 1)
    bad = GradedModule(K3, dict(M.dims), {w: m.scale(K3(2)) for w, m in M.E.items()}, dict(M.F))
    assert bad.check_invariants()


def test_labels():
    assert ModuleLabel.parse("P(-2)") == ModuleLabel("P", -2)
    assert str(L(4)) == "L(4)"
    assert canonical_label(L(4), 5) == ModuleLabel("P", 4)
    assert canonical_label(L(3), 5) == L(3)
    assert simple_character(3, 4) == {4: 1, 2: 1}
