import json

import pytest

from uq_adjoint.cyclotomic import field
from uq_adjoint.linalg import Matrix
from uq_adjoint.modcat import ModuleLabel, block_indices, label_dim
from uq_adjoint.verify import (
    InvalidL,
    Report,
    build_A,
    build_Aprime,
    build_D,
    corank,
    corank_check,
    d_polynomial,
    d_vanishing_blocks,
    det_d,
    expected_multiplicities,
    machine_A,
    max_l,
    quantum_integer_signs,
    run_verification,
    sign_certificate,
    sign_twist,
)


def vals(K, rows):
    return Matrix.from_values(K, rows)


@pytest.mark.parametrize("l", range(3, 100, 2))
def test_expected_table_dimension(l):
    assert expected_multiplicities(l).total_dim() == l ** 3


@pytest.mark.parametrize("bad", [1, 2, 4, 0, -3])
def test_expected_table_rejects_bad_l(bad):
    with pytest.raises(InvalidL):
        expected_multiplicities(bad)


def test_expected_table_l3():
    t = expected_multiplicities(3).entries
    P, L = (lambda w: ModuleLabel("P", w)), (lambda w: ModuleLabel("L", w))
    assert t == {P(2): 3, P(0): 2, L(0): 2, L(4): 1, L(-2): 1}


def test_projective_multiplicities_grow():
    l = 9
    t = expected_multiplicities(l).entries
    for i in range((l - 1) // 2):
        assert t[ModuleLabel("P", 2 * i)] == (l + 1) // 2 + i
    assert t[ModuleLabel("P", l - 1)] == l


def test_build_A_and_D_l3(K3):
    third = K3("1/3")
    A = build_A(K3, 0).entries
    assert A == vals(K3, [[third, 0, 0], [-1, -2 * third, 0], [-1, -1, third]])
    D = build_D(K3, 0, 0).entries
    assert D == vals(K3, [[-1, -1], [-1, -1]])
    assert det_d(K3, 0, 0) == K3.zero


def test_build_Aprime_shape(K5):
    Ap = build_Aprime(K5, 1).entries
    A = build_A(K5, 1).entries
    assert (Ap.nrows, Ap.ncols) == (10, 10)
    assert Ap.submatrix(range(5), range(5)) == A
    assert Ap.submatrix(range(5, 10), range(5, 10)) == A
    assert Ap.submatrix(range(5), range(5, 10)).is_zero()


@pytest.mark.parametrize("l", [3, 5, 7])
def test_d_vanishing_counts(l):
    K = field(l)
    for k in range(0, l - 1, 2):
        zs = d_vanishing_blocks(K, k)
        assert len(zs) == (l - 1 - k) // 2
        assert -1 not in zs
        assert all(k <= 2 * j for j in zs)


def test_d_polynomial_matches_determinants(K5):
    for k in (0, 2):
        p = d_polynomial(K5, k)
        assert len(p) - 1 == 4 - k
        for bi in block_indices(K5):
            acc = K5.zero
            for c in reversed(p):
                acc = acc * bi.b + c
            assert acc == det_d(K5, bi.j, k)


@pytest.mark.parametrize("l", [3, 5, 7])
def test_Aprime_coranks(l):
    K = field(l)
    for bi in block_indices(K):
        if bi.j < 0:
            continue
        for k in range(0, l - 1, 2):
            details = {}
            c = corank_check(K, bi.j, k, details=details)
            if k <= 2 * bi.J:
                assert c == 3
                assert details["D_corank"] == 1 and details["D_semisimple"]
                assert details["sign"]["holds"]
            else:
                assert c == 2 and not details


def test_corank_of_Aprime_l3(K3):
    Ap = build_Aprime(K3, 0).entries
    assert corank(Ap - Matrix.scalar(K3, 6, K3.casimir_root(0))) == 3


@pytest.mark.parametrize("l", [3, 5, 7, 9])
def test_quantum_integer_signs(l):
    signs = quantum_integer_signs(field(l))
    assert all((s > 0) == (t % 2 == 1) for t, s in signs.items())


def test_sign_certificate_fields(K5):
    cert = sign_certificate(K5, 1, 0)
    assert cert["holds"] and cert["precision_bits"] == 128


def test_machine_A_agrees_up_to_sign_twist(U3, U5):
    # The displayed subdiagonal has the opposite sign in the basis (X-b_j)pr_j K^i.
    for U in (U3, U5):
        l = U.l
        alt = [(-1) ** (i + 1) for i in range(l)]
        for bi in block_indices(U.K):
            Am, A = machine_A(U, bi.j), build_A(U.K, bi.j).entries
            assert sign_twist(Am, alt) == A
            if bi.j >= 0:
                assert Am != A
                assert Am.rows[1][0] == -A.rows[1][0]


def test_run_verification_l3():
    rep = run_verification(3)
    assert rep.passed, rep.to_text()
    t = expected_multiplicities(3)
    assert rep.decomposition == t.to_json()
    again = Report.loads(rep.dumps())
    assert again.to_json() == rep.to_json()
    d = json.loads(rep.dumps())
    assert d["l"] == 3 and all("pass" in c for c in d["checks"])


def test_run_verification_subset_and_unknown():
    rep = run_verification(3, ["casimir"])
    assert rep.passed and {c.name for c in rep.checks} >= {"casimir_central", "casimir_equation"}
    with pytest.raises(KeyError):
        run_verification(3, ["nope"])


def test_max_l(monkeypatch):
    monkeypatch.delenv("UQ_ADJOINT_MAX_L", raising=False)
    assert max_l() == 7 and max_l(True) == 9
    with pytest.raises(InvalidL):
        run_verification(9, ["casimir"])
    monkeypatch.setenv("UQ_ADJOINT_MAX_L", "3")
    with pytest.raises(InvalidL):
        run_verification(5, ["casimir"])
