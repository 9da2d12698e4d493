"""Field arithmetic against floating-point complex evaluation."""

import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from uq_adjoint.cyclotomic import (
    Cyc,
    CyclotomicField,
    SignInconclusive,
    cyclotomic_polynomial,
    field,
    rat_from_str,
    rat_to_str,
)

LS = [3, 5, 7, 9, 15]


def approx(K, a: Cyc) -> complex:
    z = cmath.exp(2j * cmath.pi / K.l)
    return sum(float(c) * z ** i for i, c in enumerate(a.coeffs()))


def elements(K):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.lists(coeff, min_size=K.phi, max_size=K.phi).map(K.from_coeffs)


@pytest.mark.parametrize("n, expected", [
    (3, (1, 1, 1)),
    (5, (1, 1, 1, 1, 1)),
    (9, (1, 0, 0, 1, 0, 0, 1)),
    (15, (1, -1, 0, 1, -1, 1, 0, -1, 1)),
])
def test_cyclotomic_polynomial(n, expected):
    assert cyclotomic_polynomial(n) == expected


def test_small_identities(K3):
    z = K3.zeta
    assert z * z * z == K3.one
    assert K3.one + z + z * z == K3.zero
    assert K3.qdiff_sq(1).inv() == K3(Fraction(-1, 3))
    assert K3.qint(2) == K3(-1)
    assert K3.casimir_root(0) == K3(Fraction(1, 3))
    assert K3.casimir_root(-1) == K3(Fraction(-2, 3))


def test_shared_instances():
    assert field(5) is field(5, 1)
    assert field(5, 2) is not field(5)


@pytest.mark.parametrize("l", LS)
def test_casimir_root_symmetry(l):
    K = field(l)
    for j in range(l):
        assert K.casimir_root(j) == K.casimir_root(l - 2 - j)
        assert K.casimir_root(j) == K.casimir_root(j + l)


@pytest.mark.parametrize("l", [5, 7])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_field_laws(l, data):
    K = field(l)
    a, b, c = (data.draw(elements(K)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == K.zero
    if a:
        assert a * a.inv() == K.one
        assert abs(approx(K, a.inv()) - 1 / approx(K, a)) < 1e-8
    assert abs(approx(K, a * b) - approx(K, a) * approx(K, b)) < 1e-8


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_galois_and_norm(data):
    K = field(7)
    a = data.draw(elements(K))
    prod = K.one
    for k in K.galois_group():
        prod = prod * a.galois(k)
    assert prod.is_rational()
    assert prod.to_fraction() == a.norm()
    b = data.draw(elements(K))
    assert (a * b).galois(3) == a.galois(3) * b.galois(3)


def test_json_roundtrip(K5):
    a = K5.from_coeffs([Fraction(1, 3), -2, 0, Fraction(7, 5)])
    assert CyclotomicField.from_json(K5, a.to_json()) == a
    assert rat_from_str(rat_to_str(Fraction(-7, 12))) == Fraction(-7, 12)


def test_embedding_encloses_value(K5):
    a = K5.from_coeffs([1, 2, -3, Fraction(1, 2)])
    for e in K5.galois_group():
        enc = K5.embed(a, e, 128)
        z = cmath.exp(2j * cmath.pi * e / 5)
        val = sum(float(c) * z ** i for i, c in enumerate(a.coeffs()))
        assert enc.real.a <= val.real <= enc.real.b or abs(val.real - enc.approx().real) < 1e-12
        assert enc.radius < 2.0 ** -64


def test_embedding_sign_and_zero(K3):
    e = K3.embedding_for_angle(4, 3)
    assert K3.embed(K3.qint(1), e).real_sign() == 1
    assert K3.embed(K3.qint(2), e).real_sign() == -1
    with pytest.raises(SignInconclusive):
        K3.embed(K3.zero, e).real_sign()


def test_embedding_rejects_bad_arguments(K3):
    with pytest.raises(ValueError):
        K3.embed(K3.one, 3)
    with pytest.raises(ValueError):
        K3.embed(K3.one, 1, precision_bits=16)
