import math
import random
from fractions import Fraction

import pytest

from spherecover import cyclotomic as cy
from spherecover.errors import DivisionByZero, NotReal


def test_make_sqrt2_squares_to_two():
    s = cy.scalar_make(8, {1: 1, -1: 1})
    assert (s * s).as_rational() == 2


def test_make_sqrt5_minimal_polynomial():
    # independent check of x^2 - 5 by expanding in the reduced basis
    s = cy.scalar_make(5, {1: 2, 4: 2, 0: 1})
    square = s * s
    assert square.as_rational() == 5
    assert not s.is_rational()  # degree exactly 2, not 1


def test_make_rational_embedding():
    s = cy.scalar_make(1, {0: Fraction(3, 2)})
    assert s.as_rational() == Fraction(3, 2)


def test_make_rejects_non_real():
    with pytest.raises(NotReal):
        cy.scalar_make(8, {1: 1})
    with pytest.raises(NotReal):
        cy.scalar_make(5, {1: 1, 2: 1})


def test_inverse_roundtrip():
    s2 = cy.sqrt2()
    assert (s2.inv() * s2) == 1
    x = cy.cos_tau(1, 7)
    assert (x.inv() * x) == 1
    with pytest.raises(DivisionByZero):
        cy.zero(8).inv()


def test_cos_two_pi_fifth_closed_form():
    lhs = cy.cos_tau(1, 5)
    rhs = (cy.sqrt5() - 1) * Fraction(1, 4)
    assert lhs == rhs


def test_sign_determination():
    assert (cy.sqrt2() - 1).sign() == 1
    assert (1 - cy.sqrt2()).sign() == -1
    assert (cy.sqrt2() - cy.sqrt2()).sign() == 0
    # a value within 1e-5 of zero still gets an exact sign
    close = cy.sqrt2() - Fraction(141421356237, 100000000000)
    assert close.sign() == (1 if math.sqrt(2) > 1.41421356237 else -1)


def test_to_float_named_constants():
    named = [
        (cy.sqrt2(), math.sqrt(2)),
        (cy.sqrt3(), math.sqrt(3)),
        (cy.sqrt5(), math.sqrt(5)),
        (cy.golden_ratio(), (1 + math.sqrt(5)) / 2),
    ]
    for n in (1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 24, 30, 40, 60, 120):
        named.append((cy.cos_tau(1, n).lift(120), math.cos(2 * math.pi / n)))
    for scalar, expected in named:
        assert abs(scalar.to_float() - expected) < 1e-12


def _random_scalar(rng, conductor=12):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        e = rng.randrange(conductor)
        coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 5))
        terms[e] = terms.get(e, Fraction(0)) + coeff
    raw = cy.ExactScalar(conductor, terms)
    return raw + raw._conj_raw()  # symmetrize: guaranteed real


def test_field_axioms_on_random_pairs():
    rng = random.Random(20240817)
    for _ in range(500):
        a = _random_scalar(rng)
        b = _random_scalar(rng)
        lhs = (a + b) * (a + b)
        rhs = a * a + 2 * a * b + b * b
        assert lhs._canon_key() == rhs._canon_key()
        assert (a * b)._canon_key() == (b * a)._canon_key()
        assert ((a + b) - b)._canon_key() == a._canon_key()


def test_mixed_conductor_lifts_to_lcm():
    s6 = cy.sqrt2() * cy.sqrt3()
    assert s6.conductor == 24
    assert abs(s6.to_float() - math.sqrt(6)) < 1e-13
    assert (s6 * s6).as_rational() == 6


def test_lift_preserves_value_and_equality():
    s = cy.sqrt2()
    assert s.lift(120) == s
    assert (s.lift(40)).lift(120) == s.lift(120)
    assert hash(s.lift(120)) == hash(cy.sqrt2().lift(120))


def test_eager_canonical_forms_make_hashing_stable():
    a = cy.cos_tau(1, 5)
    b = (cy.sqrt5() - 1) * Fraction(1, 4)
    assert hash(a.lift(5)) == hash(b.lift(5))


def test_comparisons_use_real_embedding():
    assert cy.cos_tau(1, 5) > cy.cos_tau(1, 4)
    assert cy.cos_tau(2, 5) < cy.cos_tau(1, 5)
    assert cy.sqrt2() < cy.sqrt3() < cy.sqrt5()


def test_powers():
    s = cy.sqrt2()
    assert (s**4).as_rational() == 4
    assert (s**-2).as_rational() == Fraction(1, 2)


def test_sin_tau():
    assert cy.sin_tau(1, 4) == 1
    assert cy.sin_tau(0, 7).is_zero()
    assert abs(cy.sin_tau(1, 5).to_float() - math.sin(2 * math.pi / 5)) < 1e-13
