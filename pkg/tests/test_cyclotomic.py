import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pilift.catalog import load_group
from pilift.chartab import character_table
from pilift.cyclotomic import (CycloNum, conductor, cyclotomic_polynomial, is_in_Q_pi,
                               order_as_root_of_unity, root_of_unity)
from pilift.primes import PiSet

x = sympy.symbols("x")


def numeric(z: CycloNum) -> complex:
    """Floating-point estimate, used only as a test oracle."""
    return sum(c * cmath.exp(2j * cmath.pi * k / z.n) for k, c in enumerate(z.num)) / z.den


def poly_of(P):
    return sum(c * x ** k for k, c in enumerate(P.coeffs))


def test_cyclotomic_examples():
    assert cyclotomic_polynomial(1).coeffs == (-1, 1)
    assert cyclotomic_polynomial(6).coeffs == (1, -1, 1)
    assert cyclotomic_polynomial(12).coeffs == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("e", range(1, 61))
def test_cyclotomic_product_identity(e):
    prod = sympy.Integer(1)
    for d in sympy.divisors(e):
        prod *= poly_of(cyclotomic_polynomial(d))
    assert sympy.expand(prod - (x ** e - 1)) == 0


@pytest.mark.parametrize("e", [1, 2, 5, 12, 15, 21, 30, 36, 60])
def test_cyclotomic_monic_irreducible(e):
    P = cyclotomic_polynomial(e)
    assert P.coeffs[-1] == 1
    assert sympy.Poly(poly_of(P), x).is_irreducible
    assert sympy.Poly(poly_of(P), x) == sympy.Poly(sympy.cyclotomic_poly(e, x), x)


def test_root_of_unity_examples():
    assert root_of_unity(4).conjugate() == -root_of_unity(4)
    assert root_of_unity(3) + root_of_unity(3, 2) == -1
    assert root_of_unity(6) * root_of_unity(6, 5) == 1
    assert root_of_unity(5, 5) == 1


def test_order_examples():
    assert order_as_root_of_unity(CycloNum.rational(1)) == 1
    assert order_as_root_of_unity(root_of_unity(7, 3)) == 7
    assert order_as_root_of_unity(CycloNum.rational(2)) is None
    assert order_as_root_of_unity(-root_of_unity(3)) == 6
    assert order_as_root_of_unity(root_of_unity(3) + 1) == 6  # 1 + w = -w^2


def test_conductor_examples():
    assert conductor(root_of_unity(4, 2)) == 1
    z3 = root_of_unity(3)
    assert conductor(z3) == 3
    assert is_in_Q_pi(z3, PiSet.of(3)) and not is_in_Q_pi(z3, PiSet.of(2))
    assert conductor(root_of_unity(6)) == 3
    assert conductor(root_of_unity(12, 4)) == 3
    assert conductor(root_of_unity(8) + root_of_unity(8, 7)) == 8  # sqrt 2
    assert conductor(root_of_unity(5) + root_of_unity(5, 4)) == 5


def test_to_conductor():
    z = root_of_unity(3)
    w = z.to_conductor(12)
    assert w.n == 12 and w == z
    assert w.to_conductor(3).n == 3
    with pytest.raises(ValueError):
        z.to_conductor(4)
    assert CycloNum.rational(Fraction(1, 2)).to_conductor(7) == Fraction(1, 2)


def test_repr():
    assert repr(root_of_unity(3)) == "E(3)"
    assert repr(CycloNum.rational(-3)) == "-3"
    assert repr(root_of_unity(12, 4)) == "E(3)"


conductors = st.sampled_from([1, 3, 4, 5, 7, 8, 9, 12, 15, 21])


@st.composite
def cyclonums(draw, n=None):
    n = n or draw(conductors)
    coeffs = draw(st.dictionaries(st.integers(0, n - 1), st.integers(-4, 4), max_size=4))
    den = draw(st.integers(1, 3))
    return CycloNum.from_powers(n, coeffs, den)


@settings(max_examples=60, deadline=None)
@given(cyclonums(), cyclonums(), cyclonums())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0 and a * 1 == a


@settings(max_examples=60, deadline=None)
@given(cyclonums(), cyclonums())
def test_conjugate_is_ring_map(a, b):
    assert a.conjugate().conjugate() == a
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


@settings(max_examples=60, deadline=None)
@given(cyclonums(), cyclonums())
def test_arithmetic_matches_numeric(a, b):
    assert abs(numeric(a * b) - numeric(a) * numeric(b)) < 1e-6
    assert abs(numeric(a + b) - numeric(a) - numeric(b)) < 1e-6
    assert abs(numeric(a.conjugate()) - numeric(a).conjugate()) < 1e-6


@settings(max_examples=60, deadline=None)
@given(cyclonums())
def test_minimal_form_and_hash(a):
    m = a.minimal()
    assert m == a and hash(m) == hash(a)
    assert a.n % m.n == 0
    assert conductor(a) == m.n
    assert abs(numeric(m) - numeric(a)) < 1e-6


def galois_conductor(a: CycloNum) -> int:
    """Oracle: least d | n (d not 2 mod 4) whose Galois kernel fixes a."""
    n = a.n
    units = [u for u in range(1, n + 1) if sympy.gcd(u, n) == 1]
    for d in sympy.divisors(n):
        if d % 4 != 2 and all(a.galois(u) == a for u in units if u % d == 1 % d):
            return d
    return n


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([8, 12, 15, 20, 21, 24, 36]).flatmap(lambda n: cyclonums(n=n)), st.integers(1, 36))
def test_conductor_matches_galois_oracle(a, u):
    assert conductor(a) == galois_conductor(a)
    if sympy.gcd(u, a.n) == 1:
        b = a + a.galois(u)  # a trace, often of smaller conductor
        assert conductor(b) == galois_conductor(b)


@pytest.mark.parametrize("name", ["S3", "F21", "C7:C3_2", "E27", "GL2(3)", "F20"])
def test_character_values_bounded_by_degree(name):
    T = character_table(load_group(name))
    for chi in T:
        for v in chi.values():
            assert abs(numeric(v)) <= chi.degree + 1e-9
