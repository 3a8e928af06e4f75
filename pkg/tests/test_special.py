import numpy as np
import pytest

from pilift.catalog import CATALOG, corpus_pi_sets, load_group
from pilift.chartab import character_table, det_order, restrict
from pilift.groups import hall_subgroup, normal_subgroups, subnormal_subgroups
from pilift.pichars import ipi_set
from pilift.primes import PiSet
from pilift.special import (factorize_pi, factorize_pi_brute, is_pi_special, is_pi_special_oracle,
                            pi_special_extension, pi_special_set)

SMALL = [n for n in CATALOG if load_group(n).order <= 100]


def test_trivial_character_is_special():
    for name in ["S3", "F21", "E27", "GL2(3)"]:
        T = character_table(load_group(name))
        for pi in (PiSet.of(2), PiSet.of(3), PiSet.of(7), PiSet.p_prime(3)):
            assert is_pi_special(T.trivial, pi) and is_pi_special_oracle(T.trivial, pi)


def test_pi_group_all_special():
    for name, pi in [("F21", PiSet.of(3, 7)), ("E27", PiSet.of(3)), ("S4", PiSet.of(2, 3))]:
        G = load_group(name)
        assert len(pi_special_set(G, pi)) == len(character_table(G))


def test_f21_examples():
    G = load_group("F21")
    T = character_table(G)
    pi = PiSet.of(7)
    assert not is_pi_special(T[3], pi) and not is_pi_special_oracle(T[3], pi)
    X = pi_special_set(G, pi)
    assert [c.index for c in X] == [0]
    basis = ipi_set(G, pi)
    assert len(X) == sum(1 for m in basis.members if pi.is_pi_number(int(m.degree)))
    assert [c.index for c in pi_special_set(G, PiSet.of(3))] == [0, 1, 2]


def test_abelian_special_are_pi_power_order():
    for name in ["C6", "C12", "C15", "C3xC3"]:
        G = load_group(name)
        T = character_table(G)
        for pi in corpus_pi_sets(G):
            want = [c.index for c in T if pi.is_pi_number(det_order(c))]
            assert [c.index for c in pi_special_set(G, pi)] == want


@pytest.mark.parametrize("name", SMALL)
def test_fast_special_matches_oracle_small(name):
    G = load_group(name)
    T = character_table(G)
    for pi in corpus_pi_sets(G):
        for chi in T:
            assert is_pi_special(chi, pi) == is_pi_special_oracle(chi, pi)


@pytest.mark.parametrize("name", SMALL)
def test_factorization_matches_brute_force(name):
    G = load_group(name)
    T = character_table(G)
    for pi in corpus_pi_sets(G):
        for chi in T:
            brute = factorize_pi_brute(chi, pi)
            assert len(brute) <= 1
            f = factorize_pi(chi, pi)
            if brute:
                assert f is not None
                assert (f.pi_factor.index, f.pi_prime_factor.index) == (
                    brute[0].pi_factor.index, brute[0].pi_prime_factor.index)
                assert pi.is_pi_number(f.pi_factor.degree)
                assert pi.prime().is_pi_number(f.pi_prime_factor.degree)
            else:
                assert f is None


def test_factorization_examples():
    G = load_group("F21")
    T = character_table(G)
    p3 = PiSet.p_prime(3)
    for chi in T.irr[3:]:
        assert factorize_pi(chi, p3) is None
    for pi in (PiSet.of(3), PiSet.of(7)):
        for chi in pi_special_set(G, pi):
            f = factorize_pi(chi, pi)
            assert f.pi_factor == chi and f.pi_prime_factor.index == 0
    C = load_group("C12")
    TC = character_table(C)
    pi = PiSet.of(2)
    for chi in TC:
        f = factorize_pi(chi, pi)
        o = det_order(chi)
        assert det_order(f.pi_factor) == pi.part(o)
        assert det_order(f.pi_prime_factor) == o // pi.part(o)


@pytest.mark.parametrize("name", ["S4", "F21", "C3xF21", "GL2(3)", "E27", "F55"])
def test_special_restricts_irreducibly_to_hall(name):
    G = load_group(name)
    for pi in corpus_pi_sets(G):
        H = hall_subgroup(G, pi)
        TH = character_table(H)
        for chi in pi_special_set(G, pi):
            assert TH.index_of(restrict(chi, H)) is not None


@pytest.mark.parametrize("name", ["F21", "C3xS3", "S4", "C7:C3_4"])
def test_factorable_constituents_on_subnormal(name):
    G = load_group(name)
    T = character_table(G)
    for pi in corpus_pi_sets(G):
        for chi in T:
            if factorize_pi(chi, pi) is None:
                continue
            for S in subnormal_subgroups(G):
                for gamma, _ in character_table(S).constituents(restrict(chi, S)):
                    assert factorize_pi(gamma, pi) is not None


def test_extension_trivial_cases():
    G = load_group("F21")
    pi = PiSet.of(7)
    for gamma in pi_special_set(G, pi):
        assert pi_special_extension(gamma, G, pi) == gamma
    C7 = [N for N in normal_subgroups(G) if N.order == 7][0]
    assert pi_special_extension(character_table(C7).trivial, G, pi).index == 0
    with pytest.raises(ValueError):
        pi_special_extension(character_table(C7)[1], G, pi)  # not invariant


def test_extension_on_order_525_analog():
    G = load_group("E25:F21")
    pi = PiSet.of(3, 5)
    E = [N for N in normal_subgroups(G) if N.order == 25][0]
    K = [N for N in normal_subgroups(G) if N.order == 175][0]
    TE, TK = character_table(E), character_table(K)
    for alpha in TE.irr[1:]:
        assert is_pi_special(alpha, pi)
        ext = pi_special_extension(alpha, K, pi)
        assert ext.group is K and np.array_equal(restrict(ext, E).vals, alpha.vals)
        # oracle: filter the characters over alpha by the definition
        over = [chi for chi in TK if TE.index_of(restrict(chi, E)) == alpha.index]
        assert len(over) == 7
        assert [c.index for c in over if is_pi_special_oracle(c, pi)] == [ext.index]
