"""Maximal factorable normal pairs, normal nuclei, vertex pairs and N_pi(G)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chartab import (Character, induction_matrix, character_table, clifford_correspondent,
                      induce, restrict, stabilizer_of_character)
from .errors import IntegrityError
from .groups import Group, all_subgroups, find_conjugator, hall_subgroup, normal_subgroups
from .pichars import ipi_set, pi_classes
from .primes import PiSet
from .special import Factorization, factorize_pi, pi_special_indices


@dataclass(frozen=True)
class FactorablePair:
    N: Group
    theta: Character
    factorization: Factorization


@dataclass(frozen=True)
class CliffordStep:
    N: Group
    theta: Character
    stabilizer: Group
    correspondent: Character


@dataclass(frozen=True)
class NucleusResult:
    chi: Character
    pi: PiSet
    chain: tuple  # CliffordStep per descent
    W: Group
    gamma: Character
    factorization: Factorization

    @property
    def gamma_pi(self) -> Character:
        return self.factorization.pi_factor

    @property
    def gamma_pi_prime(self) -> Character:
        return self.factorization.pi_prime_factor


@dataclass(frozen=True)
class VertexPair:
    Q: Group
    delta: Character

    @property
    def is_trivial(self) -> bool:
        return self.delta.index == 0


def _all_constituents_factorable(chi: Character, N: Group, pi: PiSet) -> bool:
    TN = character_table(N)
    return all(factorize_pi(theta, pi) is not None
               for theta, _ in TN.constituents(restrict(chi, N)))


def max_factorable_normal_pair(chi: Character, pi: PiSet, pick: int = 0) -> FactorablePair:
    """The unique maximal normal N all of whose constituents under chi are pi-factorable.

    theta is the constituent with the least index in the table of N (``pick`` selects another).
    """
    G = chi.group
    good = [N for N in normal_subgroups(G) if _all_constituents_factorable(chi, N, pi)]
    maximal = [N for N in good if not any(N < M for M in good)]
    if len(maximal) != 1:
        raise IntegrityError(f"{len(maximal)} maximal factorable normal subgroups")
    N = maximal[0]
    TN = character_table(N)
    cons = TN.constituents(restrict(chi, N))
    theta = cons[pick % len(cons)][0]
    if N.order != G.order and stabilizer_of_character(G, N, theta).order == G.order:
        raise IntegrityError("invariant theta below a proper maximal factorable subgroup")
    return FactorablePair(N, theta, factorize_pi(theta, pi))


def normal_nucleus(chi: Character, pi: PiSet, pick: int = 0) -> NucleusResult:
    """Descend through Clifford correspondents of maximal factorable normal pairs.

    ``pick`` chooses a non-canonical theta at the first step (results are then not cached).
    """
    G = chi.group
    key = ("nucleus", pi, chi.index)
    got = G.cache.get(key) if pick == 0 else None
    if got is not None:
        return got
    chain = []
    psi = chi
    while True:
        H = psi.group
        pair = max_factorable_normal_pair(psi, pi, pick if psi is chi else 0)
        if pair.N.order == H.order:
            break
        T = stabilizer_of_character(H, pair.N, pair.theta)
        if T.order >= H.order:
            raise IntegrityError("stabilizer does not descend")
        nxt = clifford_correspondent(psi, pair.N, pair.theta)
        chain.append(CliffordStep(pair.N, pair.theta, T, nxt))
        psi = nxt
    fac = factorize_pi(psi, pi)
    if fac is None:
        raise IntegrityError("nucleus character is not pi-factorable")
    if not np.array_equal(induce(psi, G).vals, chi.vals):
        raise IntegrityError("nucleus character does not induce to chi")
    out = NucleusResult(chi, pi, tuple(chain), psi.group, psi, fac)
    if pick == 0:
        G.cache[key] = out
    return out


def vertex_pair(chi: Character, pi: PiSet, nucleus: Optional[NucleusResult] = None) -> VertexPair:
    nuc = nucleus or normal_nucleus(chi, pi)
    Q = hall_subgroup(nuc.W, pi.prime())
    TQ = character_table(Q)
    i = TQ.index_of(restrict(nuc.gamma_pi_prime, Q))
    if i is None:
        raise IntegrityError("vertex character is reducible")
    return VertexPair(Q, TQ[i])


def npi_set(G: Group, pi: PiSet) -> list:
    """N_pi(G): irreducibles with trivial vertex character, checked to be a set of lifts of I_pi."""
    key = ("npi", pi)
    got = G.cache.get(key)
    if got is not None:
        return got
    T = character_table(G)
    basis = ipi_set(G, pi)
    out = [chi for chi in T if vertex_pair(chi, pi).is_trivial]
    images = [basis.restriction_of[chi.index] for chi in out]
    if any(i < 0 for i in images) or sorted(images) != list(range(len(basis))):
        raise IntegrityError("restriction does not map N_pi bijectively onto I_pi")
    special = {chi.index for chi in out if pi.is_pi_number(chi.degree)}
    if special != set(pi_special_indices(G, pi)):
        raise IntegrityError("pi-degree members of N_pi differ from X_pi")
    G.cache[key] = out
    return out


def npi_lift(G: Group, pi: PiSet, phi_index: int) -> Character:
    """The member of N_pi(G) restricting to the given member of I_pi."""
    basis = ipi_set(G, pi)
    for chi in npi_set(G, pi):
        if basis.restriction_of[chi.index] == phi_index:
            return chi
    raise IntegrityError("no canonical lift")


def is_rdz(chi: Character, N: Group, theta: Character, p: int) -> bool:
    """(chi(1)/theta(1))_p == |G:N|_p."""
    G = chi.group
    pp = PiSet.of(p)
    if chi.degree % theta.degree:
        raise ValueError("theta does not lie under chi")
    return pp.part(chi.degree // theta.degree) == pp.part(G.order // N.order)


def induce_partial(G: Group, U: Group, pi: PiSet, vals: np.ndarray) -> np.ndarray:
    """Induction of a pi-partial class function of U to G, on the pi-classes of G."""
    Ind = induction_matrix(G, U) if U is not G else np.eye(len(G.classes), dtype=np.int64)
    return Ind[np.ix_(pi_classes(G, pi), pi_classes(U, pi))] @ vals


def vertex_subgroups_by_search(G: Group, pi: PiSet, phi_index: int, limit: int = 5000) -> list:
    """Hall pi'-subgroups Q of every U <= G with some pi-degree alpha in I_pi(U), alpha^G = phi."""
    phi = ipi_set(G, pi).members[phi_index]
    out = []
    for U in all_subgroups(G, limit):
        if int(phi.degree) % (G.order // U.order):
            continue
        for alpha in ipi_set(U, pi).members:
            if not pi.is_pi_number(int(alpha.degree)):
                continue
            if np.array_equal(induce_partial(G, U, pi, alpha.vals), phi.vals):
                out.append((U, hall_subgroup(U, pi.prime())))
    return out


def vertex_conjugacy_check(G: Group, pi: PiSet, phi_index: int) -> dict:
    """Existence of a pi-degree inducing pair and G-conjugacy of all its Hall pi'-subgroups."""
    found = vertex_subgroups_by_search(G, pi, phi_index)
    if not found:
        return {"pairs": 0, "conjugate": False}
    Q0 = found[0][1]
    conj = all(find_conjugator(G, Q0, Q) is not None for _, Q in found)
    nuc = normal_nucleus(npi_lift(G, pi, phi_index), pi)
    Qn = vertex_pair(nuc.chi, pi, nuc).Q
    return {"pairs": len(found), "conjugate": conj,
            "matches_nucleus": find_conjugator(G, Q0, Qn) is not None}


def rdz_restriction_cases(G: Group, p: int) -> list:
    """(Q, delta, chi, chi^0 irreducible) over normal p-subgroups Q, linear invariant delta and
    chi in Irr(G | delta) of relative defect zero."""
    pi = PiSet.p_prime(p)
    basis = ipi_set(G, pi)
    T = character_table(G)
    out = []
    for Q in normal_subgroups(G):
        if not PiSet.of(p).is_pi_number(Q.order):
            continue
        TQ = character_table(Q)
        for delta in TQ:
            if delta.degree != 1 or stabilizer_of_character(G, Q, delta).order != G.order:
                continue
            for chi in T:
                m = TQ.decompose(restrict(chi, Q))
                if m[delta.index] == 0 or not is_rdz(chi, Q, delta, p):
                    continue
                out.append((Q, delta, chi, basis.restriction_of[chi.index] >= 0))
    return out

