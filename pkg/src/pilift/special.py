"""pi-special characters, pi-factorization and pi-special extensions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chartab import Character, character_table, restrict, stabilizer_of_character
from .cyclotomic import rows_mul
from .errors import IntegrityError
from .groups import Group, is_normal, normal_subgroups, subnormal_subgroups
from .pichars import ipi_set
from .primes import PiSet


@dataclass(frozen=True)
class Factorization:
    pi_factor: Character  # alpha, pi-special
    pi_prime_factor: Character  # beta, pi'-special


def is_pi_special_oracle(chi: Character, pi: PiSet) -> bool:
    """Definition: pi-degree, and pi-number determinantal order for every constituent
    of every restriction to a subnormal subgroup."""
    G = chi.group
    if not pi.is_pi_number(chi.degree):
        return False
    for S in subnormal_subgroups(G):
        T = character_table(S)
        for gamma, _ in T.constituents(restrict(chi, S)):
            if not pi.is_pi_number(T.det_orders[gamma.index]):
                return False
    return True


def _top_section(G: Group, pi: PiSet) -> Optional[tuple]:
    """A proper normal N of largest order with G/N a pi- or pi'-group, and which one."""
    best = None
    for N in normal_subgroups(G):
        if N.order == G.order:
            continue
        idx = G.order // N.order
        kind = "pi" if pi.is_pi_number(idx) else ("pi'" if pi.prime().is_pi_number(idx) else None)
        if kind and (best is None or N.order > best[0].order):
            best = (N, kind)
    return best


def pi_special_indices(G: Group, pi: PiSet) -> frozenset:
    """Table indices of the pi-special characters, by descending through normal sections."""
    key = ("pi_special", pi)
    got = G.cache.get(key)
    if got is not None:
        return got
    T = character_table(G)
    if G.order == 1:
        out = frozenset([0])
    else:
        top = _top_section(G, pi)
        if top is None:
            raise IntegrityError(f"{G.label()} is not {pi.spec()}-separable")
        N, kind = top
        below = pi_special_indices(N, pi)
        TN = character_table(N)
        out = set()
        for chi in T:
            if not pi.is_pi_number(chi.degree):
                continue
            cons = TN.constituents(restrict(chi, N))
            if kind == "pi":
                # constituents of chi_N are conjugate, so testing one suffices
                if cons[0][0].index in below:
                    out.add(chi.index)
            else:
                if (len(cons) == 1 and cons[0][1] == 1 and cons[0][0].index in below
                        and pi.is_pi_number(T.det_orders[chi.index])):
                    out.add(chi.index)
        out = frozenset(out)
    G.cache[key] = out
    return out


def is_pi_special(chi: Character, pi: PiSet, oracle: bool = False) -> bool:
    if oracle:
        return is_pi_special_oracle(chi, pi)
    return chi.index in pi_special_indices(chi.group, pi)


def pi_special_set(G: Group, pi: PiSet) -> list:
    """X_pi(G), after checking that chi -> chi^0 maps it onto the pi-degree part of I_pi."""
    T = character_table(G)
    X = [T[i] for i in sorted(pi_special_indices(G, pi))]
    key = ("pi_special_checked", pi)
    if key not in G.cache:
        basis = ipi_set(G, pi)
        images = [basis.restriction_of[chi.index] for chi in X]
        if any(i < 0 for i in images) or len(set(images)) != len(images):
            raise IntegrityError("restriction is not injective from X_pi into I_pi")
        want = {i for i, m in enumerate(basis.members) if pi.is_pi_number(int(m.degree))}
        if set(images) != want:
            raise IntegrityError("X_pi does not hit exactly the pi-degree members of I_pi")
        G.cache[key] = True
    return X


def _factor_index(G: Group, pi: PiSet) -> dict:
    key = ("factor_index", pi)
    idx = G.cache.get(key)
    if idx is None:
        T = character_table(G)
        ell = T.family.ell
        A = [T[i] for i in sorted(pi_special_indices(G, pi))]
        B = [T[i] for i in sorted(pi_special_indices(G, pi.prime()))]
        idx = {}
        for a in A:
            for b in B:
                k = (a.modl * b.modl % ell).tobytes()
                if k in idx:
                    raise IntegrityError("a character has two pi-factorizations")
                idx[k] = (a.index, b.index)
        G.cache[key] = idx
    return idx


def factorize_pi(chi: Character, pi: PiSet) -> Optional[Factorization]:
    """The unique (alpha, beta) with alpha pi-special, beta pi'-special and chi = alpha * beta."""
    G = chi.group
    T = chi.table
    hit = _factor_index(G, pi).get(chi.modl.tobytes())
    if hit is None:
        return None
    a, b = T[hit[0]], T[hit[1]]
    if a.degree * b.degree != chi.degree or not np.array_equal(rows_mul(a.vals, b.vals, a.E), chi.vals):
        return None
    return Factorization(a, b)


def is_pi_factorable(chi: Character, pi: PiSet) -> bool:
    return factorize_pi(chi, pi) is not None


def factorize_pi_brute(chi: Character, pi: PiSet) -> list:
    """All factorizations by exhaustive exact products (for cross-checks)."""
    T = chi.table
    out = []
    for a in T:
        if not is_pi_special_oracle(a, pi):
            continue
        for b in T:
            if a.degree * b.degree != chi.degree or not is_pi_special_oracle(b, pi.prime()):
                continue
            if np.array_equal(rows_mul(a.vals, b.vals, a.E), chi.vals):
                out.append(Factorization(a, b))
    return out


def pi_special_extension(gamma: Character, G: Group, pi: PiSet) -> Character:
    """The unique pi-special chi in Irr(G) with chi_N = gamma (N normal, |G:N| a pi'-number)."""
    N = gamma.group
    if not is_normal(G, N):
        raise ValueError("subgroup is not normal")
    if not pi.prime().is_pi_number(G.order // N.order):
        raise ValueError("index is not a pi'-number")
    if not is_pi_special(gamma, pi):
        raise ValueError("gamma is not pi-special")
    if stabilizer_of_character(G, N, gamma).order != G.order:
        raise ValueError("gamma is not invariant")
    T = character_table(G)
    TN = character_table(N)
    found = [chi for chi in T if chi.degree == gamma.degree
             and TN.index_of(restrict(chi, N)) == gamma.index and is_pi_special(chi, pi)]
    if len(found) != 1:
        raise IntegrityError(f"{len(found)} pi-special extensions found")
    return found[0]


def restriction_map(G: Group, pi: PiSet) -> dict:
    """pi-special index -> I_pi index, for reports."""
    basis = ipi_set(G, pi)
    return {i: basis.restriction_of[i] for i in sorted(pi_special_indices(G, pi))}
