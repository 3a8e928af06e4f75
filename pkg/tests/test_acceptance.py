"""End-to-end acceptance checks; each test prints one PASS/FAIL line."""
import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest
from sympy import primefactors

from pilift.bounds import (census, factorable_lift_degree_violations, normalizer_product_configurations,
                           normalizer_product_holds, rows_to_csv, verify_group)
from pilift.catalog import CATALOG, CORPORA, corpus_pi_sets, group_spec, load_group
from pilift.chartab import character_table, orbit_of_character, stabilizer_of_character, verify_orthogonality
from pilift.groups import abelianization_order, generate_group, hall_subgroup, normalizer
from pilift.nucleus import normal_nucleus, npi_lift, rdz_restriction_cases, vertex_pair
from pilift.pichars import ipi_set, pi_classes, restrict0
from pilift.primes import PiSet
from pilift.special import factorize_pi, is_pi_special, is_pi_special_oracle

CORPUS = CORPORA["default"]
ODD = [n for n in CORPUS if load_group(n).order % 2 and load_group(n).order > 1]


_BRUTE: dict = {}


def brute_lifts(G, pi, phi_index):
    """Indices of irreducibles whose values on the pi-classes equal phi's."""
    key = (id(G), pi)
    if key not in _BRUTE or _BRUTE[key][0] is not G:
        pc = [k for k, c in enumerate(G.classes) if pi.is_pi_number(c.element_order)]
        by_values: dict = {}
        for chi in character_table(G):
            vals = chi.values()
            by_values.setdefault(tuple(vals[k] for k in pc), []).append(chi.index)
        _BRUTE[key] = (G, by_values)
    return _BRUTE[key][1].get(tuple(ipi_set(G, pi).members[phi_index].values()), [])


@pytest.fixture(scope="module")
def reports():
    """(name, pi) -> LiftReports over the whole corpus."""
    return {(n, pi): verify_group(load_group(n), pi) for n in CORPUS for pi in corpus_pi_sets(load_group(n))}


@pytest.mark.criterion(1, "exact orthogonality and degree sum on the full catalog, fresh builds")
def test_c1_table_integrity(criterion):
    required = {"C2", "C3", "C4", "C5", "C6", "S3", "S4", "A4", "D8", "D10", "F20", "F21",
                "C7:C3_2", "C7:C3_4", "E27", "E25:F21"}
    missing = sorted(required - set(CATALOG))
    t0 = time.perf_counter()
    bad = []
    for name in CATALOG:
        degree, gens = group_spec(name)
        G = generate_group(degree, gens, name=name)
        T = character_table(G)
        if G.order > 1000 or not verify_orthogonality(T) or sum(c.degree ** 2 for c in T) != G.order:
            bad.append(name)
    dt = time.perf_counter() - t0
    criterion.report(not bad and not missing and dt < 300,
                     f"{len(CATALOG)} groups in {dt:.1f}s; failing {bad}; missing {missing}")


@pytest.mark.criterion(2, "|I_pi| equals the pi-class count on every corpus pair")
def test_c2_ipi_cardinality(criterion):
    bad, pairs = [], 0
    for n in CORPUS:
        G = load_group(n)
        sets = corpus_pi_sets(G)
        primes = primefactors(G.order)
        complements = [pi for pi in sets if pi.single_complement is not None]
        assert len(complements) == len(primes) and len(sets) - len(complements) >= 2
        for pi in sets:
            pairs += 1
            count = sum(1 for c in G.classes if pi.is_pi_number(c.element_order))
            if len(ipi_set(G, pi)) != count or len(pi_classes(G, pi)) != count:
                bad.append((n, pi.spec()))
    criterion.report(not bad, f"{pairs} pairs; failing {bad}")


@pytest.mark.criterion(3, "every pi-partial character has a lift")
def test_c3_fong_swan(criterion, reports):
    bad, total = [], 0
    for (n, pi), rows in reports.items():
        for r in rows:
            total += 1
            if r.phi_index is None or r.num_lifts < 1 or not brute_lifts(load_group(n), pi, r.phi_index):
                bad.append((n, pi.spec(), r.phi_index))
    criterion.report(not bad, f"{total} phi; failing {bad}")


@pytest.mark.criterion(4, "constructive lower bound: distinct induced lifts, count = |W:W'|_pi'")
def test_c4_lower_bound(criterion, reports):
    bad, total = [], 0
    for (n, pi), rows in reports.items():
        G = load_group(n)
        basis = ipi_set(G, pi)
        for r in rows:
            total += 1
            want = brute_lifts(G, pi, r.phi_index)
            W = normal_nucleus(character_table(G)[r.canonical_lift], pi).W
            bound = pi.prime().part(abelianization_order(W))
            imgs = list(r.injection_witness.values())
            ok = (not r.errors and r.lower_ok and r.lower_bound == bound
                  and len(imgs) == len(set(imgs)) == bound
                  and all(basis.restriction_of[i] == r.phi_index for i in imgs)
                  and sorted(r.lifts) == want and bound <= len(want))
            if not ok:
                bad.append((n, pi.spec(), r.phi_index))
    F = load_group("F21")
    principal = reports[("F21", PiSet.p_prime(3))][0]
    f21 = (principal.phi_degree == 1 and principal.lower_bound == 3 and principal.num_lifts == 3
           and len(brute_lifts(F, PiSet.p_prime(3), 0)) == 3)
    criterion.report(not bad and f21, f"{total} phi; F21 p=3 principal 3 <= 3: {f21}; failing {bad}")


@pytest.mark.criterion(5, "order-525 analog, pi={3,5}: lower bound 1 with |L_phi| >= 7")
def test_c5_strictness(criterion):
    t0 = time.perf_counter()
    degree, gens = group_spec("E25:F21")
    G = generate_group(degree, gens, name="E25:F21")
    pi = PiSet.of(3, 5)
    rows = verify_group(G, pi)
    dt = time.perf_counter() - t0
    hits = [r for r in rows if r.lower_bound == 1 and len(brute_lifts(G, pi, r.phi_index)) >= 7]
    exact = [len(brute_lifts(G, pi, r.phi_index)) for r in hits]
    ok = bool(hits) and all(r.num_lifts == e for r, e in zip(hits, exact)) and dt < 180
    criterion.report(ok and not any(r.errors for r in rows),
                     f"{len(hits)} phi with lower 1, brute |L_phi| = {sorted(set(exact))}; {dt:.1f}s")


@pytest.mark.criterion(6, "odd order, pi=p': |L_phi| <= |Q:Q'|; F21 p=3 squeeze rows")
def test_c6_upper_bound(criterion, reports):
    bad, total = [], 0
    for n in ODD:
        G = load_group(n)
        for p in primefactors(G.order):
            pi = PiSet.p_prime(p)
            for r in reports[(n, pi)]:
                total += 1
                chi = npi_lift(G, pi, r.phi_index)
                Q = vertex_pair(chi, pi).Q
                W = normal_nucleus(chi, pi).W
                qab = abelianization_order(Q)
                ok = (r.upper_ok and r.upper_bound == qab and Q.order == hall_subgroup(W, pi.prime()).order
                      and len(brute_lifts(G, pi, r.phi_index)) <= qab)
                if not ok:
                    bad.append((n, p, r.phi_index))
    f21 = [(r.phi_degree, r.lower_bound, r.num_lifts, r.upper_bound, r.squeeze_equal)
           for r in reports[("F21", PiSet.p_prime(3))]]
    f21_ok = f21 == [(1, 3, 3, 3, True), (3, 1, 1, 1, True), (3, 1, 1, 1, True)]
    criterion.report(not bad and f21_ok, f"{total} phi over {len(ODD)} groups; F21 rows {f21}; failing {bad}")


@pytest.mark.criterion(7, "odd-order structure: factorable degrees, linear vertex characters, rdz, partition")
def test_c7_odd_structure(criterion, reports):
    bad, counts = [], {"factorable": 0, "lifts": 0, "rdz": 0, "blocks": 0}
    for n in ODD:
        G = load_group(n)
        T = character_table(G)
        for p in primefactors(G.order):
            pi = PiSet.p_prime(p)
            basis = ipi_set(G, pi)
            if factorable_lift_degree_violations(G, pi):
                bad.append((n, p, "factorable"))
            for chi in T:
                if basis.restriction_of[chi.index] < 0:
                    continue
                counts["lifts"] += 1
                if factorize_pi(chi, pi) is not None:
                    counts["factorable"] += 1
                    if not pi.is_pi_number(chi.degree):
                        bad.append((n, p, "degree", chi.index))
                if normal_nucleus(chi, pi).gamma_pi_prime.degree != 1:
                    bad.append((n, p, "linear", chi.index))
            members = [m.vals for m in basis.members]
            for Q, delta, chi, _ in rdz_restriction_cases(G, p):
                counts["rdz"] += 1
                if not any(np.array_equal(restrict0(chi, pi).vals, m) for m in members):
                    bad.append((n, p, "rdz", chi.index))
            for r in reports[(n, pi)]:
                Q = vertex_pair(npi_lift(G, pi, r.phi_index), pi).Q
                NQ = normalizer(G, Q)
                TQ = character_table(Q)
                flat = [i for b in r.vertex_partition for i in b["lifts"]]
                if len(flat) != len(set(flat)) or sorted(flat) != brute_lifts(G, pi, r.phi_index):
                    bad.append((n, p, "disjoint", r.phi_index))
                seen, total = set(), 0
                for d in TQ:
                    if d.degree == 1 and d.index not in seen:
                        seen.update(orbit_of_character(NQ, Q, d))
                        total += NQ.order // stabilizer_of_character(NQ, Q, d).order
                if total != abelianization_order(Q):
                    bad.append((n, p, "orbit sum", r.phi_index))
                for b in r.vertex_partition:
                    counts["blocks"] += 1
                    stab = stabilizer_of_character(NQ, Q, TQ[b["delta"]])
                    if TQ[b["delta"]].degree != 1 or b["orbit_size"] != NQ.order // stab.order:
                        bad.append((n, p, "block", r.phi_index))
    criterion.report(not bad, f"{counts}; failing {bad[:10]}")


def brute_normalizer_product(G, N, M, Q):
    """N_{NM}(Q) == N_N(Q) N_M(Q) by direct conjugation over the multiplication table."""
    mult, inv = G.mult, G.inv
    q = G.local(Q)
    qs = set(q.tolist())

    def norm(X):
        return [x for x in X if set(mult[mult[inv[x], q], x].tolist()) == qs]

    def prod(A, B):
        return set(mult[np.ix_(A, B)].ravel().tolist())

    n, m = G.local(N), G.local(M)
    return set(norm(sorted(prod(n, m)))) == prod(norm(n), norm(m))


@pytest.mark.criterion(8, "100 sampled configurations: N_NM(Q) = N_N(Q) N_M(Q)")
def test_c8_normalizer_product(criterion):
    pool = [(n, c) for n in CORPUS for c in normalizer_product_configurations(load_group(n))]
    sample = random.Random(0).sample(pool, 100)
    bad = []
    for n, (N, M, Q) in sample:
        G = load_group(n)
        if not (normalizer_product_holds(G, N, M, Q) and brute_normalizer_product(G, N, M, Q)):
            bad.append((n, N.order, M.order, Q.order))
    nontrivial = sum(1 for _, (N, M, Q) in sample if N != M and Q.order > 1)
    criterion.report(len(sample) == 100 and not bad,
                     f"{len(sample)} of {len(pool)} configurations, {nontrivial} with N != M and Q > 1; "
                     f"failing {bad}")


@pytest.mark.criterion(9, "fast pi-special test agrees with the subnormal oracle on all corpus characters")
def test_c9_oracle_equivalence(criterion):
    bad, total = [], 0
    for n in CORPUS:
        G = load_group(n)
        for pi in corpus_pi_sets(G):
            for chi in character_table(G):
                total += 1
                if is_pi_special(chi, pi) != is_pi_special_oracle(chi, pi):
                    bad.append((n, pi.spec(), chi.index))
    criterion.report(not bad, f"{total} (character, pi) checks; failing {bad}")


@pytest.mark.criterion(10, "two full census runs with seed 0 give byte-identical CSV")
def test_c10_determinism(criterion, tmp_path):
    env = {k: v for k, v in os.environ.items() if k != "PILIFT_CACHE_DIR"}
    outs, times = [], []
    for k in range(2):
        path = tmp_path / f"census{k}.csv"
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "pilift.cli", "census", "--corpus", "default",
                               "--seed", "0", "--out", str(path)], env=env, capture_output=True, text=True)
        times.append(time.perf_counter() - t0)
        assert proc.returncode == 0, proc.stderr
        outs.append(path.read_bytes())
    in_process = rows_to_csv(census("default")).encode()
    lines = outs[0].decode().splitlines()
    ok = outs[0] == outs[1] == in_process and max(times) < 900 and len(lines) > 1
    criterion.report(ok, f"{len(lines) - 1} rows, runs {times[0]:.1f}s and {times[1]:.1f}s")
