"""Lift-count bounds, per-phi verification records and the census."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from sympy import factorint

from .catalog import corpus_entries, corpus_pi_sets, load_group
from .chartab import (Character, character_table, induce, inner_product_exact,
                      orbit_of_character, values_in_Q_pi)
from .errors import IntegrityError, PiliftError, TheoremViolation
from .groups import (Group, abelianization_order, all_subgroups, conj_map, find_conjugator,
                     is_pi_separable, join, normal_subgroups, normalizer, set_product)
from .nucleus import NucleusResult, normal_nucleus, npi_lift, rdz_restriction_cases, vertex_pair
from .pichars import ipi_set, lifts
from .primes import PiSet
from .special import factorize_pi, pi_special_indices

CSV_COLUMNS = [
    "group_id", "order", "odd", "pi_spec", "p", "phi_index", "phi_degree", "num_lifts",
    "lower_bound", "upper_bound", "nucleus_order", "nucleus_index_pi_prime", "vertex_order",
    "vertex_index", "delta_order", "lower_ok", "upper_ok", "strict_lower", "squeeze_equal", "errors",
]


@dataclass
class LiftReport:
    group_id: str
    order: int
    odd: bool
    pi_spec: str
    p: Optional[int]
    phi_index: Optional[int]
    phi_degree: Optional[int] = None
    lifts: list = field(default_factory=list)
    canonical_lift: Optional[int] = None
    nucleus_order: Optional[int] = None
    nucleus_abelianization: Optional[int] = None
    lower_bound: Optional[int] = None
    vertex_order: Optional[int] = None
    vertex_index: Optional[int] = None
    delta_order: Optional[int] = None
    upper_bound: Optional[int] = None
    injection_witness: dict = field(default_factory=dict)
    vertex_partition: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    lower_ok: Optional[bool] = None
    upper_ok: Optional[bool] = None
    strict_lower: Optional[bool] = None
    squeeze_equal: Optional[bool] = None
    errors: list = field(default_factory=list)

    @property
    def num_lifts(self) -> int:
        return len(self.lifts)

    def csv_row(self) -> list:
        def fmt(v):
            if v is None:
                return "NA"
            if isinstance(v, bool):
                return "true" if v else "false"
            return str(v)

        return [fmt(v) for v in (
            self.group_id, self.order, self.odd, self.pi_spec, self.p, self.phi_index,
            self.phi_degree, self.num_lifts if self.phi_index is not None else None,
            self.lower_bound, self.upper_bound, self.nucleus_order, self.lower_bound,
            self.vertex_order, self.vertex_index, self.delta_order, self.lower_ok, self.upper_ok,
            self.strict_lower, self.squeeze_equal)] + [" | ".join(self.errors)]

    def to_json(self) -> dict:
        d = asdict(self)
        d["num_lifts"] = self.num_lifts
        d["injection_witness"] = {str(k): v for k, v in self.injection_witness.items()}
        return d


# -- lower bound -------------------------------------------------------------


def _irreducible_index(f, T) -> Optional[int]:
    """Table index when f is irreducible (exact norm check), else None."""
    if inner_product_exact(f, f) != 1:
        return None
    i = T.index_of(f)
    if i is None:
        raise IntegrityError("norm-one character missing from the table")
    return i


def induction_injectivity_check(chi: Character, pi: PiSet, nuc: Optional[NucleusResult] = None) -> dict:
    """For chi in N_pi(G) with nucleus (W, alpha): gamma -> (alpha gamma)^G over X_pi'(W)
    lands in Irr(G) and is injective."""
    G = chi.group
    T = character_table(G)
    nuc = nuc or normal_nucleus(chi, pi)
    W, alpha = nuc.W, nuc.gamma
    TW = character_table(W)
    images = {}
    for gi in sorted(pi_special_indices(W, pi.prime())):
        ind = induce(alpha * TW[gi], G)
        i = _irreducible_index(ind, T)
        if i is None:
            raise TheoremViolation(f"(alpha gamma)^G reducible for gamma = {gi}")
        images[gi] = i
    if len(set(images.values())) != len(images):
        raise TheoremViolation("(alpha gamma)^G not injective in gamma")
    if images.get(0) != chi.index:
        raise TheoremViolation("(alpha 1)^G differs from chi")
    return images


def linear_pi_prime_characters(W: Group, pi: PiSet) -> list:
    TW = character_table(W)
    return [lam for lam in TW if lam.degree == 1
            and pi.prime().is_pi_number(TW.det_orders[lam.index])]


def lower_bound_report(G: Group, pi: PiSet, phi_index: int, rep: LiftReport) -> None:
    basis = ipi_set(G, pi)
    T = character_table(G)
    L = [chi.index for chi in lifts(basis, phi_index)]
    rep.lifts = L
    chi = npi_lift(G, pi, phi_index)
    rep.canonical_lift = chi.index
    nuc = normal_nucleus(chi, pi)
    W, gamma = nuc.W, nuc.gamma
    ab = abelianization_order(W)
    rep.nucleus_order = W.order
    rep.nucleus_abelianization = ab
    rep.lower_bound = pi.prime().part(ab)
    witness = {}
    for lam in linear_pi_prime_characters(W, pi):
        i = _irreducible_index(induce(gamma * lam, G), T)
        if i is None or basis.restriction_of[i] != phi_index:
            raise TheoremViolation(f"(gamma lambda)^G is not a lift of phi for lambda = {lam.index}")
        witness[lam.index] = i
    if len(set(witness.values())) != len(witness):
        raise TheoremViolation("lambda -> (gamma lambda)^G is not injective")
    if len(witness) != rep.lower_bound:
        raise IntegrityError(f"{len(witness)} linear pi'-special characters but |W:W'|_pi' = {rep.lower_bound}")
    rep.injection_witness = witness
    rep.checks["induced_products"] = len(induction_injectivity_check(chi, pi, nuc))
    rep.lower_ok = rep.lower_bound <= len(L)
    rep.strict_lower = rep.lower_bound < len(L)
    if not rep.lower_ok:
        raise TheoremViolation("lower bound fails")


# -- upper bound and the vertex partition --------------------------------------------


def _transport_delta(G: Group, Qc: Group, delta: Character, Q: Group, g: int) -> Character:
    """delta^g as a character of Q = Qc^g."""
    TQ = character_table(Q)
    cm = conj_map(G, int(G.inv[g]))  # x -> g x g^-1 takes Q back into Qc
    locQ = G.local(Q)
    lookup = np.full(G.order, -1, dtype=np.int64)
    lookup[G.local(Qc)] = Qc.class_of
    cls = lookup[cm[locQ[[c.representative for c in Q.classes]]]]
    if (cls < 0).any():
        raise IntegrityError("conjugator does not carry the vertex subgroups")
    img = delta.modl[cls]
    i = TQ._by_modl.get(img.tobytes())
    if i is None:
        raise IntegrityError("transported vertex character is not irreducible")
    return TQ[i]


def upper_bound_report(G: Group, pi: PiSet, phi_index: int, rep: LiftReport) -> None:
    chi = npi_lift(G, pi, phi_index)
    nuc = normal_nucleus(chi, pi)
    v = vertex_pair(chi, pi, nuc)
    Q = v.Q
    qab = abelianization_order(Q)
    rep.vertex_order = Q.order
    rep.vertex_index = qab
    rep.delta_order = character_table(Q).det_orders[v.delta.index]
    if not (G.order % 2 and pi.single_complement):
        return
    rep.upper_bound = qab
    rep.upper_ok = len(rep.lifts) <= qab
    if rep.lower_bound is not None:
        rep.squeeze_equal = rep.lower_bound == len(rep.lifts) == qab
    if not rep.upper_ok:
        raise TheoremViolation("upper bound fails")


def lift_partition_by_vertex(G: Group, pi: PiSet, phi_index: int) -> list:
    """Lifts of phi grouped by the N_G(Q)-orbit of their vertex character moved into Q."""
    basis = ipi_set(G, pi)
    Q = vertex_pair(npi_lift(G, pi, phi_index), pi).Q
    NQ = normalizer(G, Q)
    TQ = character_table(Q)
    blocks: dict = {}
    for chi in lifts(basis, phi_index):
        nuc = normal_nucleus(chi, pi)
        if nuc.gamma_pi_prime.degree != 1:
            raise TheoremViolation(f"lift {chi.index} has a nonlinear pi'-factor in its nucleus")
        v = vertex_pair(chi, pi, nuc)
        g = find_conjugator(G, v.Q, Q)
        if g is None:
            raise TheoremViolation(f"vertex subgroup of lift {chi.index} is not conjugate to Q")
        delta = _transport_delta(G, v.Q, v.delta, Q, g)
        orbit = orbit_of_character(NQ, Q, delta)
        blocks.setdefault(orbit[0], {"orbit": orbit, "lifts": []})["lifts"].append(chi.index)
    out = []
    for label in sorted(blocks):
        b = blocks[label]
        size = len(b["orbit"])  # |N_G(Q) : G_delta|
        if len(b["lifts"]) > size:
            raise TheoremViolation(f"|L_phi([delta])| = {len(b['lifts'])} exceeds {size}")
        out.append({"delta": label, "orbit_size": size, "lifts": b["lifts"]})
    # the orbit sizes of all linear characters of Q add up to |Q:Q'|
    linear = [d.index for d in TQ if d.degree == 1]
    seen, total = set(), 0
    for i in linear:
        if i not in seen:
            orb = orbit_of_character(NQ, Q, TQ[i])
            seen.update(orb)
            total += len(orb)
    if total != abelianization_order(Q):
        raise TheoremViolation("orbit sizes of linear vertex characters do not sum to |Q:Q'|")
    covered = sorted(i for b in out for i in b["lifts"])
    if covered != sorted(chi.index for chi in lifts(basis, phi_index)):
        raise IntegrityError("vertex blocks do not partition L_phi")
    return out


# -- group-level odd-order checks -------------------------------------------------------


def factorable_lift_degree_violations(G: Group, pi: PiSet) -> list:
    """Indices of characters violating: pi-factorable with chi^0 in I_pi implies pi-degree."""
    basis = ipi_set(G, pi)
    bad = []
    for chi in character_table(G):
        if basis.restriction_of[chi.index] >= 0 and factorize_pi(chi, pi) is not None:
            if not pi.is_pi_number(chi.degree):
                bad.append(chi.index)
    return bad


def rdz_restriction_check(G: Group, p: int) -> dict:
    cases = rdz_restriction_cases(G, p)
    return {"cases": len(cases), "violations": [c[2].index for c in cases if not c[3]]}


def qpi_check(G: Group, pi: PiSet, chi: Character) -> bool:
    return values_in_Q_pi(chi, pi)


# -- normalizers in products of normal subgroups -----------------------------------


def normalizer_in(G: Group, X: Group, Q: Group) -> np.ndarray:
    """Sorted local indices (in G) of {x in X : Q^x = Q}."""
    nq = G.mask_of(normalizer(G, Q))
    return np.sort(G.local(X)[nq[G.local(X)]])


def normalizer_product_holds(G: Group, N: Group, M: Group, Q: Group) -> bool:
    NM = join(G, N, M)
    lhs = normalizer_in(G, NM, Q)
    A = G.subgroup(normalizer_in(G, N, Q))
    B = G.subgroup(normalizer_in(G, M, Q))
    rhs = set_product(G, A, B)
    return bool(np.array_equal(lhs, rhs))


def normalizer_product_configurations(G: Group, limit: int = 5000) -> list:
    """(N, M, Q): N, M normal, Q a p-subgroup that is Sylow in QN and in QM."""
    normals = normal_subgroups(G)
    masks = [G.mask_of(N) for N in normals]
    out = []
    for Q in all_subgroups(G, limit):
        f = factorint(Q.order)
        if len(f) != 1:
            continue
        pp = PiSet.of(next(iter(f)))
        loc = G.local(Q)
        # |QN| = |Q||N| / |Q n N|, a subgroup since N is normal
        good = [N for N, m in zip(normals, masks)
                if pp.part(Q.order * N.order // int(m[loc].sum())) == Q.order]
        out.extend((N, M, Q) for N in good for M in good)
    return out


# -- rows ------------------------------------------------------------------------


def _new_report(G: Group, pi: PiSet, phi_index: Optional[int]) -> LiftReport:
    return LiftReport(G.label(), G.order, bool(G.order % 2), pi.spec(), pi.single_complement, phi_index)


def verify_group(G: Group, pi: PiSet) -> list:
    """One LiftReport per phi in I_pi(G); failures are recorded on the row, never raised."""
    try:
        if not is_pi_separable(G, pi):
            raise IntegrityError(f"not {pi.spec()}-separable")
        basis = ipi_set(G, pi)
    except PiliftError as exc:
        rep = _new_report(G, pi, None)
        rep.errors.append(_describe(exc))
        return [rep]
    odd_pp = bool(G.order % 2) and pi.single_complement is not None
    group_errors = []
    if odd_pp:
        try:
            bad = factorable_lift_degree_violations(G, pi)
            if bad:
                group_errors.append(f"theorem: factorable lifts of non-pi degree {bad}")
            rdz = rdz_restriction_check(G, pi.single_complement)
            if rdz["violations"]:
                group_errors.append(f"theorem: rdz characters with reducible restriction {rdz['violations']}")
        except PiliftError as exc:
            group_errors.append(_describe(exc))
    out = []
    for i in range(len(basis)):
        rep = _new_report(G, pi, i)
        rep.phi_degree = int(basis.members[i].degree)
        rep.errors.extend(group_errors)
        for step in (lower_bound_report, upper_bound_report):
            try:
                step(G, pi, i, rep)
            except PiliftError as exc:
                rep.errors.append(_describe(exc))
        if odd_pp:
            try:
                part = lift_partition_by_vertex(G, pi, i)
                rep.vertex_partition = part
                rep.checks["partition_blocks"] = len(part)
                if not qpi_check(G, pi, npi_lift(G, pi, i)):
                    raise TheoremViolation("canonical lift has values outside Q_pi")
                rep.checks["q_pi"] = True
            except PiliftError as exc:
                rep.errors.append(_describe(exc))
        out.append(rep)
    return out


def _describe(exc: Exception) -> str:
    kind = "theorem" if isinstance(exc, TheoremViolation) else (
        "integrity" if isinstance(exc, IntegrityError) else "input")
    return f"{kind}: {exc}"


def census_group(source: str) -> list:
    try:
        G = load_group(source)
    except PiliftError as exc:
        rep = LiftReport(source, 0, False, "NA", None, None)
        rep.errors.append(_describe(exc))
        return [rep]
    rows = []
    for pi in corpus_pi_sets(G):
        rows.extend(verify_group(G, pi))
    return rows


def census(corpus: str, jobs: int = 1) -> list:
    entries = corpus_entries(corpus)
    if jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(census_group, entries))
    else:
        parts = [census_group(e) for e in entries]
    return [r for part in parts for r in part]


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_row())
    return buf.getvalue()


def rows_to_json(rows: list) -> str:
    return json.dumps([r.to_json() for r in rows], indent=1, sort_keys=True)
