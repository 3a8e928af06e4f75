"""pi-classes, restriction to pi-elements, the basis I_pi(G) and lift sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as iproduct
from typing import Optional

import numpy as np

from . import _modp
from .chartab import Character, ClassFunction, character_table, family
from .cyclotomic import CycloNum
from .errors import IntegrityError
from .groups import Group, is_pi_separable
from .primes import PiSet

DFS_NODE_LIMIT = 200_000


def pi_classes(G: Group, pi: PiSet) -> list:
    """Indices of the classes of pi-elements; the identity class is always first."""
    key = ("pi_classes", pi)
    out = G.cache.get(key)
    if out is None:
        out = [k for k, c in enumerate(G.classes) if pi.is_pi_number(c.element_order)]
        G.cache[key] = out
    return list(out)


class PartialChar:
    """A class function on the pi-classes of G (values in Q(zeta_E))."""

    def __init__(self, group: Group, pi: PiSet, vals: np.ndarray, den: int = 1):
        self.group = group
        self.pi = pi
        self.vals = vals
        self.den = den

    @property
    def classes(self) -> list:
        return pi_classes(self.group, self.pi)

    @property
    def degree(self):
        return ClassFunction(self.group, self.vals[:1], self.den).degree

    def values(self) -> list:
        E = family(self.group).E
        return [CycloNum(E, row.tolist(), self.den) for row in self.vals]

    @cached_property
    def modl(self) -> np.ndarray:
        return ClassFunction(self.group, self.vals, self.den).modl

    @cached_property
    def key(self) -> bytes:
        return np.ascontiguousarray(self.vals, dtype=np.int64).tobytes() + self.den.to_bytes(8, "little")

    def __eq__(self, other):
        if not isinstance(other, PartialChar):
            return NotImplemented
        return (other.group is self.group and other.pi == self.pi and self.den == other.den
                and np.array_equal(self.vals, other.vals))

    def __hash__(self):
        return hash((self.group, self.pi, self.key))

    def __repr__(self):
        return "(" + ", ".join(str(v) for v in self.values()) + ")"

    def to_json(self) -> dict:
        G = self.group
        return {str(G.element(G.classes[k].representative)): str(v)
                for k, v in zip(self.classes, self.values())}


def restrict0(chi: ClassFunction, pi: PiSet) -> PartialChar:
    """chi^0: the values of chi on pi-elements."""
    pc = pi_classes(chi.group, pi)
    return PartialChar(chi.group, pi, chi.vals[pc], chi.den)


@dataclass
class IpiSet:
    group: Group
    pi: PiSet
    members: list  # PartialChar, ordered by least index of a lift
    witness: list  # per member, the least table index of a lift
    decomposition: np.ndarray  # decomposition[chi, phi] = multiplicity of phi in chi^0
    restriction_of: list = field(repr=False, default_factory=list)  # chi -> member index or -1

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i) -> PartialChar:
        return self.members[i]

    def index(self, phi: PartialChar) -> int:
        for i, m in enumerate(self.members):
            if m == phi:
                return i
        raise KeyError("not a member of I_pi")

    def to_json(self) -> dict:
        return {
            "pi": self.pi.spec(),
            "members": [{"index": i, "degree": int(m.degree), "witness_lift": self.witness[i],
                         "values": m.to_json()} for i, m in enumerate(self.members)],
        }


def _lift_coeffs(c: np.ndarray, ell: int) -> np.ndarray:
    c = np.asarray(c, dtype=np.int64) % ell
    return np.where(c > ell // 2, c - ell, c)


def _in_cone(target: PartialChar, basis_vals: list, basis_deg: list, basis_modl: np.ndarray,
             ell: int) -> bool:
    """Whether target is a nonnegative integer combination of the given partial characters."""
    d = int(target.degree)
    k = len(basis_vals)
    if k == 0:
        return False
    A = basis_modl.T  # pi-classes x k
    if _modp.rank(A, ell) == k:
        # independent mod ell: the only candidate is the mod-ell solution
        x = _modp.solve(A, target.modl, ell)
        if x is None:
            return False
        c = _lift_coeffs(x, ell)
        if (c < 0).any() or int(c @ np.array(basis_deg)) != d:
            return False
        acc = sum(int(ci) * v for ci, v in zip(c, basis_vals) if ci)
        return np.array_equal(acc, target.vals)
    return _cone_dfs(target, basis_vals, basis_deg, basis_modl, ell)


def _cone_dfs(target, basis_vals, basis_deg, basis_modl, ell) -> bool:
    d = int(target.degree)
    order = sorted(range(len(basis_vals)), key=lambda i: -basis_deg[i])
    nodes = 0

    def rec(pos, remaining, acc_modl, chosen):
        nonlocal nodes
        nodes += 1
        if nodes > DFS_NODE_LIMIT:
            raise IntegrityError("cone search exceeded its node budget")
        if remaining == 0:
            if not np.array_equal(acc_modl, target.modl % ell):
                return False
            acc = sum(c * basis_vals[i] for i, c in chosen if c)
            return np.array_equal(acc, target.vals)
        if pos == len(order):
            return False
        i = order[pos]
        for c in range(remaining // basis_deg[i], -1, -1):
            if rec(pos + 1, remaining - c * basis_deg[i], (acc_modl + c * basis_modl[i]) % ell,
                   chosen + [(i, c)]):
                return True
        return False

    return rec(0, d, np.zeros_like(target.modl), [])


def ipi_set(G: Group, pi: PiSet) -> IpiSet:
    """I_pi(G): the distinct chi^0 that are not N-combinations of the others."""
    key = ("ipi", pi)
    got = G.cache.get(key)
    if got is not None:
        return got
    if not is_pi_separable(G, pi):
        raise IntegrityError(f"{G.label()} is not {pi.spec()}-separable")
    T = character_table(G)
    ell = family(G).ell
    pc = pi_classes(G, pi)
    restr = [restrict0(chi, pi) for chi in T]
    first: dict = {}
    for i, r in enumerate(restr):
        first.setdefault(r.key, i)
    distinct = sorted(first.values(), key=lambda i: (T.degrees[i], i))
    accepted: list = []
    for i in distinct:
        phi = restr[i]
        small = [j for j in accepted if T.degrees[j] < T.degrees[i]]
        if not _in_cone(phi, [restr[j].vals for j in small], [T.degrees[j] for j in small],
                        np.array([restr[j].modl for j in small]).reshape(len(small), len(pc)), ell):
            accepted.append(i)
    if len(accepted) != len(pc):
        raise IntegrityError(f"|I_pi| = {len(accepted)} but there are {len(pc)} pi-classes")
    accepted.sort()
    B = np.array([restr[j].modl for j in accepted])  # members x pi-classes
    if _modp.rank(B, ell) != len(accepted):
        raise IntegrityError("I_pi is not linearly independent mod ell")
    members = [restr[j] for j in accepted]
    # chi^0 = D[chi] @ members, solved mod ell then checked exactly
    Y = np.array([r.modl for r in restr])
    Binv = _inverse_mod(B, ell)
    D = _lift_coeffs(Y @ Binv % ell, ell)
    if (D < 0).any():
        raise IntegrityError("negative decomposition number")
    M = np.stack([m.vals for m in members])
    exact = np.tensordot(D, M, axes=1)
    want = np.stack([r.vals for r in restr])
    if not np.array_equal(exact, want):
        raise IntegrityError("decomposition of chi^0 over I_pi fails exactly")
    if (D.sum(axis=1) == 0).any():
        raise IntegrityError("zero row in the decomposition matrix")
    restriction_of = []
    for r in restr:
        hit = [m for m, mem in enumerate(members) if mem.key == r.key]
        restriction_of.append(hit[0] if hit else -1)
    out = IpiSet(G, pi, members, list(accepted), D, restriction_of)
    G.cache[key] = out
    return out


def _inverse_mod(B: np.ndarray, ell: int) -> np.ndarray:
    n = B.shape[0]
    R, piv = _modp.rref(np.concatenate([B % ell, np.eye(n, dtype=np.int64)], axis=1), ell)
    if piv[:n] != list(range(n)):
        raise IntegrityError("singular matrix mod ell")
    return R[:, n:]


def decompose_partial(f: PartialChar, basis: IpiSet) -> dict:
    """Integer coefficients of f over I_pi; raises unless f is an integer combination."""
    ell = family(basis.group).ell
    B = np.array([m.modl for m in basis.members])
    c = _lift_coeffs(f.modl @ _inverse_mod(B, ell) % ell, ell)
    M = np.stack([m.vals for m in basis.members])
    if f.den != 1 or not np.array_equal(np.tensordot(c, M, axes=1), f.vals):
        raise IntegrityError("not an integer combination of I_pi")
    return {i: int(x) for i, x in enumerate(c) if x}


def lifts(basis: IpiSet, phi_index: int) -> list:
    """L_phi: every chi in Irr(G) with chi^0 = phi, compared exactly."""
    phi = basis.members[phi_index]
    T = character_table(basis.group)
    pc = pi_classes(basis.group, basis.pi)
    out = [chi for chi in T if chi.den == phi.den and np.array_equal(chi.vals[pc], phi.vals)]
    if not out:
        raise IntegrityError(f"phi[{phi_index}] has no lift")
    return out


def lift_of(basis: IpiSet, chi: Character) -> Optional[int]:
    """Index of chi^0 in I_pi, or None when chi^0 is reducible."""
    i = basis.restriction_of[chi.index]
    return None if i < 0 else i


def brute_force_ipi(G: Group, pi: PiSet) -> list:
    """Table indices of representatives of I_pi by the plain definition.

    A distinct restriction is kept when no combination of the other distinct
    restrictions with coefficients bounded by the degree reproduces it.
    """
    T = character_table(G)
    restr = [restrict0(chi, pi) for chi in T]
    first: dict = {}
    for i, r in enumerate(restr):
        first.setdefault(r.key, i)
    reps = sorted(first.values())
    out = []
    for i in reps:
        target = restr[i]
        d = T.degrees[i]
        others = [j for j in reps if j != i and T.degrees[j] <= d]
        found = False
        ranges = [range(d // T.degrees[j] + 1) for j in others]
        for coeffs in iproduct(*ranges):
            if sum(c * T.degrees[j] for c, j in zip(coeffs, others)) != d:
                continue
            acc = sum((c * restr[j].vals for c, j in zip(coeffs, others) if c),
                      np.zeros_like(target.vals))
            if np.array_equal(acc, target.vals):
                found = True
                break
        if not found:
            out.append(i)
    return out
