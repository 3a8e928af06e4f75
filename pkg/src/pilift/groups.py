"""Finite permutation groups by explicit enumeration.

Every group is enumerated once as a *root*; elements are sorted
lexicographically by their image tuples, so element index order is the
lexicographic order of permutations and the identity is always index 0.
Subgroups share the root's enumeration: a subgroup is a sorted array of root
indices plus its own local multiplication table, and each distinct member set
is materialised only once per root, so everything cached on a subgroup
(classes, character tables, normal subgroups) is shared.

Products act left to right: ``(g * h)(x) = h(g(x))`` and ``x ** g = g^-1 x g``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from random import Random
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import factorint

from .errors import InputError, IntegrityError, OrderCapExceeded
from .primes import PiSet, crt_exponent, lcm

DEFAULT_ORDER_CAP = 20000


class Perm:
    """A permutation of ``{0, ..., n-1}`` given by its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Perm":
        """Parse cycle notation such as ``(0 1 2)(3 4)`` or ``(0,1)``; ``()`` is the identity."""
        images = list(range(degree))
        text = text.strip()
        if not re.fullmatch(r"(\(\s*[\d\s,]*\))*", text.replace(" ", "")) and text:
            raise ValueError(f"bad cycle notation: {text!r}")
        for body in re.findall(r"\(([^()]*)\)", text):
            pts = [int(x) for x in re.split(r"[\s,]+", body.strip()) if x]
            if len(set(pts)) != len(pts):
                raise ValueError(f"repeated point in cycle ({body})")
            for a, b in zip(pts, pts[1:] + pts[:1]):
                if not 0 <= a < degree:
                    raise ValueError(f"point {a} outside degree {degree}")
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Perm(o[i] for i in self.images)

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Perm.identity(self.degree), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def cycles(self) -> list:
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles()))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __str__(self):
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    __repr__ = __str__


@dataclass(frozen=True)
class ConjClass:
    representative: int  # local element index, lexicographically least member
    members: tuple
    size: int
    element_order: int
    power_classes: tuple  # power_classes[k] = class of representative**k, 0 <= k < order


class Group:
    """A permutation group, either a root enumeration or a subgroup of one."""

    def __init__(self, root: Optional["Group"], ridx: np.ndarray, name: Optional[str] = None):
        self.root = self if root is None else root
        self.ridx = ridx
        self.name = name
        self._gens: Optional[list] = None
        self.cache: dict = {}
        if root is None:
            self._subgroups: dict = {}

    # -- basic data ----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.ridx)

    def __len__(self):
        return self.order

    @property
    def degree(self) -> int:
        return self.root._perms.shape[1]

    @property
    def key(self) -> bytes:
        return self.ridx.tobytes()

    @property
    def is_root(self) -> bool:
        return self.root is self

    @cached_property
    def perms(self) -> np.ndarray:
        return self.root._perms[self.ridx]

    def element(self, i: int) -> Perm:
        return Perm(self.perms[i].tolist())

    def elements(self) -> list:
        return [Perm(row) for row in self.perms.tolist()]

    def index_of(self, g: Perm) -> int:
        r = self.root._index.get(tuple(g.images))
        if r is None:
            raise KeyError(f"{g} not in group")
        i = int(np.searchsorted(self.ridx, r))
        if i >= self.order or self.ridx[i] != r:
            raise KeyError(f"{g} not in group")
        return i

    @cached_property
    def mult(self) -> np.ndarray:
        root = self.root
        lookup = np.full(root.order, -1, dtype=np.int32)
        lookup[self.ridx] = np.arange(self.order, dtype=np.int32)
        return lookup[root.mult[np.ix_(self.ridx, self.ridx)]]

    @cached_property
    def inv(self) -> np.ndarray:
        return np.argmax(self.mult == 0, axis=1).astype(np.int32)

    @cached_property
    def gens(self) -> list:
        if self._gens is not None:
            return list(self._gens)
        gens: list = []
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        for x in range(1, self.order):
            if not mask[x]:
                gens.append(x)
                mask = _closure_mask(self.mult, gens)
                if mask.all():
                    break
        return gens

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        ords = np.zeros(n, dtype=np.int64)
        pw = ar.copy()
        k = 1
        while True:
            hit = (pw == 0) & (ords == 0)
            ords[hit] = k
            if (ords > 0).all():
                return ords
            pw = self.mult[pw, ar]
            k += 1

    @cached_property
    def exponent(self) -> int:
        return lcm(*{int(o) for o in self.element_orders})

    @cached_property
    def classes(self) -> list:
        return conjugacy_classes(self)

    @cached_property
    def class_of(self) -> np.ndarray:
        out = np.empty(self.order, dtype=np.int64)
        for c, cl in enumerate(self.classes):
            out[list(cl.members)] = c
        return out

    @cached_property
    def class_sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.classes], dtype=np.int64)

    @cached_property
    def inverse_class(self) -> np.ndarray:
        return np.array([self.class_of[self.inv[c.representative]] for c in self.classes])

    @property
    def is_odd(self) -> bool:
        return self.order % 2 == 1

    @cached_property
    def is_abelian(self) -> bool:
        g = self.gens
        m = self.mult
        return all(m[a, b] == m[b, a] for a in g for b in g)

    def label(self) -> str:
        return self.name or f"<order {self.order}>"

    def __repr__(self):
        return f"Group({self.label()}, order={self.order})"

    # -- subgroup plumbing ---------------------------------------------------

    def subgroup(self, members: Iterable[int]) -> "Group":
        """The subgroup with the given local member indices (assumed closed)."""
        if not isinstance(members, np.ndarray):
            members = list(members)
        loc = np.unique(np.asarray(members, dtype=np.int64))
        return self.root._materialise(self.ridx[loc])

    def subgroup_from_mask(self, mask: np.ndarray) -> "Group":
        return self.root._materialise(self.ridx[np.nonzero(mask)[0]])

    def _materialise(self, ridx: np.ndarray) -> "Group":
        ridx = np.ascontiguousarray(ridx, dtype=np.int64)
        key = ridx.tobytes()
        H = self._subgroups.get(key)
        if H is None:
            if len(ridx) == self.order:
                return self
            H = Group(self, ridx)
            self._subgroups[key] = H
        return H

    def trivial_subgroup(self) -> "Group":
        return self.subgroup([0])

    def local(self, H: "Group") -> np.ndarray:
        """Local indices in self of the elements of H (H must be a subgroup)."""
        if H.root is not self.root:
            raise ValueError("groups from different enumerations")
        pos = np.searchsorted(self.ridx, H.ridx)
        if (pos >= self.order).any() or (self.ridx[np.minimum(pos, self.order - 1)] != H.ridx).any():
            raise ValueError("not a subgroup")
        return pos

    def contains(self, H: "Group") -> bool:
        return H.root is self.root and bool(np.isin(H.ridx, self.ridx, assume_unique=True).all())

    def mask_of(self, H: "Group") -> np.ndarray:
        m = np.zeros(self.order, dtype=bool)
        m[self.local(H)] = True
        return m

    def __eq__(self, other):
        return self is other or (isinstance(other, Group) and other.root is self.root
                                 and self.order == other.order and self.key == other.key)

    def __hash__(self):
        return hash((id(self.root), self.key))

    def __le__(self, other: "Group") -> bool:
        return other.contains(self)

    def __lt__(self, other: "Group") -> bool:
        return self.order < other.order and other.contains(self)


def _closure_mask(mult: np.ndarray, gens: Sequence[int], start: Optional[np.ndarray] = None,
                  limit: Optional[int] = None, allowed: Optional[np.ndarray] = None):
    """Mask of the subgroup generated by gens (and the subgroup ``start``).

    Returns None when the closure exceeds ``limit`` elements or leaves ``allowed``.
    """
    n = mult.shape[0]
    if start is None:
        mask = np.zeros(n, dtype=bool)
        mask[0] = True
    else:
        mask = start.copy()
    gens = np.asarray(list(gens), dtype=np.int64)
    if gens.size == 0:
        return mask
    frontier = np.nonzero(mask)[0]
    count = len(frontier)
    while frontier.size:
        new = mult[frontier][:, gens].ravel()
        new = new[~mask[new]]
        if new.size == 0:
            break
        new = np.unique(new)
        if allowed is not None and not allowed[new].all():
            return None
        mask[new] = True
        count += new.size
        if limit is not None and count > limit:
            return None
        frontier = new
    return mask


# -- construction -----------------------------------------------------------


def generate_group(degree: int, generators: Sequence[Perm], order_cap: int = DEFAULT_ORDER_CAP,
                   name: Optional[str] = None) -> Group:
    """Enumerate the permutation group generated by ``generators``."""
    for g in generators:
        if g.degree != degree:
            raise InputError(f"generator {g} has degree {g.degree}, expected {degree}")
    ident = tuple(range(degree))
    gens = []
    for g in generators:
        if g.images != ident and g.images not in gens:
            gens.append(g.images)
    seen = {ident: 0}
    elems = [ident]
    parent, via = [-1], [-1]
    right = [[] for _ in gens]
    i = 0
    while i < len(elems):
        e = elems[i]
        for s_i, s in enumerate(gens):
            prod = tuple(s[x] for x in e)
            j = seen.get(prod)
            if j is None:
                j = len(elems)
                if j >= order_cap:
                    raise OrderCapExceeded(f"group order exceeds cap {order_cap}")
                seen[prod] = j
                elems.append(prod)
                parent.append(i)
                via.append(s_i)
            right[s_i].append(j)
        i += 1
    n = len(elems)
    order = sorted(range(n), key=elems.__getitem__)
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    G = Group(None, np.arange(n, dtype=np.int64), name=name)
    G._perms = np.array([elems[k] for k in order], dtype=np.int64).reshape(n, degree)
    G._index = {elems[k]: int(pos[k]) for k in range(n)}
    rnew = [pos[np.asarray(r, dtype=np.int64)][order] for r in right]
    # column j of the table is g_i * g_j for all i; build along the BFS tree
    cols = np.empty((n, n), dtype=np.int32)
    cols[0] = np.arange(n)
    for old in range(1, n):
        j, pj = pos[old], pos[parent[old]]
        cols[j] = rnew[via[old]][cols[pj]]
    G.__dict__["mult"] = np.ascontiguousarray(cols.T)
    G._gens = sorted({int(pos[seen[g]]) for g in gens})
    return G


# -- conjugacy ---------------------------------------------------------------


def conj_map(G: Group, g: int) -> np.ndarray:
    """Array x -> x**g = g^-1 x g over all local x."""
    return G.mult[G.mult[G.inv[g]], g]


def conj_by_all(G: Group, x: int) -> np.ndarray:
    """Array g -> x**g over all local g."""
    ar = np.arange(G.order)
    return G.mult[G.mult[G.inv, x], ar]


def conjugacy_classes(G: Group) -> list:
    """Classes sorted by element order, size, then least representative; identity first."""
    n = G.order
    labels = np.arange(n)
    maps = [conj_map(G, s) for s in G.gens]
    while True:
        new = labels
        for m in maps:
            new = np.minimum(new, new[m])
        if np.array_equal(new, labels):
            break
        labels = new
    ords = G.element_orders
    reps = np.unique(labels)
    groups = {int(r): np.nonzero(labels == r)[0] for r in reps}
    keyed = sorted(groups, key=lambda r: (int(ords[r]), len(groups[r]), r))
    class_of = np.empty(n, dtype=np.int64)
    for c, r in enumerate(keyed):
        class_of[groups[r]] = c
    out = []
    for c, r in enumerate(keyed):
        m = int(ords[r])
        powers, cur = [], 0
        for _ in range(m):
            powers.append(int(class_of[cur]))
            cur = int(G.mult[cur, r])
        out.append(ConjClass(r, tuple(int(x) for x in groups[r]), len(groups[r]), m, tuple(powers)))
    return out


# -- subgroups --------------------------------------------------------------


def subgroup_generated(G: Group, gens: Iterable[int]) -> Group:
    gens = [int(g) for g in gens]
    H = G.subgroup_from_mask(_closure_mask(G.mult, gens))
    if H._gens is None and H is not G and not H.is_root:
        loc = np.searchsorted(H.ridx, G.ridx[gens]) if gens else []
        H._gens = sorted({int(i) for i in loc if i != 0})
    return H


def join(G: Group, A: Group, B: Group) -> Group:
    ga = G.ridx.searchsorted(A.ridx[A.gens]) if A.gens else []
    gb = G.ridx.searchsorted(B.ridx[B.gens]) if B.gens else []
    return subgroup_generated(G, list(ga) + list(gb))


def normal_closure(G: Group, elems: Iterable[int]) -> Group:
    H = subgroup_generated(G, elems)
    while True:
        hg = G.local(H)[H.gens] if H.gens else np.array([], dtype=np.int64)
        extra = set()
        mask = G.mask_of(H)
        for s in G.gens:
            cm = conj_map(G, s)
            for h in hg:
                y = int(cm[h])
                if not mask[y]:
                    extra.add(y)
        if not extra:
            return H
        H = subgroup_generated(G, list(hg) + sorted(extra))


def commutator(G: Group, a: int, b: int) -> int:
    m, inv = G.mult, G.inv
    return int(m[m[m[inv[a], inv[b]], a], b])


def derived_subgroup(G: Group) -> Group:
    key = "derived"
    if key not in G.cache:
        gs = G.gens
        comms = [commutator(G, a, b) for i, a in enumerate(gs) for b in gs[i + 1:]]
        G.cache[key] = normal_closure(G, [c for c in comms if c != 0])
    return G.cache[key]


def abelianization_order(G: Group) -> int:
    """|G : G'|."""
    return G.order // derived_subgroup(G).order


def is_solvable(G: Group) -> bool:
    H = G
    while H.order > 1:
        D = derived_subgroup(H)
        if D.order == H.order:
            return False
        H = D
    return True


def normal_subgroups(G: Group) -> list:
    """All normal subgroups, as joins of the subgroups generated by single classes."""
    if "normal" in G.cache:
        return G.cache["normal"]
    found = {}
    for cl in G.classes:
        H = subgroup_generated(G, cl.members)
        found[H.key] = H
    items = list(found.values())
    frontier = list(items)
    while frontier:
        new = []
        for A in frontier:
            for B in items:
                if A.contains(B) or B.contains(A):
                    continue
                J = join(G, A, B)
                if J.key not in found:
                    found[J.key] = J
                    new.append(J)
        items.extend(new)
        frontier = new
    found.setdefault(G.trivial_subgroup().key, G.trivial_subgroup())
    out = sorted(found.values(), key=lambda H: (H.order, H.ridx.tolist()))
    G.cache["normal"] = out
    return out


def is_normal(G: Group, H: Group) -> bool:
    mask = G.mask_of(H)
    hg = G.local(H)[H.gens] if H.gens else []
    for s in G.gens:
        cm = conj_map(G, s)
        if not all(mask[cm[h]] for h in hg):
            return False
    return True


def subnormal_subgroups(G: Group) -> list:
    """G together with the subnormal subgroups of every proper normal subgroup."""
    if "subnormal" in G.cache:
        return G.cache["subnormal"]
    found = {G.key: G}
    for N in normal_subgroups(G):
        if N.order < G.order:
            for S in subnormal_subgroups(N):
                found.setdefault(S.key, S)
    out = sorted(found.values(), key=lambda H: (H.order, H.ridx.tolist()))
    G.cache["subnormal"] = out
    return out


def all_subgroups(G: Group, limit: int = 5000) -> list:
    """Every subgroup, by closing the cyclic subgroups under joins (small groups only)."""
    if "all" in G.cache:
        return G.cache["all"]
    cyclic = {}
    for x in range(G.order):
        C = subgroup_generated(G, [x])
        cyclic.setdefault(C.key, C)
    found = dict(cyclic)
    # subgroups are generated by their prime-power cyclic subgroups
    cyc = [C for C in cyclic.values() if len(factorint(C.order)) == 1]
    gen_of = [int(G.local(C)[C.gens[0]]) for C in cyc]
    frontier = list(cyc)
    while frontier:
        new = []
        for H in frontier:
            mask = G.mask_of(H)
            hg = [int(h) for h in G.local(H)[H.gens]] if H.gens else []
            for c in gen_of:
                if mask[c]:
                    continue
                J = G.subgroup_from_mask(_closure_mask(G.mult, hg + [c], start=mask))
                if J.key not in found:
                    if J._gens is None and not J.is_root:
                        J._gens = sorted({int(i) for i in np.searchsorted(J.ridx, G.ridx[hg + [c]]) if i != 0})
                    found[J.key] = J
                    new.append(J)
                    if len(found) > limit:
                        raise IntegrityError("subgroup enumeration limit exceeded")
        frontier = new
    out = sorted(found.values(), key=lambda H: (H.order, H.ridx.tolist()))
    G.cache["all"] = out
    return out


def normalizer(G: Group, H: Group) -> Group:
    inH = G.mask_of(H)
    mask = np.ones(G.order, dtype=bool)
    for h in G.local(H)[H.gens] if H.gens else []:
        mask &= inH[conj_by_all(G, int(h))]
    return G.subgroup_from_mask(mask)


def centralizer(G: Group, H: Group) -> Group:
    mask = np.ones(G.order, dtype=bool)
    for h in G.local(H)[H.gens] if H.gens else []:
        mask &= conj_by_all(G, int(h)) == h
    return G.subgroup_from_mask(mask)


def conjugate_subgroup(G: Group, H: Group, g: int) -> Group:
    """H ** g = g^-1 H g."""
    cm = conj_map(G, g)
    return G.subgroup(cm[G.local(H)])


def find_conjugator(G: Group, H: Group, K: Group) -> Optional[int]:
    """Some g in G with H ** g = K, or None."""
    if H.order != K.order:
        return None
    inK = G.mask_of(K)
    mask = np.ones(G.order, dtype=bool)
    for h in G.local(H)[H.gens] if H.gens else []:
        mask &= inK[conj_by_all(G, int(h))]
    hits = np.nonzero(mask)[0]
    return int(hits[0]) if hits.size else None


def set_product(G: Group, A: Group, B: Group) -> np.ndarray:
    """Sorted local indices of the set AB."""
    a, b = G.local(A), G.local(B)
    return np.unique(G.mult[np.ix_(a, b)])


# -- primes -----------------------------------------------------------------


def pi_part(x: Perm, pi: PiSet) -> Perm:
    """The pi-part x_pi of x: a power of x with x = x_pi x_pi' and ord(x_pi) = ord(x)_pi."""
    return x ** crt_exponent(x.order(), pi)


def pi_part_index(G: Group, i: int, pi: PiSet) -> int:
    a = crt_exponent(int(G.element_orders[i]), pi)
    cur = 0
    for _ in range(a):
        cur = int(G.mult[cur, i])
    return cur


def is_pi_group(G: Group, pi: PiSet) -> bool:
    return pi.is_pi_number(G.order)


def _largest_normal_over(G: Group, N: Group, sigma: PiSet) -> Group:
    best = N
    for M in normal_subgroups(G):
        if M.contains(N) and sigma.is_pi_number(M.order // N.order) and not best.contains(M):
            best = join(G, best, M)
    return best


def pi_series(G: Group, pi: PiSet) -> Optional[list]:
    """A normal series 1 = N0 < ... < Nk = G of G with pi- or pi'-factors, or None."""
    N = G.trivial_subgroup()
    series = [N]
    while N.order < G.order:
        progressed = False
        for sigma in (pi, pi.prime()):
            M = _largest_normal_over(G, N, sigma)
            if M.order > N.order:
                N = M
                series.append(N)
                progressed = True
        if not progressed:
            return None
    return series


def is_pi_separable(G: Group, pi: PiSet) -> bool:
    key = ("pisep", pi)
    if key not in G.cache:
        G.cache[key] = pi_series(G, pi) is not None
    return G.cache[key]


def hall_subgroup(G: Group, pi: PiSet, seed: Optional[int] = None) -> Group:
    """A Hall pi-subgroup of a pi-separable group.

    Grows a maximal pi-subgroup greedily over the pi-elements; in a
    pi-separable group every pi-subgroup lies in a Hall pi-subgroup, so the
    maximal one found is Hall. ``seed`` shuffles the element order.
    """
    cache_key = ("hall", pi, seed)
    if cache_key in G.cache:
        return G.cache[cache_key]
    target = pi.part(G.order)
    if target == 1:
        H = G.trivial_subgroup()
    elif target == G.order:
        H = G
    else:
        if not is_pi_separable(G, pi):
            raise InputError(f"{G.label()} is not {pi}-separable; Hall subgroups may not exist")
        ords = G.element_orders
        allowed = np.array([pi.is_pi_number(int(o)) for o in ords])
        cand = [int(i) for i in np.nonzero(allowed)[0] if i != 0]
        if seed is not None:
            Random(seed).shuffle(cand)
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
        gens: list = []
        size = 1
        for x in cand:
            if mask[x]:
                continue
            m = _closure_mask(G.mult, gens + [x], start=mask, limit=target, allowed=allowed)
            if m is not None:
                gens.append(x)
                mask = m
                size = int(m.sum())
                if size == target:
                    break
        if size != target:
            raise IntegrityError(f"maximal {pi}-subgroup of order {size}, expected {target}")
        H = G.subgroup_from_mask(mask)
    G.cache[cache_key] = H
    return H


def sylow_subgroup(G: Group, p: int, seed: Optional[int] = None) -> Group:
    return hall_subgroup(G, PiSet.of(p), seed)
