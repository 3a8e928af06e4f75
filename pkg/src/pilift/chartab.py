"""Ordinary character tables (Dixon-Schneider over F_ell) and class-function algebra.

Every class function of a group is stored at the conductor E of the root
enumeration it belongs to: an integer matrix with one row of phi(E)
coefficients per class, over one integer denominator.  Subgroups share the
root's conductor and its prime ell, so restriction and induction are plain
index/matrix operations.

Besides the exact values each class function has a mod-ell image under the
ring map zeta_E -> z.  Inner products of genuine characters are nonnegative
integers bounded by the product of the degrees, so when that bound is below
ell they are read off the image exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt
from typing import Optional, Sequence

import numpy as np
from sympy import isprime

from . import _modp
from .cyclotomic import (CycloNum, field, galois_matrix, gram_rows, rows_conj, rows_mul,
                         weighted_dot)
from .errors import IntegrityError
from .groups import Group, conj_by_all
from .primes import lcm

SPLIT_RETRIES = 64
ELL_SEARCH_LIMIT = 10 ** 8


@dataclass(frozen=True)
class Family:
    """Conductor and splitting prime shared by all subgroups of one root group."""

    E: int
    ell: int
    z: int

    @cached_property
    def zpow(self) -> np.ndarray:
        phi = field(self.E).phi
        out = np.empty(phi, dtype=np.int64)
        acc = 1
        for j in range(phi):
            out[j] = acc
            acc = acc * self.z % self.ell
        return out

    def root(self, n: int) -> int:
        """The chosen primitive n-th root of unity mod ell (n | E)."""
        return pow(self.z, self.E // n, self.ell)


def family(G: Group) -> Family:
    root = G.root
    fam = root.cache.get("family")
    if fam is None:
        E = root.exponent
        k = (4 * root.order) // E + 1
        while True:
            ell = k * E + 1
            if ell > ELL_SEARCH_LIMIT:
                raise IntegrityError(f"no prime = 1 mod {E} below {ELL_SEARCH_LIMIT}")
            if ell > 4 * root.order and isprime(ell):
                break
            k += 1
        fam = Family(E, ell, _modp.primitive_root_of_unity(E, ell))
        root.cache["family"] = fam
    return fam


class ClassFunction:
    """A class function with exact values in Q(zeta_E)."""

    def __init__(self, group: Group, vals: np.ndarray, den: int = 1, is_character: bool = False):
        if den < 0:
            vals, den = -vals, -den
        if den != 1:
            g = den
            for v in np.unique(vals):
                g = gcd(g, int(v))
                if g == 1:
                    break
            if g > 1:
                vals = vals // g
                den //= g
        self.group = group
        self.vals = vals
        self.den = int(den)
        self.is_character = is_character

    @property
    def family(self) -> Family:
        return family(self.group)

    @property
    def E(self) -> int:
        return self.family.E

    def __len__(self):
        return self.vals.shape[0]

    def value(self, k: int) -> CycloNum:
        return CycloNum(self.E, self.vals[k].tolist(), self.den)

    def values(self) -> list:
        return [self.value(k) for k in range(len(self))]

    @property
    def degree(self):
        row = self.vals[0]
        if row[1:].any():
            raise IntegrityError("value at the identity is not rational")
        q = Fraction(int(row[0]), self.den)
        return q.numerator if q.denominator == 1 else q

    @cached_property
    def modl(self) -> np.ndarray:
        fam = self.family
        v = self.vals % fam.ell
        if v.dtype == object:
            v = v.astype(np.int64)
        out = v @ fam.zpow % fam.ell
        if self.den != 1:
            out = out * pow(self.den % fam.ell, -1, fam.ell) % fam.ell
        return out

    def _check(self, other: "ClassFunction"):
        if other.group is not self.group:
            raise ValueError("class functions of different groups")

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return (other.group is self.group and self.den == other.den
                and np.array_equal(self.vals, other.vals))

    def __hash__(self):
        return hash((self.group, self.den, self.vals.astype(np.int64).tobytes()))

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        vals = self.vals * other.den + other.vals * self.den
        return ClassFunction(self.group, vals, self.den * other.den,
                             self.is_character and other.is_character)

    def __neg__(self):
        return ClassFunction(self.group, -self.vals, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return ClassFunction(self.group, self.vals * int(other), self.den,
                                 self.is_character and other >= 0)
        if isinstance(other, Fraction):
            return ClassFunction(self.group, self.vals * other.numerator, self.den * other.denominator)
        self._check(other)
        return ClassFunction(self.group, rows_mul(self.vals, other.vals, self.E),
                             self.den * other.den, self.is_character and other.is_character)

    __rmul__ = __mul__

    def conj(self) -> "ClassFunction":
        return ClassFunction(self.group, rows_conj(self.vals, self.E), self.den, self.is_character)

    def galois(self, a: int) -> "ClassFunction":
        G = galois_matrix(self.E, a)
        if self.vals.dtype == object:
            G = G.astype(object)
        return ClassFunction(self.group, self.vals @ G, self.den, self.is_character)

    def is_zero(self) -> bool:
        return not self.vals.any()

    def as_character(self) -> "ClassFunction":
        """The same function, flagged as a genuine character (caller's promise)."""
        return ClassFunction(self.group, self.vals, self.den, True)

    def __repr__(self):
        return "[" + ", ".join(str(v) for v in self.values()) + "]"


class Character(ClassFunction):
    """An irreducible character, row ``index`` of its group's table."""

    def __init__(self, table: "CharTable", index: int, vals: np.ndarray):
        super().__init__(table.group, vals, 1, True)
        self.table = table
        self.index = index

    def __eq__(self, other):
        if isinstance(other, Character) and other.table is self.table:
            return other.index == self.index
        return ClassFunction.__eq__(self, other)

    def __hash__(self):
        return hash((self.group, self.index))

    def __repr__(self):
        return f"chi[{self.index}] of {self.group.label()}"


class CharTable:
    def __init__(self, group: Group, rows: list, mults: list):
        self.group = group
        self.family = family(group)
        self.irr = [Character(self, i, v) for i, v in enumerate(rows)]
        self.mults = mults  # per character, per class: eigenvalue multiplicities
        self.degrees = [int(v[0, 0]) for v in rows]
        self.X = np.stack([c.modl for c in self.irr])
        self._by_modl = {self.X[i].tobytes(): i for i in range(len(self.irr))}
        if len(self._by_modl) != len(self.irr):
            raise IntegrityError("two irreducibles share a mod-ell image")

    def __len__(self):
        return len(self.irr)

    def __getitem__(self, i) -> Character:
        return self.irr[i]

    def __iter__(self):
        return iter(self.irr)

    @property
    def trivial(self) -> Character:
        return self.irr[0]

    def index_of(self, f: ClassFunction) -> Optional[int]:
        """Index of the irreducible equal to the character f, or None."""
        if isinstance(f, Character) and f.table is self:
            return f.index
        i = self._by_modl.get(f.modl.tobytes())
        if i is None or f.degree != self.degrees[i]:
            return None
        return i

    @cached_property
    def det_orders(self) -> list:
        return [_det_order_from_mults(self.group, m) for m in self.mults]

    def decompose(self, f: ClassFunction, exact: bool = False) -> np.ndarray:
        """Multiplicities <f, chi_i> over the table.

        Genuine characters take the mod-ell route; other class functions must
        decompose with integer coefficients, else IntegrityError.
        """
        G = self.group
        fam = self.family
        if not exact and f.is_character and f.degree < fam.ell // 2:
            w = (G.class_sizes % fam.ell) * f.modl % fam.ell
            m = w @ self.X[:, G.inverse_class].T % fam.ell
            m = m * pow(G.order % fam.ell, -1, fam.ell) % fam.ell
            if (m > f.degree).any() or int(m @ np.array(self.degrees)) != f.degree:
                raise IntegrityError("character does not decompose over the table")
            return m.astype(np.int64)
        out = []
        for chi in self.irr:
            q = inner_product_exact(f, chi)
            if q.denominator != 1:
                raise IntegrityError(f"non-integral multiplicity {q}")
            out.append(int(q))
        m = np.array(out, dtype=np.int64)
        if f.is_character and (m < 0).any():
            raise IntegrityError("negative multiplicity in a character")
        return m

    def constituents(self, f: ClassFunction, exact: bool = False) -> list:
        m = self.decompose(f, exact)
        return [(self.irr[i], int(c)) for i, c in enumerate(m) if c]

    def combine(self, coeffs: Sequence[int]) -> ClassFunction:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        vals = np.tensordot(coeffs, np.stack([c.vals for c in self.irr]), axes=1)
        return ClassFunction(self.group, vals, 1, bool((coeffs >= 0).all()))


# -- Dixon-Schneider ---------------------------------------------------------


def class_matrices(G: Group) -> np.ndarray:
    """A[j, i, k] = #{x in C_j : x^-1 g_k in C_i}, so that C_j C_i = sum_k A[j, i, k] C_k."""
    r = len(G.classes)
    cls = G.class_of
    A = np.zeros((r, r, r), dtype=np.int64)
    for k, c in enumerate(G.classes):
        y = G.mult[G.inv, c.representative]
        A[:, :, k] = np.bincount(cls * r + cls[y], minlength=r * r).reshape(r, r)
    return A


def _split(M: np.ndarray, ell: int, rng: np.random.Generator) -> list:
    """Common eigenvectors of the commuting matrices M[j] mod ell."""
    r = M.shape[1]
    queue = [(np.eye(r, dtype=np.int64), list(range(r)))]
    vectors = []
    while queue:
        B, piv = queue.pop()
        d = B.shape[1]
        if d == 1:
            v = B[:, 0]
            vectors.append(v * pow(int(v[0]), -1, ell) % ell)
            continue
        for _ in range(SPLIT_RETRIES):
            c = rng.integers(0, ell, size=M.shape[0])
            A = np.tensordot(c, M, axes=1) % ell
            C = (A @ B % ell)[piv]
            lams = _modp.roots(_modp.charpoly(C, ell), ell)
            if len(lams) < 2:
                continue
            pieces = []
            for lam in lams:
                Y = _modp.nullspace((C - lam * np.eye(d, dtype=np.int64)) % ell, ell)
                pieces.append(_modp.column_echelon(B @ Y % ell, ell))
            if sum(p[0].shape[1] for p in pieces) != d:
                raise IntegrityError("class algebra is not split over the chosen prime")
            queue.extend(pieces)
            break
        else:
            raise IntegrityError("eigenspace splitting did not converge")
    return vectors


def _dft(n: int, fam: Family) -> np.ndarray:
    zn = fam.root(n)
    inv_n = pow(n, -1, fam.ell)
    t = np.arange(n)
    ex = (-np.outer(t, t)) % n
    pw = np.array([pow(zn, int(e), fam.ell) for e in range(n)], dtype=np.int64)
    return pw[ex] * inv_n % fam.ell


def eigen_multiplicities(G: Group, modl: np.ndarray, degree: int) -> list:
    """For each class of G, the multiplicity of each eigenvalue zeta_n^t of a representing matrix.

    ``modl`` is the mod-ell image of a genuine character of G of the given degree.
    """
    fam = family(G)
    if degree >= fam.ell:
        raise IntegrityError("degree exceeds the splitting prime")
    cache = G.root.cache.setdefault("dft", {})
    out = []
    for c in G.classes:
        n = c.element_order
        F = cache.get(n)
        if F is None:
            F = cache[n] = _dft(n, fam)
        m = F @ modl[list(c.power_classes)] % fam.ell
        if (m > degree).any() or int(m.sum()) != degree:
            raise IntegrityError("eigenvalue multiplicities do not lift")
        out.append(m.astype(np.int64))
    return out


def _rows_from_mults(G: Group, mults: list) -> np.ndarray:
    fam = family(G)
    P = field(fam.E).pow_np
    rows = []
    for c, m in zip(G.classes, mults):
        n = c.element_order
        rows.append(m @ P[(fam.E // n) * np.arange(n)])
    return np.stack(rows)


def _det_order_from_mults(G: Group, mults: list) -> int:
    out = 1
    for c, m in zip(G.classes, mults):
        n = c.element_order
        s = int(m @ np.arange(n)) % n
        out = lcm(out, n // gcd(n, s))
    return out


def character_table(G: Group, seed: int = 0) -> CharTable:
    """Irr(G) by Dixon-Schneider, rows sorted by degree then eigenvalue multiplicities."""
    T = G.cache.get("table")
    if T is not None:
        return T
    fam = family(G)
    ell = fam.ell
    r = len(G.classes)
    M = class_matrices(G) % ell
    omegas = _split(M, ell, np.random.default_rng(seed))
    if len(omegas) != r:
        raise IntegrityError(f"found {len(omegas)} central characters for {r} classes")
    sizes = G.class_sizes
    inv_sizes = np.array([pow(int(s), -1, ell) for s in sizes], dtype=np.int64)
    entries = []
    for w in omegas:
        s = int((w * w[G.inverse_class] % ell) @ inv_sizes % ell)
        d2 = G.order * pow(s, -1, ell) % ell
        d = isqrt(d2)
        if d * d != d2 or G.order % d:
            raise IntegrityError("degree recovery failed")
        modl = d * w % ell * inv_sizes % ell
        mults = eigen_multiplicities(G, modl, d)
        key = (d, tuple(tuple(int(-x) for x in m) for m in mults))
        entries.append((key, mults))
    entries.sort(key=lambda e: e[0])
    rows = [_rows_from_mults(G, m) for _, m in entries]
    if sum(int(v[0, 0]) ** 2 for v in rows) != G.order:
        raise IntegrityError("sum of squared degrees differs from the group order")
    T = CharTable(G, rows, [m for _, m in entries])
    if T.X[0].tolist() != [1] * r:
        raise IntegrityError("first character is not trivial")
    G.cache["table"] = T
    return T


def verify_orthogonality(T: CharTable) -> bool:
    """Exact row and column orthogonality over Q(zeta_E)."""
    G = T.group
    E = T.family.E
    V = np.stack([c.vals for c in T.irr])  # (chars, classes, phi)
    Vc = np.stack([rows_conj(c.vals, E) for c in T.irr])
    r = len(T)
    rowg = gram_rows(V, Vc, G.class_sizes, E)
    want = np.zeros_like(rowg)
    want[np.arange(r), np.arange(r), 0] = G.order
    if not np.array_equal(rowg, want):
        return False
    colg = gram_rows(V.transpose(1, 0, 2), Vc.transpose(1, 0, 2), np.ones(r, dtype=np.int64), E)
    want = np.zeros_like(colg)
    want[np.arange(r), np.arange(r), 0] = G.order // G.class_sizes
    return bool(np.array_equal(colg, want))


# -- class-function operations -------------------------------------------------


def inner_product_exact(f: ClassFunction, g: ClassFunction) -> Fraction:
    f._check(g)
    G = f.group
    row = weighted_dot(f.vals, rows_conj(g.vals, f.E), G.class_sizes, f.E)
    if np.any(row[1:]):
        raise IntegrityError("inner product is not rational")
    return Fraction(int(row[0]), f.den * g.den * G.order)


def inner_product(f: ClassFunction, g: ClassFunction):
    """<f, g> = (1/|G|) sum_k |C_k| f(g_k) conj(g(g_k)), exactly."""
    f._check(g)
    fam = f.family
    if f.is_character and g.is_character and f.degree * g.degree < fam.ell:
        G = f.group
        s = (G.class_sizes % fam.ell) * f.modl % fam.ell @ g.modl[G.inverse_class] % fam.ell
        return int(s * pow(G.order % fam.ell, -1, fam.ell) % fam.ell)
    q = inner_product_exact(f, g)
    return int(q) if q.denominator == 1 else q


def fusion(G: Group, H: Group) -> np.ndarray:
    """Class of G containing each class of H."""
    key = ("fusion", H.key)
    fus = G.cache.get(key)
    if fus is None:
        loc = G.local(H)
        fus = np.array([G.class_of[loc[c.representative]] for c in H.classes], dtype=np.int64)
        G.cache[key] = fus
    return fus


def restrict(f: ClassFunction, H: Group) -> ClassFunction:
    if H is f.group:
        return f
    return ClassFunction(H, f.vals[fusion(f.group, H)], f.den, f.is_character)


def induction_matrix(G: Group, H: Group) -> np.ndarray:
    key = ("induce", H.key)
    Ind = G.cache.get(key)
    if Ind is None:
        fus = fusion(G, H)
        Ind = np.zeros((len(G.classes), len(H.classes)), dtype=np.int64)
        cg = G.order // G.class_sizes
        ch = H.order // H.class_sizes
        for c, k in enumerate(fus):
            if cg[k] % ch[c]:
                raise IntegrityError("centralizer orders do not divide")
            Ind[k, c] = cg[k] // ch[c]
        G.cache[key] = Ind
    return Ind


def induce(f: ClassFunction, G: Group) -> ClassFunction:
    """f^G for a class function f of a subgroup of G."""
    H = f.group
    if H is G:
        return f
    Ind = induction_matrix(G, H)
    vals = f.vals
    if vals.dtype == object or int(np.abs(vals).max()) * G.order >= 2 ** 62:
        Ind, vals = Ind.astype(object), vals.astype(object)
    return ClassFunction(G, Ind @ vals, f.den, f.is_character)


def product(f: ClassFunction, g: ClassFunction) -> ClassFunction:
    return f * g


def constituents(f: ClassFunction, exact: bool = False) -> list:
    return character_table(f.group).constituents(f, exact)


def det_order(f: ClassFunction) -> int:
    """o(f): the order of det f as a linear character."""
    if isinstance(f, Character):
        return f.table.det_orders[f.index]
    if not f.is_character:
        raise ValueError("determinantal order needs a genuine character")
    return _det_order_from_mults(f.group, eigen_multiplicities(f.group, f.modl, f.degree))


def linear_order(f: ClassFunction) -> int:
    """Order of a linear character as an element of the dual group."""
    if f.degree != 1:
        raise ValueError("not a linear character")
    return det_order(f)


def class_action(G: Group, N: Group) -> np.ndarray:
    """P[g, c] = class of N containing (n_c)^g, for N normal in G."""
    key = ("action", N.key)
    P = G.cache.get(key)
    if P is None:
        loc = G.local(N)
        lookup = np.full(G.order, -1, dtype=np.int64)
        lookup[loc] = N.class_of
        P = np.stack([lookup[conj_by_all(G, int(loc[c.representative]))] for c in N.classes], axis=1)
        if (P < 0).any():
            raise ValueError("subgroup is not normal")
        G.cache[key] = P
    return P


def stabilizer_of_character(G: Group, N: Group, theta: ClassFunction) -> Group:
    """G_theta for a class function theta of N, N normal in G."""
    P = class_action(G, N)
    v = theta.modl
    mask = (v[P] == v[None, :]).all(axis=1)
    return G.subgroup_from_mask(mask)


def conjugate_character(G: Group, N: Group, theta: Character, g: int) -> Character:
    """theta^g, with theta^g(x) = theta(x^(g^-1)); g a local index of G."""
    P = class_action(G, N)
    img = theta.modl[P[G.inv[g]]]
    T = theta.table
    i = T._by_modl.get(img.tobytes())
    if i is None:
        raise IntegrityError("conjugate of an irreducible is not in the table")
    return T[i]


def orbit_of_character(G: Group, N: Group, theta: Character) -> list:
    """Indices in N's table of the G-conjugates of theta."""
    P = class_action(G, N)
    imgs = theta.modl[P]
    T = theta.table
    return sorted({T._by_modl[row.tobytes()] for row in np.unique(imgs, axis=0)})


def clifford_correspondent(chi: Character, N: Group, theta: Character) -> Character:
    """The unique psi in Irr(G_theta | theta) with psi^G = chi."""
    G = chi.group
    T = stabilizer_of_character(G, N, theta)
    TT = character_table(T)
    found = []
    for psi in TT:
        if inner_product(restrict(psi, N), theta) == 0:
            continue
        ind = induce(psi, G)
        if chi.table.index_of(ind) == chi.index:
            found.append(psi)
    if len(found) != 1:
        raise IntegrityError(f"{len(found)} Clifford correspondents found")
    return found[0]


def table_to_json(T: CharTable) -> dict:
    G = T.group
    return {
        "group": G.label(),
        "order": G.order,
        "conductor": T.family.E,
        "classes": [{"representative": str(G.element(c.representative)), "size": c.size,
                     "element_order": c.element_order} for c in G.classes],
        "characters": [{"index": chi.index, "degree": T.degrees[chi.index],
                        "det_order": T.det_orders[chi.index],
                        "values": [str(v) for v in chi.values()]} for chi in T],
    }


def values_in_Q_pi(f: ClassFunction, pi) -> bool:
    """Whether every value of f lies in Q(zeta_m) for the pi-part m of the conductor E.

    That field is the intersection of Q(zeta_E) with Q_pi, and it is the fixed
    field of the automorphisms zeta_E -> zeta_E^a with a = 1 mod m.
    """
    E = f.E
    m = pi.part(E)
    for a in range(1 + m, E + 1, m):
        if gcd(a, E) == 1 and a % E != 1 and not np.array_equal(f.galois(a).vals, f.vals):
            return False
    return True
