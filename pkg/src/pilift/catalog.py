"""Named groups, group-definition files and the built-in census corpus."""

from __future__ import annotations

import hashlib
import os
import pickle
import re
from pathlib import Path
from typing import Optional

from sympy import primefactors, primerange

from .errors import InputError
from .groups import DEFAULT_ORDER_CAP, Group, Perm, generate_group
from .primes import PiSet

_BUILT: dict = {}


def _cyc(n: int, offset: int = 0) -> list:
    """Images of an n-cycle on points offset..offset+n-1, as a partial map."""
    return [(offset + i, offset + (i + 1) % n) for i in range(n)]


def _perm(degree: int, *maps) -> Perm:
    img = list(range(degree))
    for m in maps:
        for a, b in m:
            img[a] = b
    return Perm(img)


def cyclic(n: int) -> tuple:
    return max(n, 1), [_perm(max(n, 1), _cyc(n))] if n > 1 else []


def dihedral(m: int) -> tuple:
    """Dihedral group of order m (m even, m >= 4) on m/2 points."""
    n = m // 2
    refl = [(i, (-i) % n) for i in range(n)]
    return n, [_perm(n, _cyc(n)), _perm(n, refl)]


def affine_cyclic(p: int, k: int, extra: int = 0) -> tuple:
    """C_p x| <x -> kx>, optionally with the multiplier also cycling ``extra`` further points."""
    deg = p + extra
    mul = [(i, (k * i) % p) for i in range(p)]
    gens = [_perm(deg, _cyc(p)), _perm(deg, mul, _cyc(extra, p) if extra else [])]
    return deg, gens


def _vec_index(v, q):
    return v[0] + q * v[1]


def affine_plane(q: int, mats: list) -> tuple:
    """Translations of F_q^2 together with the given 2x2 matrices, on q^2 points."""
    pts = [(x, y) for y in range(q) for x in range(q)]
    deg = q * q
    gens = [
        _perm(deg, [(_vec_index(v, q), _vec_index(((v[0] + 1) % q, v[1]), q)) for v in pts]),
        _perm(deg, [(_vec_index(v, q), _vec_index((v[0], (v[1] + 1) % q), q)) for v in pts]),
    ]
    for (a, b), (c, d) in mats:
        gens.append(_perm(deg, [(_vec_index(v, q), _vec_index(((a * v[0] + b * v[1]) % q,
                                                              (c * v[0] + d * v[1]) % q), q))
                                for v in pts]))
    return deg, gens


def heisenberg(p: int) -> tuple:
    """Extraspecial group of order p^3 and exponent p (p odd), acting on F_p^2 by affine maps."""
    deg, gens = affine_plane(p, [((1, 1), (0, 1))])
    return deg, gens


def c9_c3() -> tuple:
    """Extraspecial group of order 27 and exponent 9: C9 x| <i -> 4i>."""
    return 9, [_perm(9, _cyc(9)), _perm(9, [(i, (4 * i) % 9) for i in range(9)])]


def e25_f21() -> tuple:
    """(C5^2 x C7) x| C3 of order 525, a desk-size stand-in for a large F21-extension.

    The order-3 element acts fixed-point-freely on both C5^2 and C7, while
    the order-7 element centralises C5^2.
    """
    q, deg = 5, 25 + 7
    pts = [(x, y) for y in range(q) for x in range(q)]
    tx = [(_vec_index(v, q), _vec_index(((v[0] + 1) % q, v[1]), q)) for v in pts]
    ty = [(_vec_index(v, q), _vec_index((v[0], (v[1] + 1) % q), q)) for v in pts]
    # [[0, -1], [1, -1]] has order 3 and no nonzero fixed vector mod 5
    m3 = [(_vec_index(v, q), _vec_index(((-v[1]) % q, (v[0] - v[1]) % q), q)) for v in pts]
    seven = [(25 + i, 25 + (2 * i) % 7) for i in range(7)]
    gens = [_perm(deg, tx), _perm(deg, ty), _perm(deg, _cyc(7, 25)), _perm(deg, m3, seven)]
    return deg, gens


def direct_product(a: tuple, b: tuple) -> tuple:
    da, ga = a
    db, gb = b
    deg = da + db
    gens = [Perm(list(g.images) + list(range(da, deg))) for g in ga]
    gens += [Perm(list(range(da)) + [da + x for x in g.images]) for g in gb]
    return deg, gens


def _sym(n: int) -> tuple:
    return n, [_perm(n, _cyc(n)), _perm(n, [(0, 1), (1, 0)])]


def _alt(n: int) -> tuple:
    return n, [_perm(n, [(i, i + 1 if i + 1 < 3 else 0) for i in range(3)]),
               _perm(n, _cyc(n)) if n % 2 else _perm(n, _cyc(n - 1, 1))]


def gl2_3() -> tuple:
    """GL(2,3) acting on the 8 nonzero vectors of F_3^2."""
    vecs = [(x, y) for x in range(3) for y in range(3) if (x, y) != (0, 0)]
    pos = {v: i for i, v in enumerate(vecs)}

    def mat(a, b, c, d):
        return Perm([pos[((a * x + b * y) % 3, (c * x + d * y) % 3)] for x, y in vecs])

    return 8, [mat(1, 1, 0, 1), mat(0, 1, 2, 0), mat(2, 0, 0, 1)]


NAMED: dict = {
    "S3": lambda: _sym(3),
    "S4": lambda: _sym(4),
    "A4": lambda: _alt(4),
    "A5": lambda: _alt(5),
    "F20": lambda: affine_cyclic(5, 2),
    "F21": lambda: affine_cyclic(7, 2),
    "C7:C3_2": lambda: affine_cyclic(7, 2, 3),
    "C7:C3_4": lambda: affine_cyclic(7, 4, 3),
    "C13:C3": lambda: affine_cyclic(13, 3),
    "F55": lambda: affine_cyclic(11, 3),
    "E27": lambda: heisenberg(3),
    "C9:C3": c9_c3,
    "E25:C3": lambda: affine_plane(5, [((0, 4), (1, 4))]),
    "E25:F21": e25_f21,
    "C3xC3": lambda: direct_product(cyclic(3), cyclic(3)),
    "C3xS3": lambda: direct_product(cyclic(3), _sym(3)),
    "C5xF21": lambda: direct_product(cyclic(5), affine_cyclic(7, 2)),
    "C3xF21": lambda: direct_product(cyclic(3), affine_cyclic(7, 2)),
    "GL2(3)": gl2_3,
}

# groups whose tables are checked in full; orders stay at or below 1000
CATALOG = [
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C12", "C15",
    "S3", "S4", "A4", "D8", "D10", "D12", "F20", "F21", "C7:C3_2", "C7:C3_4",
    "C13:C3", "F55", "E27", "C9:C3", "C3xC3", "C3xS3", "E25:C3", "C3xF21", "C5xF21",
    "GL2(3)", "E25:F21",
]

CORPORA = {
    "default": [g for g in CATALOG],
    "small": ["C6", "S3", "F21"],
    "odd": [g for g in CATALOG if g not in ("C2", "C4", "C6", "C8", "C10", "C12", "S3", "S4",
                                           "A4", "D8", "D10", "D12", "F20", "C3xS3", "GL2(3)")],
    "empty": [],
}


def group_spec(name: str) -> tuple:
    """(degree, generators) for a catalog name, including the C<n> and D<2n> families."""
    if name in NAMED:
        return NAMED[name]()
    m = re.fullmatch(r"C(\d+)", name)
    if m:
        return cyclic(int(m.group(1)))
    m = re.fullmatch(r"D(\d+)", name)
    if m and int(m.group(1)) >= 4 and int(m.group(1)) % 2 == 0:
        return dihedral(int(m.group(1)))
    raise InputError(f"unknown group {name!r}")


def parse_group_file(text: str) -> tuple:
    degree: Optional[int] = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        if word == "degree":
            try:
                degree = int(rest)
            except ValueError:
                raise InputError(f"line {lineno}: bad degree {rest!r}") from None
            if degree < 1:
                raise InputError(f"line {lineno}: degree must be positive")
        elif word == "gen":
            if degree is None:
                raise InputError(f"line {lineno}: 'gen' before 'degree'")
            try:
                gens.append(Perm.from_cycles(rest, degree))
            except ValueError as exc:
                raise InputError(f"line {lineno}: {exc}") from None
        else:
            raise InputError(f"line {lineno}: expected 'degree' or 'gen', got {word!r}")
    if degree is None:
        raise InputError("missing 'degree' line")
    return degree, gens


CACHE_ENV = "PILIFT_CACHE_DIR"


def _cache_path(degree: int, gens: list, order_cap: int) -> Optional[Path]:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    h = hashlib.sha256(repr((degree, [g.images for g in gens], order_cap)).encode()).hexdigest()[:24]
    return Path(root) / f"group-{h}.pickle"


def load_group(source: str, order_cap: int = DEFAULT_ORDER_CAP) -> Group:
    """A catalog group by name, or a group-definition file by path.

    With PILIFT_CACHE_DIR set, a previously saved group (with its memoized tables) is reused.
    """
    key = (source, order_cap)
    G = _BUILT.get(key)
    if G is not None:
        return G
    path = Path(source)
    if path.is_file():
        degree, gens = parse_group_file(path.read_text())
        name = path.stem
    else:
        degree, gens = group_spec(source)
        name = source
    cp = _cache_path(degree, gens, order_cap)
    if cp is not None and cp.is_file():
        try:
            with open(cp, "rb") as fh:
                G = pickle.load(fh)
        except Exception:
            G = None
    if G is None:
        G = generate_group(degree, gens, order_cap=order_cap, name=name)
        G.cache["source"] = (degree, gens, order_cap)
    _BUILT[key] = G
    return G


def save_cache(G: Group) -> Optional[Path]:
    """Write G and its memoized data to PILIFT_CACHE_DIR, if set."""
    src = G.root.cache.get("source")
    if src is None:
        return None
    cp = _cache_path(*src)
    if cp is None:
        return None
    cp.parent.mkdir(parents=True, exist_ok=True)
    tmp = cp.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        pickle.dump(G.root, fh, protocol=pickle.HIGHEST_PROTOCOL)
    os.replace(tmp, cp)
    return cp


# extra prime sets run on top of the generic ones
EXTRA_PI = {"E25:F21": [PiSet.of(3, 5)]}


def corpus_pi_sets(G: Group) -> list:
    """p' for each prime p dividing |G|, then two sets given by explicit primes (plus extras)."""
    ps = primefactors(G.order)
    out = [PiSet.p_prime(p) for p in ps]
    out.append(PiSet(frozenset(ps) if ps else frozenset([2])))
    if len(ps) >= 3:
        out.append(PiSet.of(ps[0]))
    else:
        q = next(q for q in primerange(2, 1000) if G.order % q and PiSet.of(q) not in out)
        out.append(PiSet.of(q))
    out.extend(pi for pi in EXTRA_PI.get(G.name, []) if pi not in out)
    return out


def corpus_entries(spec: str) -> list:
    """Group sources of a corpus: a corpus name or a file with one group source per line."""
    if spec in CORPORA:
        return list(CORPORA[spec])
    path = Path(spec)
    if path.is_file():
        out = []
        for raw in path.read_text().splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                out.append(line)
        return out
    raise InputError(f"unknown corpus {spec!r}")


