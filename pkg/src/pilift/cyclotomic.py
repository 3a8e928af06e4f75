"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A :class:`CycloNum` is a polynomial in zeta_n of degree < phi(n) with integer
numerators over one positive common denominator, reduced modulo the n-th
cyclotomic polynomial.  Since Phi_n is irreducible, the reduced form is unique
at a fixed conductor; values at different conductors are compared after
embedding both into Q(zeta_lcm).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Union

import numpy as np
from sympy import QQ, ZZ, divisors, totient
from sympy.polys.matrices import DomainMatrix

from .primes import PiSet, lcm

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class CycloPoly:
    e: int
    coeffs: tuple  # integer coefficients, constant term first

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out


def _polydivexact(num: list, den: list) -> list:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1]:
            raise ArithmeticError("inexact polynomial division")
        c //= den[-1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("nonzero remainder")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int) -> CycloPoly:
    """Phi_e, by dividing x^e - 1 exactly by Phi_d for the proper divisors d of e."""
    if e < 1:
        raise ValueError("e must be positive")
    poly = [-1] + [0] * (e - 1) + [1]
    for d in divisors(e)[:-1]:
        poly = _polydivexact(poly, list(cyclotomic_polynomial(d).coeffs))
    return CycloPoly(e, tuple(poly))


def euler_phi(n: int) -> int:
    return int(totient(n))


class _Field:
    """Reduction data for Q(zeta_n)."""

    def __init__(self, n: int):
        self.n = n
        self.phi = euler_phi(n)
        cp = cyclotomic_polynomial(n).coeffs
        rows = []
        v = [1] + [0] * (self.phi - 1)
        for _ in range(max(n, 2 * self.phi - 1)):
            rows.append(tuple(v))
            # multiply by x, then subtract lead * Phi_n
            lead = v[-1]
            v = [0] + v[:-1]
            if lead:
                for j in range(self.phi):
                    v[j] -= lead * cp[j]
        self.pow_rows = rows  # x^k mod Phi_n; x^k depends only on k mod n
        self.pow_np = np.array(rows[:n], dtype=np.int64).reshape(n, self.phi)
        self.prod_np = np.array(rows[: 2 * self.phi - 1], dtype=np.int64).reshape(2 * self.phi - 1, self.phi)
        self.max_pow = int(np.abs(self.pow_np).max()) if self.phi else 1
        self.units = [a for a in range(1, n + 1) if gcd(a, n) == 1] if n > 1 else [1]

    def power(self, k: int) -> tuple:
        return self.pow_rows[k % self.n]

    def galois_np(self, a: int) -> np.ndarray:
        return np.array([self.pow_rows[(a * k) % self.n] for k in range(self.phi)],
                        dtype=np.int64).reshape(self.phi, self.phi)


@lru_cache(maxsize=None)
def field(n: int) -> _Field:
    return _Field(n)


@lru_cache(maxsize=None)
def embedding_matrix(n: int, m: int) -> np.ndarray:
    """Integer matrix sending coefficient rows at conductor n to conductor m (n | m)."""
    if m % n:
        raise ValueError(f"{n} does not divide {m}")
    F = field(m)
    q = m // n
    return np.array([F.power(k * q) for k in range(field(n).phi)], dtype=np.int64).reshape(field(n).phi, F.phi)


@lru_cache(maxsize=None)
def galois_matrix(n: int, a: int) -> np.ndarray:
    return field(n).galois_np(a % n if n > 1 else 1)


def _normalise(num: list, den: int):
    if den < 0:
        num, den = [-c for c in num], -den
    g = den
    for c in num:
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


class CycloNum:
    """An exact element of Q(zeta_n)."""

    __slots__ = ("n", "num", "den", "_minimal")

    def __init__(self, n: int, num: Iterable[int], den: int = 1):
        num = [int(c) for c in num]
        if len(num) != field(n).phi:
            raise ValueError(f"expected {field(n).phi} coefficients at conductor {n}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.n = n
        self.num, self.den = _normalise(num, int(den))
        self._minimal = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def rational(cls, q: Rational, n: int = 1) -> "CycloNum":
        q = Fraction(q)
        num = [0] * field(n).phi
        num[0] = q.numerator
        return cls(n, num, q.denominator)

    @classmethod
    def from_powers(cls, n: int, coeffs: dict, den: int = 1) -> "CycloNum":
        """Sum of c * zeta_n^k over ``{k: c}`` with integer c."""
        F = field(n)
        acc = [0] * F.phi
        for k, c in coeffs.items():
            if c:
                for j, v in enumerate(F.power(k)):
                    if v:
                        acc[j] += c * v
        return cls(n, acc, den)

    @classmethod
    def _coerce(cls, x) -> "CycloNum":
        if isinstance(x, CycloNum):
            return x
        if isinstance(x, (int, Fraction, np.integer)):
            return cls.rational(int(x) if isinstance(x, np.integer) else x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycloNum")

    # -- conductor changes ---------------------------------------------------

    def _embed(self, m: int) -> tuple:
        if m == self.n:
            return self.num
        F = field(m)
        q = m // self.n
        acc = [0] * F.phi
        for k, c in enumerate(self.num):
            if c:
                for j, v in enumerate(F.power(k * q)):
                    if v:
                        acc[j] += c * v
        return tuple(acc)

    def to_conductor(self, m: int) -> "CycloNum":
        """The same number written at conductor m.

        Raises ValueError when the number does not lie in Q(zeta_m).
        """
        if m % self.n == 0:
            return CycloNum(m, self._embed(m), self.den)
        c = self.conductor()
        if m % c:
            raise ValueError(f"value of conductor {c} is not in Q(zeta_{m})")
        return self.minimal().to_conductor(m)

    def minimal(self) -> "CycloNum":
        """The same number at its conductor: the first divisor d of n it descends to."""
        if self._minimal is None:
            for d in divisors(self.n):
                if d % 4 == 2:
                    continue  # Q(zeta_d) = Q(zeta_{d/2})
                m = self if d == self.n else self._descend(d)
                if m is not None:
                    self._minimal = m
                    break
        return self._minimal

    def _descend(self, d: int) -> Optional["CycloNum"]:
        """The number written at conductor d, or None when it is not in Q(zeta_d)."""
        cols, inv, D, E = _descent_data(d, self.n)
        y = [sum(self.num[c] * inv[i][j] for i, c in enumerate(cols)) for j in range(len(cols))]
        # y / (den * D) is the only candidate; confirm it maps back onto self
        for k, target in enumerate(self.num):
            if sum(v * E[j][k] for j, v in enumerate(y) if v) != target * D:
                return None
        return CycloNum(d, y, self.den * D)

    def galois(self, a: int) -> "CycloNum":
        """Image under zeta_n -> zeta_n^a (a coprime to n)."""
        if gcd(a, self.n) != 1:
            raise ValueError(f"{a} is not a unit mod {self.n}")
        F = field(self.n)
        acc = [0] * F.phi
        for k, c in enumerate(self.num):
            if c:
                for j, v in enumerate(F.power(a * k)):
                    if v:
                        acc[j] += c * v
        return CycloNum(self.n, acc, self.den)

    def conjugate(self) -> "CycloNum":
        return self.galois(-1 % self.n if self.n > 1 else 1)

    def conductor(self) -> int:
        """Least m with the number in Q(zeta_m)."""
        return self.minimal().n

    def is_in_Q_pi(self, pi: PiSet) -> bool:
        return pi.is_pi_number(self.conductor())

    # -- arithmetic ----------------------------------------------------------

    def _aligned(self, other: "CycloNum"):
        m = lcm(self.n, other.n)
        return m, self._embed(m), other._embed(m)

    def __add__(self, other):
        try:
            other = CycloNum._coerce(other)
        except TypeError:
            return NotImplemented
        m, a, b = self._aligned(other)
        return CycloNum(m, [x * other.den + y * self.den for x, y in zip(a, b)], self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.n, [-c for c in self.num], self.den)

    def __sub__(self, other):
        try:
            other = CycloNum._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = CycloNum._coerce(other)
        except TypeError:
            return NotImplemented
        m, a, b = self._aligned(other)
        F = field(m)
        conv = [0] * (2 * F.phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        acc = [0] * F.phi
        for k, c in enumerate(conv):
            if c:
                for j, v in enumerate(F.power(k)):
                    if v:
                        acc[j] += c * v
        return CycloNum(m, acc, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, q):
        q = Fraction(q)
        if q == 0:
            raise ZeroDivisionError
        return CycloNum(self.n, [c * q.denominator for c in self.num], self.den * q.numerator)

    def __pow__(self, k: int) -> "CycloNum":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out, base = CycloNum.rational(1, self.n), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, CycloNum):
            try:
                other = CycloNum._coerce(other)
            except TypeError:
                return NotImplemented
        if self.den != other.den:
            return False
        if self.n == other.n:
            return self.num == other.num
        _, a, b = self._aligned(other)
        return a == b

    def __hash__(self):
        m = self.minimal()
        return hash((m.n, m.num, m.den))

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def order_as_root_of_unity(self) -> Optional[int]:
        """Multiplicative order when the number is a root of unity, else None."""
        if self.den != 1:
            return None
        M = lcm(2, self.n)
        one = CycloNum.rational(1, self.n)
        if self ** M != one:
            return None
        for d in divisors(M):
            if self ** d == one:
                return d
        return M

    def terms(self) -> list:
        """(coefficient, exponent) pairs at the minimal conductor: sum c * E(n)^k."""
        m = self.minimal()
        return [(Fraction(c, m.den), k) for k, c in enumerate(m.num) if c]

    def __repr__(self):
        m = self.minimal()
        if m.is_rational():
            return str(m.to_fraction())
        parts = []
        for c, k in m.terms():
            base = f"E({m.n})^{k}" if k != 1 else f"E({m.n})"
            if k == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(base)
            elif c == -1:
                parts.append("-" + base)
            else:
                parts.append(f"{c}*{base}")
        return "+".join(parts).replace("+-", "-")

    __str__ = __repr__


def root_of_unity(e: int, k: int = 1) -> CycloNum:
    """zeta_e ** k."""
    return CycloNum.from_powers(e, {k % e: 1})


def conductor(z: CycloNum) -> int:
    return z.conductor()


def is_in_Q_pi(z: CycloNum, pi: PiSet) -> bool:
    return z.is_in_Q_pi(pi)


def order_as_root_of_unity(z: CycloNum) -> Optional[int]:
    return z.order_as_root_of_unity()


@lru_cache(maxsize=None)
def _descent_data(d: int, n: int):
    """Pivot columns of the d -> n embedding, the integer inverse on them and its denominator."""
    E = embedding_matrix(d, n).tolist()
    _, cols = DomainMatrix.from_list(E, ZZ).convert_to(QQ).rref()
    sub = DomainMatrix.from_list([[E[i][c] for c in cols] for i in range(len(E))], ZZ)
    # y @ sub = t  <=>  y = t @ num / den
    num, den = sub.inv_den()
    inv = [[int(v) for v in row] for row in num.to_list()]
    return tuple(cols), inv, int(den), E


# -- vectorised rows ---------------------------------------------------------
# Class functions keep one coefficient row per class in an integer matrix.

_INT64_SAFE = 2 ** 62


def _as_safe(a: np.ndarray, b: np.ndarray, extra: int):
    """Cast both operands to Python-int object arrays if an int64 product could overflow."""
    ma = int(np.abs(a).max()) if a.size else 0
    mb = int(np.abs(b).max()) if b.size else 0
    if a.dtype == object or b.dtype == object or ma * mb * max(extra, 1) >= _INT64_SAFE:
        return a.astype(object), b.astype(object)
    return a, b


def rows_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Row-wise product of coefficient matrices at conductor n."""
    F = field(n)
    phi = F.phi
    a, b = _as_safe(a, b, phi * F.max_pow * phi)
    out = np.zeros((a.shape[0], 2 * phi - 1), dtype=a.dtype)
    for i in range(phi):
        out[:, i:i + phi] += a[:, i:i + 1] * b
    P = F.prod_np if out.dtype != object else F.prod_np.astype(object)
    return out @ P


def rows_conj(a: np.ndarray, n: int) -> np.ndarray:
    G = galois_matrix(n, -1)
    if a.dtype == object:
        G = G.astype(object)
    return a @ G


def rows_embed(a: np.ndarray, n: int, m: int) -> np.ndarray:
    if n == m:
        return a
    E = embedding_matrix(n, m)
    if a.dtype == object:
        E = E.astype(object)
    return a @ E


def weighted_dot(a: np.ndarray, b: np.ndarray, w: np.ndarray, n: int) -> np.ndarray:
    """sum_k w_k a_k b_k as one reduced coefficient row."""
    F = field(n)
    phi = F.phi
    wa = a * w[:, None] if a.dtype != object else a * w.astype(object)[:, None]
    wa, b = _as_safe(wa, b, a.shape[0] * phi * F.max_pow)
    P = wa.T @ b
    out = np.zeros(2 * phi - 1, dtype=P.dtype)
    idx = np.add.outer(np.arange(phi), np.arange(phi)).ravel()
    np.add.at(out, idx, P.ravel())
    R = F.prod_np if out.dtype != object else F.prod_np.astype(object)
    return out @ R


def gram_rows(A: np.ndarray, B: np.ndarray, w: np.ndarray, n: int) -> np.ndarray:
    """out[a, b] = sum_k w_k A[a, k] B[b, k] for coefficient tensors of shape (rows, k, phi(n))."""
    F = field(n)
    phi = F.phi
    a, k, _ = A.shape
    b = B.shape[0]
    ma = int(np.abs(A).max()) if A.size else 0
    mb = int(np.abs(B).max()) if B.size else 0
    mw = int(np.abs(w).max()) if w.size else 0
    dtype = np.int64 if ma * mb * mw * k * phi * phi * F.max_pow < _INT64_SAFE else object
    Aw = A.astype(dtype) * np.asarray(w).astype(dtype)[None, :, None]
    B2 = B.astype(dtype).transpose(1, 0, 2).reshape(k, b * phi)
    out = np.zeros((a, b, 2 * phi - 1), dtype=dtype)
    for i in range(phi):
        out[:, :, i:i + phi] += (Aw[:, :, i] @ B2).reshape(a, b, phi)
    P = F.prod_np if dtype is np.int64 else F.prod_np.astype(object)
    return out @ P
