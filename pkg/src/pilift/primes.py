"""Sets of primes, pi-parts of integers and the textual pi spellings used by the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from sympy import factorint, isprime, primefactors


@dataclass(frozen=True)
class PiSet:
    """A set of primes, stored either explicitly or as a complement.

    ``PiSet({3}, complement=True)`` is 3', every prime except 3.
    """

    primes: frozenset
    complement: bool = False

    def __post_init__(self):
        object.__setattr__(self, "primes", frozenset(int(p) for p in self.primes))
        for p in self.primes:
            if not isprime(p):
                raise ValueError(f"{p} is not a prime")

    @classmethod
    def of(cls, *primes: int) -> "PiSet":
        return cls(frozenset(primes))

    @classmethod
    def p_prime(cls, p: int) -> "PiSet":
        return cls(frozenset([p]), complement=True)

    def __contains__(self, q: int) -> bool:
        return (q in self.primes) != self.complement

    def prime(self) -> "PiSet":
        return PiSet(self.primes, not self.complement)

    def is_pi_number(self, n: int) -> bool:
        return all(q in self for q in primefactors(n))

    def part(self, n: int) -> int:
        """Largest divisor of n whose prime divisors all lie in the set."""
        out = 1
        for q, k in factorint(n).items():
            if q in self:
                out *= q ** k
        return out

    def restricted_to(self, n: int) -> frozenset:
        return frozenset(q for q in primefactors(n) if q in self)

    @property
    def single_complement(self):
        """p when the set is p' for a single prime p, else None."""
        if self.complement and len(self.primes) == 1:
            return next(iter(self.primes))
        return None

    def spec(self) -> str:
        body = ",".join(str(p) for p in sorted(self.primes))
        if self.complement:
            return f"p':{body}" if len(self.primes) == 1 else f"not:{body}"
        return "{" + body + "}"

    def __str__(self):
        return self.spec()


def parse_pi(text: str) -> PiSet:
    """Parse ``3,5``, ``{3,5}``, ``p':3`` or ``not:2,3``."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty prime set")
    complement = False
    for prefix in ("p':", "p'", "not:"):
        if t.startswith(prefix):
            complement = True
            t = t[len(prefix):]
            break
    t = t.strip("{}")
    try:
        primes = frozenset(int(x) for x in t.split(",") if x)
    except ValueError:
        raise ValueError(f"bad prime set {text!r}") from None
    if not primes:
        raise ValueError(f"bad prime set {text!r}")
    return PiSet(primes, complement)


def crt_exponent(n: int, pi: PiSet) -> int:
    """Exponent a with x**a the pi-part of any element x of order n."""
    npi = pi.part(n)
    nq = n // npi
    if nq == 1:
        return 1 % n if n > 1 else 0
    if npi == 1:
        return 0
    # a = 1 mod npi, a = 0 mod nq
    inv = pow(nq, -1, npi)
    return (nq * inv) % n


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out
