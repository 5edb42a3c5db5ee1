"""Finite fields F_q and the field configurations F_q(x_1, ..., x_m).

Elements of F_q are plain ints in ``range(q)``.  For ``q = p`` they are residues
mod p.  For ``q = p^e`` with ``e > 1`` the int ``sum(c_i * p**i)`` encodes the
polynomial ``sum(c_i * a**i)`` in a root ``a`` of the Conway polynomial below.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConfigError

# Conway polynomials, coefficients low -> high, for every prime power q <= 64
# with e > 1.
CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}

MAX_EXTENSION_ORDER = 64

_NAME = re.compile(r"[a-z][a-z0-9_]*\Z")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class GF:
    """Arithmetic in F_q.  Use :func:`get_gf` rather than instantiating directly."""

    def __init__(self, p: int, e: int = 1):
        if not is_prime(p):
            raise ConfigError(f"characteristic {p} is not prime")
        if e < 1:
            raise ConfigError("extension degree must be positive")
        self.p = p
        self.e = e
        self.q = p**e
        if e > 1:
            if self.q > MAX_EXTENSION_ORDER or (p, e) not in CONWAY:
                raise ConfigError(f"F_{self.q} not supported (q <= {MAX_EXTENSION_ORDER} for e > 1)")
            self._build_tables()
        self._roots = {self.frob(a): a for a in range(self.q)}

    def _digits(self, a):
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        modulus = CONWAY[(p, e)]
        digits = [self._digits(a) for a in range(q)]
        self._add = [[self._undigits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                      for b in range(q)] for a in range(q)]
        self._neg = [self._undigits([(-x) % p for x in digits[a]]) for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * e - 1)
                for i, x in enumerate(digits[a]):
                    if x:
                        for j, y in enumerate(digits[b]):
                            prod[i + j] = (prod[i + j] + x * y) % p
                for k in range(len(prod) - 1, e - 1, -1):
                    c = prod[k]
                    if c:
                        for i in range(e + 1):
                            prod[k - e + i] = (prod[k - e + i] - c * modulus[i]) % p
                mul[a][b] = mul[b][a] = self._undigits(prod[:e])
        self._mul = mul
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    self._inv[a] = b
                    break

    def element(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a):
        if self.e == 1:
            return -a % self.p
        return self._neg[a]

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        return self._add[a][self._neg[b]]

    def mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._inv[a]

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        if self.e == 1:
            return pow(a, k, self.p)
        out = 1
        while k:
            if k & 1:
                out = self._mul[out][a]
            a = self._mul[a][a]
            k >>= 1
        return out

    def frob(self, a):
        return self.pow(a, self.p)

    def root(self, a):
        """The unique b with b^p = a (F_q is perfect)."""
        return self._roots[a]

    def trace(self, a) -> int:
        """Absolute trace to F_p, returned as an int in range(p)."""
        t, x = 0, a
        for _ in range(self.e):
            t = self.add(t, x)
            x = self.frob(x)
        return t

    def format(self, a) -> str:
        return str(a) if self.e == 1 else f"[{a}]"

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def get_gf(p: int, e: int = 1) -> GF:
    return GF(p, e)


@dataclass(frozen=True)
class FieldConfig:
    """The rational function field F_q(variables) with q = p^e."""

    p: int
    e: int = 1
    variables: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        get_gf(self.p, self.e)
        if len(set(self.variables)) != len(self.variables):
            raise ConfigError(f"duplicate variable names in {self.variables}")
        for name in self.variables:
            if not _NAME.match(name):
                raise ConfigError(f"invalid variable name {name!r}")

    @property
    def gf(self) -> GF:
        return get_gf(self.p, self.e)

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise ConfigError(f"unknown variable {name!r} (field has {', '.join(self.variables) or 'none'})") from None

    def with_variables(self, variables) -> "FieldConfig":
        return FieldConfig(self.p, self.e, tuple(variables))

    def without(self, *names) -> "FieldConfig":
        for n in names:
            self.index(n)
        return self.with_variables(v for v in self.variables if v not in names)

    def check_same(self, other: "FieldConfig"):
        if self != other:
            raise ConfigError(f"field mismatch: {self} vs {other}")

    def __str__(self):
        base = f"F_{self.q}"
        return f"{base}({', '.join(self.variables)})" if self.variables else base
