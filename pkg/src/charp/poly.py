"""Sparse multivariate polynomials over F_q with exact gcd."""

from __future__ import annotations

from .errors import ConfigError, DomainError
from .fields import FieldConfig


def grlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial: exponent tuple -> nonzero F_q element.

    Terms are ordered graded-lexicographically on the variable order of the
    configuration; the leading term is the grlex-largest.
    """

    __slots__ = ("config", "terms", "_hash")

    def __init__(self, config: FieldConfig, terms=None, *, _clean=False):
        self.config = config
        if terms is None:
            terms = {}
        elif not _clean:
            gf, m = config.gf, config.nvars
            cleaned = {}
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != m or any(k < 0 for k in exps):
                    raise ValueError(f"bad exponent vector {exps} for {config}")
                c = c % gf.q if gf.e > 1 else c % gf.p
                if c:
                    cleaned[exps] = c
            terms = cleaned
        self.terms = terms
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def zero(cls, config):
        return cls(config, {}, _clean=True)

    @classmethod
    def constant(cls, config, c):
        c = c % config.q if config.e > 1 else c % config.p
        return cls(config, {(0,) * config.nvars: c} if c else {}, _clean=True)

    @classmethod
    def one(cls, config):
        return cls.constant(config, 1)

    @classmethod
    def monomial(cls, config, exps, c=1):
        return cls(config, {tuple(exps): c})

    @classmethod
    def variable(cls, config, name):
        i = config.index(name) if isinstance(name, str) else name
        exps = [0] * config.nvars
        exps[i] = 1
        return cls(config, {tuple(exps): 1}, _clean=True)

    # predicates -------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_one(self):
        return self.is_constant() and self.constant_value() == 1

    def is_monomial(self):
        return len(self.terms) == 1

    def constant_value(self):
        return self.terms.get((0,) * self.config.nvars, 0)

    # order data -------------------------------------------------------------
    def leading_exponent(self):
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self):
        return self.terms[self.leading_exponent()] if self.terms else 0

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def min_exponents(self):
        return tuple(map(min, zip(*self.terms))) if self.terms else (0,) * self.config.nvars

    def support(self):
        """Indices of variables that actually occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.config != self.config:
                raise ConfigError(f"field mismatch: {self.config} vs {other.config}")
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.config, self.config.gf.element(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        gf = self.config.gf
        out = dict(self.terms)
        if gf.e == 1:
            p = gf.p
            for k, c in other.terms.items():
                v = (out.get(k, 0) + c) % p
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        else:
            for k, c in other.terms.items():
                v = gf.add(out.get(k, 0), c)
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return Polynomial(self.config, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        gf = self.config.gf
        return Polynomial(self.config, {k: gf.neg(c) for k, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if c == 0:
            return Polynomial.zero(self.config)
        gf = self.config.gf
        return Polynomial(self.config, {k: gf.mul(v, c) for k, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Polynomial.zero(self.config)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        gf = self.config.gf
        out = {}
        if gf.e == 1:
            p = gf.p
            for eb, cb in b.items():
                for ea, ca in a.items():
                    k = tuple([x + y for x, y in zip(ea, eb)])
                    out[k] = (out.get(k, 0) + ca * cb) % p
        else:
            add, mul = gf.add, gf.mul
            for eb, cb in b.items():
                for ea, ca in a.items():
                    k = tuple([x + y for x, y in zip(ea, eb)])
                    out[k] = add(out.get(k, 0), mul(ca, cb))
        return Polynomial(self.config, {k: v for k, v in out.items() if v}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.config)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exps):
        """Multiply by the monomial x^exps (entries may be negative if exact)."""
        out = {}
        for e, c in self.terms.items():
            k = tuple(x + y for x, y in zip(e, exps))
            if any(v < 0 for v in k):
                raise ValueError("monomial shift leaves the polynomial ring")
            out[k] = c
        return Polynomial(self.config, out, _clean=True)

    def monic(self):
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        return self if lc == 1 else self.scale(self.config.gf.inv(lc))

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """self / other, raising ValueError if the division is not exact."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.is_constant():
            return self.scale(self.config.gf.inv(other.constant_value()))
        if other.is_monomial():
            (eb, cb), = other.terms.items()
            return self.shift(tuple(-x for x in eb)).scale(self.config.gf.inv(cb))
        gf = self.config.gf
        lb = other.leading_exponent()
        icb = gf.inv(other.terms[lb])
        rem = dict(self.terms)
        quo = {}
        bterms = list(other.terms.items())
        while rem:
            lr = max(rem, key=grlex_key)
            d = tuple(x - y for x, y in zip(lr, lb))
            if any(v < 0 for v in d):
                raise ValueError("inexact polynomial division")
            c = gf.mul(rem[lr], icb)
            quo[d] = c
            for eb, cb in bterms:
                k = tuple(x + y for x, y in zip(d, eb))
                v = gf.sub(rem.get(k, 0), gf.mul(c, cb))
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return Polynomial(self.config, quo, _clean=True)

    def derivative(self, i: int) -> "Polynomial":
        gf = self.config.gf
        out = {}
        for e, c in self.terms.items():
            k = e[i] % gf.p
            if k:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = gf.mul(c, k)
        return Polynomial(self.config, out, _clean=True)

    def frobenius(self) -> "Polynomial":
        """self^p, computed termwise (Frobenius is additive)."""
        gf, p = self.config.gf, self.config.p
        return Polynomial(self.config,
                          {tuple(x * p for x in e): gf.frob(c) for e, c in self.terms.items()},
                          _clean=True)

    def is_pth_power(self) -> bool:
        p = self.config.p
        return all(x % p == 0 for e in self.terms for x in e)

    def pth_root(self) -> "Polynomial":
        p = self.config.p
        gf = self.config.gf
        out = {}
        for e, c in self.terms.items():
            if any(x % p for x in e):
                raise DomainError("polynomial is not a p-th power")
            out[tuple(x // p for x in e)] = gf.root(c)
        return Polynomial(self.config, out, _clean=True)

    def coefficients_in(self, i: int) -> dict:
        """View as a polynomial in variable i: degree -> coefficient polynomial."""
        groups = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            groups.setdefault(k, {})[ne] = c
        return {k: Polynomial(self.config, t, _clean=True) for k, t in groups.items()}

    def reindex(self, target: FieldConfig, positions) -> "Polynomial":
        """Move to ``target``; ``positions[i]`` is the target index of variable i."""
        m = target.nvars
        out = {}
        for e, c in self.terms.items():
            ne = [0] * m
            for i, k in enumerate(e):
                if k:
                    if positions[i] is None:
                        raise ConfigError(f"variable {self.config.variables[i]} missing from {target}")
                    ne[positions[i]] = k
            out[tuple(ne)] = c
        return Polynomial(target, out, _clean=True)

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.config, self.config.gf.element(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.config == other.config and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.config, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        from .textio import format_polynomial

        return f"Polynomial({format_polynomial(self)})"

    def __str__(self):
        from .textio import format_polynomial

        return format_polynomial(self)


def _gcd_many(polys):
    g = None
    for f in polys:
        g = f.monic() if g is None else gcd(g, f)
        if g.is_one():
            break
    return g


def _content(a: Polynomial, i: int) -> Polynomial:
    return _gcd_many(sorted(a.coefficients_in(i).values(), key=lambda f: len(f.terms)))


def _primitive(a: Polynomial, i: int) -> Polynomial:
    return a.exact_div(_content(a, i))


def _prem(a: Polynomial, b: Polynomial, i: int) -> Polynomial:
    db = b.degree_in(i)
    cb = b.coefficients_in(i)
    lcb = cb[db]
    r = a
    while not r.is_zero():
        dr = r.degree_in(i)
        if dr < db:
            break
        lcr = r.coefficients_in(i)[dr]
        shift = [0] * r.config.nvars
        shift[i] = dr - db
        r = lcb * r - lcr.shift(shift) * b
    return r


def _gcd_core(a: Polynomial, b: Polynomial) -> Polynomial:
    """gcd of nonzero polynomials with no monomial content."""
    config = a.config
    one = Polynomial.one(config)
    if a.is_constant() or b.is_constant():
        return one
    if a == b:
        return a.monic()
    va, vb = a.support(), b.support()
    common = va & vb
    if not common:
        return one
    if va - vb:
        w = min(va - vb)
        return _gcd_many([b] + sorted(a.coefficients_in(w).values(), key=lambda f: len(f.terms)))
    if vb - va:
        w = min(vb - va)
        return _gcd_many([a] + sorted(b.coefficients_in(w).values(), key=lambda f: len(f.terms)))
    i = min(common, key=lambda j: (max(a.degree_in(j), b.degree_in(j)), j))
    ca, cb = _content(a, i), _content(b, i)
    pa, pb = a.exact_div(ca), b.exact_div(cb)
    c = gcd(ca, cb)
    if pa.degree_in(i) < pb.degree_in(i):
        pa, pb = pb, pa
    while True:
        if pb.is_zero():
            g = _primitive(pa, i)
            break
        if pb.degree_in(i) == 0:
            g = one
            break
        r = _prem(pa, pb, i)
        pa, pb = pb, (_primitive(r, i) if not r.is_zero() else r)
    return (c * g).monic()


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor (grlex leading coefficient 1)."""
    if a.config != b.config:
        raise ConfigError("gcd across different fields")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    ma, mb = a.min_exponents(), b.min_exponents()
    mg = tuple(map(min, ma, mb))
    a1 = a.shift(tuple(-x for x in ma)) if any(ma) else a
    b1 = b.shift(tuple(-x for x in mb)) if any(mb) else b
    g = _gcd_core(a1, b1)
    return g.shift(mg).monic() if any(mg) else g.monic()
