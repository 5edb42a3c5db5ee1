"""Exact elements of F_q(x_1, ..., x_m) and their p-th power structure."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import ConfigError, DomainError, MembershipError, PreconditionError
from .fields import FieldConfig
from .poly import Polynomial, gcd


class RationalFunction:
    """Reduced fraction num/den with den monic in grlex order.

    The representation is canonical, so ``==`` decides equality of functions.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, _normalized=False):
        if den is None:
            den = Polynomial.one(num.config)
            _normalized = True
        if num.config != den.config:
            raise ConfigError("numerator and denominator live in different fields")
        if den.is_zero():
            raise DomainError("zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def constant(cls, config: FieldConfig, c: int):
        return cls(Polynomial.constant(config, c))

    @classmethod
    def from_int(cls, config: FieldConfig, n: int):
        return cls(Polynomial.constant(config, config.gf.element(n)))

    @classmethod
    def zero(cls, config):
        return cls(Polynomial.zero(config))

    @classmethod
    def one(cls, config):
        return cls(Polynomial.one(config))

    @classmethod
    def variable(cls, config, name):
        return cls(Polynomial.variable(config, name))

    @classmethod
    def monomial(cls, config, exps, c=1):
        """c * x^exps with possibly negative exponents."""
        num = [max(k, 0) for k in exps]
        den = [max(-k, 0) for k in exps]
        return cls(Polynomial.monomial(config, num, c), Polynomial.monomial(config, den),
                   _normalized=True)

    @property
    def config(self) -> FieldConfig:
        return self.num.config

    # predicates -------------------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.den.is_one() and self.num.is_one()

    def is_constant(self):
        return self.den.is_one() and self.num.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_value()

    def is_polynomial(self):
        return self.den.is_one()

    def is_monomial(self):
        return self.num.is_monomial() and self.den.is_monomial()

    def monomial_data(self):
        """(coefficient, exponent vector) of a monomial, exponents possibly negative."""
        if not self.is_monomial():
            raise ValueError("not a monomial")
        (en, c), = self.num.terms.items()
        (ed, _), = self.den.terms.items()
        return c, tuple(a - b for a, b in zip(en, ed))

    def support(self):
        return self.num.support() | self.den.support()

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.config != self.config:
                raise ConfigError(f"field mismatch: {self.config} vs {other.config}")
            return other
        if isinstance(other, int):
            return RationalFunction.from_int(self.config, other)
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero():
            return other
        if c.is_zero():
            return self
        if b.is_one() and d.is_one():
            return RationalFunction(a + c)
        if b.is_one():
            return RationalFunction(a * d + c, d, _normalized=True)
        if d.is_one():
            return RationalFunction(a + c * b, b, _normalized=True)
        if b == d:
            num = a + c
            if num.is_zero():
                return RationalFunction.zero(self.config)
            g = gcd(num, b)
            if g.is_one():
                return RationalFunction(num, b, _normalized=True)
            return RationalFunction(num.exact_div(g), b.exact_div(g), _normalized=True)
        g = gcd(b, d)
        if g.is_one():
            return RationalFunction(a * d + c * b, b * d, _normalized=True)
        b1, d1 = b.exact_div(g), d.exact_div(g)
        num = a * d1 + c * b1
        if num.is_zero():
            return RationalFunction.zero(self.config)
        den = b1 * d
        g2 = gcd(num, g)
        if not g2.is_one():
            num, den = num.exact_div(g2), den.exact_div(g2)
        return RationalFunction(num, den, _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero() or c.is_zero():
            return RationalFunction.zero(self.config)
        if b.is_one() and d.is_one():
            return RationalFunction(a * c)
        g1 = gcd(a, d)
        g2 = gcd(c, b)
        if not g1.is_one():
            a, d = a.exact_div(g1), d.exact_div(g1)
        if not g2.is_one():
            c, b = c.exact_div(g2), b.exact_div(g2)
        return RationalFunction(a * c, b * d, _normalized=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DomainError("inverse of zero")
        lc = self.num.leading_coefficient()
        inv = self.config.gf.inv(lc)
        return RationalFunction(self.den.scale(inv), self.num.scale(inv), _normalized=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return RationalFunction.one(self.config)
        return RationalFunction(self.num**k, self.den**k, _normalized=True)

    def scale(self, c: int):
        """Multiply by an F_q element c."""
        if c == 0:
            return RationalFunction.zero(self.config)
        return RationalFunction(self.num.scale(c), self.den, _normalized=True)

    def reindex(self, target: FieldConfig):
        """Move to a configuration sharing variable names (by name)."""
        if target == self.config:
            return self
        if (target.p, target.e) != (self.config.p, self.config.e):
            raise ConfigError(f"cannot move {self.config} elements into {target}")
        positions = [target.variables.index(v) if v in target.variables else None
                     for v in self.config.variables]
        num = self.num.reindex(target, positions)
        den = self.den.reindex(target, positions)
        # the grlex order may change with the variable order
        return RationalFunction(num, den)

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = RationalFunction.from_int(self.config, other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        from .textio import format_rational

        return f"RationalFunction({format_rational(self)})"

    def __str__(self):
        from .textio import format_rational

        return format_rational(self)


def _normalize(num: Polynomial, den: Polynomial):
    if num.is_zero():
        return num, Polynomial.one(num.config)
    if den.is_constant():
        inv = num.config.gf.inv(den.constant_value())
        return num.scale(inv), Polynomial.one(num.config)
    g = gcd(num, den)
    if not g.is_one():
        num, den = num.exact_div(g), den.exact_div(g)
    lc = den.leading_coefficient()
    if lc != 1:
        inv = num.config.gf.inv(lc)
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def _var_index(f: RationalFunction, x) -> int:
    return f.config.index(x) if isinstance(x, str) else x


def partial_derivative(f: RationalFunction, x) -> RationalFunction:
    """d f / d x by the quotient rule, all arithmetic mod p."""
    i = _var_index(f, x)
    u, v = f.num, f.den
    du = u.derivative(i)
    if v.is_one():
        return RationalFunction(du)
    dv = v.derivative(i)
    if dv.is_zero():
        return RationalFunction(du, v)
    return RationalFunction(du * v - u * dv, v * v)


def frobenius_scalar(f: RationalFunction) -> RationalFunction:
    """f^p."""
    return RationalFunction(f.num.frobenius(), f.den.frobenius(), _normalized=True)


def is_pth_power(f: RationalFunction) -> bool:
    """True iff f lies in K^p.  The reduced form of a p-th power has p-th power parts."""
    return f.num.is_pth_power() and f.den.is_pth_power()


def pth_root(f: RationalFunction) -> RationalFunction:
    if is_pth_power(f):
        return RationalFunction(f.num.pth_root(), f.den.pth_root(), _normalized=True)
    witness = next(v for v in f.config.variables if not partial_derivative(f, v).is_zero())
    raise DomainError(f"{f} is not a p-th power (d/d{witness} is nonzero)", witness=witness)


def residue_split(f: RationalFunction) -> dict:
    """Split f = sum_e P_e / v^p, grouping numerator exponents by their residues mod p.

    Each piece is f_e^p * x^e for the standard K^p-coordinates f_e.  Returned as
    a map from residue tuple e to the (reduced) piece.
    """
    config = f.config
    p = config.p
    if f.is_zero():
        return {}
    u, v = f.num, f.den
    if v.is_one():
        big_num, big_den = u, v
    else:
        big_num, big_den = u * v ** (p - 1), v.frobenius()
    groups = {}
    for e, c in big_num.terms.items():
        groups.setdefault(tuple(k % p for k in e), {})[e] = c
    if len(groups) == 1:
        (e, _), = groups.items()
        return {e: f}
    return {e: RationalFunction(Polynomial(config, t, _clean=True), big_den)
            for e, t in groups.items()}


def monomial_exponents(a: RationalFunction):
    """Exponent vector of a monomial basis element (coefficient ignored)."""
    if not a.is_monomial():
        raise PreconditionError(f"{a} is not a monomial")
    return a.monomial_data()[1]


@dataclass
class KpCoordinates:
    """Coordinates f_e with f = sum_e f_e^p a^e for a p-independent monomial list a."""

    basis: tuple
    coords: dict = field(default_factory=dict)

    def reassemble(self) -> RationalFunction:
        config = self.basis[0].config if self.basis else None
        total = None
        for e, fe in self.coords.items():
            term = frobenius_scalar(fe)
            for a, k in zip(self.basis, e):
                if k:
                    term = term * a**k
            total = term if total is None else total + term
        if total is None:
            return RationalFunction.zero(config)
        return total


def standard_basis(config: FieldConfig):
    return tuple(RationalFunction.variable(config, v) for v in config.variables)


def kp_expand(f: RationalFunction, basis=None) -> KpCoordinates:
    """Unique coordinates f_e with f = sum_e f_e^p a^e over e in {0..p-1}^s."""
    config = f.config
    p, gf = config.p, config.gf
    if basis is None:
        basis = standard_basis(config)
    basis = tuple(basis)
    if f.is_zero():
        return KpCoordinates(basis, {})
    exps = [monomial_exponents(a) for a in basis]
    coeffs = [a.monomial_data()[0] for a in basis]
    standard = all(c == 1 for c in coeffs) and exps == [
        tuple(int(i == j) for i in range(config.nvars)) for j in range(config.nvars)]
    if not standard and linalg.rank([[k % p for k in a] for a in exps], gf) < len(exps):
        raise PreconditionError("basis monomials are not p-independent")
    u, v = f.num, f.den
    big_num = u * v ** (p - 1) if not v.is_one() else u
    groups = {}
    for E, c in big_num.terms.items():
        if standard:
            e = tuple(k % p for k in E)
        else:
            sol = linalg.solve([[k % p for k in a] for a in exps], [k % p for k in E], gf)
            if sol is None:
                raise MembershipError(
                    f"{f} is not in K^p(basis): exponent class {tuple(k % p for k in E)} "
                    "is outside the span of the basis exponents",
                    residue_class=tuple(k % p for k in E))
            e = tuple(sol)
        shifted = tuple((k - sum(ei * a[j] for ei, a in zip(e, exps))) // p for j, k in enumerate(E))
        scale = 1
        for ci, ei in zip(coeffs, e):
            scale = gf.mul(scale, gf.pow(ci, ei))
        groups.setdefault(e, {})[shifted] = gf.root(gf.mul(c, gf.inv(scale)))
    coords = {}
    for e, terms in groups.items():
        low = tuple(map(min, zip(*terms)))
        low = tuple(min(k, 0) for k in low)
        num = Polynomial(config, {tuple(k - l for k, l in zip(t, low)): c for t, c in terms.items()},
                         _clean=True)
        den = v * Polynomial.monomial(config, tuple(-l for l in low)) if any(low) else v
        coords[e] = RationalFunction(num, den)
    return KpCoordinates(basis, coords)
