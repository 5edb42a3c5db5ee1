"""p-cohomology classes over a Laurent field K1((pi)) given by finite presentations.

A class of degree n is presented as  sum_i (omega_i / pi^i + nu_i / pi^i ^ dpi/pi)
with omega_i an n-form and nu_i an (n-1)-form over K1.  The dpi/pi slot is
always written last.  Terms of positive valuation are dropped on input: they
lie in U_{-1}, which is zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError, FiltrationError, PreconditionError, UnsupportedPresentationError
from .fields import FieldConfig
from .forms import (
    DifferentialForm,
    LogTermSum,
    artin_schreier_map,
    cartier_decompose,
    dlog,
    exterior_d,
    log_to_form,
    monomial_decompose,
    split_closed,
)
from .rational import RationalFunction


@dataclass(frozen=True)
class LaurentField:
    """K1((pi)) with K1 = F_q(coefficient variables)."""

    coeff: FieldConfig
    pi: str = "pi"

    def __post_init__(self):
        if self.pi in self.coeff.variables:
            raise ConfigError(f"uniformizer {self.pi!r} is also a coefficient variable")
        FieldConfig(self.coeff.p, self.coeff.e, (self.pi,))

    @property
    def ambient(self) -> FieldConfig:
        """K1(pi): the coefficient variables followed by pi."""
        return self.coeff.with_variables(self.coeff.variables + (self.pi,))

    @property
    def pi_index(self) -> int:
        return self.coeff.nvars

    def uniformizer(self) -> RationalFunction:
        return RationalFunction.variable(self.ambient, self.pi)

    def pi_power(self, k: int) -> RationalFunction:
        return self.uniformizer() ** k

    def dlog_pi(self) -> DifferentialForm:
        return dlog(self.uniformizer())

    def __str__(self):
        return f"{self.coeff}(({self.pi}))"


def _zero_nu(field_, degree):
    return DifferentialForm.zero(field_.coeff, degree - 1) if degree > 0 else None


class LaurentClass:
    """Presentation {pole i: (omega_i, nu_i)} of a class in H^{n+1}_p(K1((pi)))."""

    __slots__ = ("field", "degree", "components")

    def __init__(self, field_: LaurentField, degree: int, components=None):
        self.field = field_
        self.degree = degree
        clean = {}
        for i, (omega, nu) in (components or {}).items():
            if i < 0:
                continue
            if omega is None:
                omega = DifferentialForm.zero(field_.coeff, degree)
            if nu is None and degree > 0:
                nu = _zero_nu(field_, degree)
            field_.coeff.check_same(omega.config)
            if omega.degree != degree and not omega.is_zero():
                raise ValueError(f"pole {i}: expected a {degree}-form")
            if nu is not None:
                field_.coeff.check_same(nu.config)
                if nu.degree != degree - 1 and not nu.is_zero():
                    raise ValueError(f"pole {i}: expected a {degree - 1}-form in the dpi/pi slot")
            omega = omega if omega.degree == degree else DifferentialForm.zero(field_.coeff, degree)
            if nu is not None and nu.degree != degree - 1:
                nu = _zero_nu(field_, degree)
            if omega.is_zero() and (nu is None or nu.is_zero()):
                continue
            clean[i] = (omega, nu)
        self.components = dict(sorted(clean.items(), reverse=True))

    @classmethod
    def zero(cls, field_, degree):
        return cls(field_, degree)

    @classmethod
    def from_form(cls, field_: LaurentField, form: DifferentialForm) -> "LaurentClass":
        """Read a form over K1(pi) whose denominators are pi^k times pi-free factors."""
        ambient = field_.ambient
        if form.config != ambient:
            if set(form.config.variables) - set(ambient.variables):
                raise ConfigError(f"form over {form.config} does not live over {ambient}")
            form = form.reindex(ambient)
        n = form.degree
        pi_idx = field_.pi_index
        pi = field_.uniformizer()
        acc = {}
        for I, f in form.coeffs.items():
            if pi_idx in I:
                slot, J, g = 1, I[:-1], f * pi
            else:
                slot, J, g = 0, I, f
            for i, coeff in _split_by_pole(g, field_).items():
                parts = acc.setdefault(i, ({}, {}))
                parts[slot][J] = coeff
        comps = {}
        for i, (om, nu) in acc.items():
            comps[i] = (DifferentialForm(field_.coeff, n, om),
                        DifferentialForm(field_.coeff, n - 1, nu) if n > 0 else None)
        return cls(field_, n, comps)

    @classmethod
    def from_logsum(cls, field_: LaurentField, t: LogTermSum) -> "LaurentClass":
        return cls.from_form(field_, log_to_form(t))

    def to_form(self) -> DifferentialForm:
        ambient = self.field.ambient
        total = DifferentialForm.zero(ambient, self.degree)
        dpi = self.field.dlog_pi()
        for i, (omega, nu) in self.components.items():
            scale = self.field.pi_power(-i)
            total = total + omega.reindex(ambient).scale(scale)
            if nu is not None and not nu.is_zero():
                total = total + nu.reindex(ambient).scale(scale).wedge(dpi)
        return total

    def pole_order(self) -> int:
        return max(self.components, default=-1)

    def __add__(self, other):
        if not isinstance(other, LaurentClass):
            return NotImplemented
        if other.field != self.field or other.degree != self.degree:
            raise ConfigError("adding classes over different fields or degrees")
        comps = dict(self.components)
        for i, (om, nu) in other.components.items():
            if i in comps:
                a, b = comps[i]
                comps[i] = (a + om, b + nu if b is not None else None)
            else:
                comps[i] = (om, nu)
        return LaurentClass(self.field, self.degree, comps)

    def __neg__(self):
        return LaurentClass(self.field, self.degree,
                            {i: (-om, -nu if nu is not None else None)
                             for i, (om, nu) in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, LaurentClass):
            return NotImplemented
        return (self.field == other.field and self.degree == other.degree
                and self.components == other.components)

    def __hash__(self):
        return hash((self.field, self.degree, tuple(self.components.items())))

    def __repr__(self):
        from .textio import format_laurent

        return f"LaurentClass({format_laurent(self)})"

    def __str__(self):
        from .textio import format_laurent

        return format_laurent(self)


def _split_by_pole(g: RationalFunction, field_: LaurentField) -> dict:
    """g = sum_i c_i pi^-i with c_i over K1; positive valuation parts dropped."""
    if g.is_zero():
        return {}
    pi_idx = field_.pi_index
    coeff = field_.coeff
    den = g.den
    k = min(e[pi_idx] for e in den.terms)
    if any(e[pi_idx] != k for e in den.terms):
        raise UnsupportedPresentationError(
            f"denominator of {g} is not a power of {field_.pi} times a {field_.pi}-free factor")
    positions = list(range(coeff.nvars)) + [None]
    strip = [0] * (coeff.nvars + 1)
    strip[pi_idx] = -k
    D = den.shift(strip).reindex(coeff, positions)
    out = {}
    for j, Nj in g.num.coefficients_in(pi_idx).items():
        i = k - j
        if i < 0:
            continue
        out[i] = RationalFunction(Nj.reindex(coeff, positions), D)
    return out


def pole_log_split(g: RationalFunction, field_: LaurentField):
    """g = u * pi^v with u over K1; returns (u, v)."""
    ambient = field_.ambient
    if g.config != ambient:
        g = g.reindex(ambient)
    if g.is_zero():
        raise UnsupportedPresentationError("zero has no unit-times-power form")
    pi_idx = field_.pi_index
    vals = []
    for poly in (g.num, g.den):
        ks = {e[pi_idx] for e in poly.terms}
        if len(ks) != 1:
            raise UnsupportedPresentationError(
                f"{g} is not a unit of K1 times a power of {field_.pi}")
        vals.append(ks.pop())
    v = vals[0] - vals[1]
    u = g * field_.pi_power(-v)
    positions = list(range(field_.coeff.nvars)) + [None]
    return RationalFunction(u.num.reindex(field_.coeff, positions),
                            u.den.reindex(field_.coeff, positions)), v


# ---------------------------------------------------------------------------
# canonical form


@dataclass
class CanonicalPiece:
    """Pole k > 0 of a canonical decomposition.

    For p not dividing k, ``omega`` is the merged n-form and ``nu`` is zero.
    For p | k both are projections onto the complement of the closed forms.
    """

    k: int
    omega: DifferentialForm
    nu: DifferentialForm | None

    def alpha(self) -> dict:
        return {(e, I): c for c, e, I in monomial_decompose(self.omega).terms}

    beta = alpha

    def gamma(self) -> dict:
        if self.nu is None:
            return {}
        return {(e, I): c for c, e, I in monomial_decompose(self.nu).terms}


@dataclass
class Certificate:
    """Witnesses with  input - output = d(sum exact) + sum wp(as_images)."""

    field: LaurentField
    degree: int
    exact: list = field(default_factory=list)
    as_images: list = field(default_factory=list)

    def total(self) -> DifferentialForm:
        ambient = self.field.ambient
        total = DifferentialForm.zero(ambient, self.degree)
        for _, xi in self.exact:
            total = total + exterior_d(xi)
        for _, t in self.as_images:
            total = total + artin_schreier_map(t)
        return total


@dataclass
class CanonicalDecomposition:
    field: LaurentField
    degree: int
    h0_omega: DifferentialForm
    h0_nu: DifferentialForm | None
    higher: dict
    certificate: Certificate | None = None

    def reassemble(self) -> LaurentClass:
        comps = {0: (self.h0_omega, self.h0_nu)}
        for k, piece in self.higher.items():
            comps[k] = (piece.omega, piece.nu)
        return LaurentClass(self.field, self.degree, comps)

    def key(self):
        return (self.field, self.degree, self.h0_omega, self.h0_nu,
                tuple((k, self.higher[k].omega, self.higher[k].nu) for k in sorted(self.higher)))

    def __eq__(self, other):
        if not isinstance(other, CanonicalDecomposition):
            return NotImplemented
        return self.key() == other.key()

    def verify_certificate(self, original: LaurentClass) -> bool:
        diff = original.to_form() - self.reassemble().to_form()
        return diff == self.certificate.total()


def canonicalize(f: LaurentClass) -> CanonicalDecomposition:
    field_, n = f.field, f.degree
    coeff, ambient = field_.coeff, field_.ambient
    p, gf = coeff.p, coeff.gf
    comps = {i: [om, nu] for i, (om, nu) in f.components.items()}
    cert = Certificate(field_, n)
    higher = {}
    dpi = LogTermSum.dlog(field_.uniformizer())
    for N in range(max(comps, default=0), 0, -1):
        if N not in comps:
            continue
        omega, nu = comps.pop(N)
        inv_pi_N = field_.pi_power(-N)
        if N % p:
            if nu is not None and not nu.is_zero():
                c = gf.inv(gf.element(N))
                if (n - 1) % 2:
                    c = gf.neg(c)
                omega = omega + exterior_d(nu).scale(RationalFunction.constant(coeff, c))
                cert.exact.append((N, nu.reindex(ambient).scale(inv_pi_N).scale(
                    RationalFunction.constant(ambient, gf.neg(c)))))
            if not omega.is_zero():
                higher[N] = CanonicalPiece(N, omega, _zero_nu(field_, n))
            continue
        low = N // p
        slot = comps.setdefault(low, [DifferentialForm.zero(coeff, n), _zero_nu(field_, n)])
        P_omega, mu = split_closed(omega)
        if not mu.is_zero():
            cd = cartier_decompose(mu)
            slot[0] = slot[0] + log_to_form(cd.epsilon)
            cert.as_images.append((N, cd.epsilon.reindex(ambient).scale(field_.pi_power(-low))))
            if cd.xi is not None and not cd.xi.is_zero():
                cert.exact.append((N, cd.xi.reindex(ambient).scale(inv_pi_N)))
        P_nu = nu
        if nu is not None:
            P_nu, mu = split_closed(nu)
            if not mu.is_zero():
                cd = cartier_decompose(mu)
                slot[1] = slot[1] + log_to_form(cd.epsilon)
                eps = cd.epsilon.reindex(ambient).scale(field_.pi_power(-low))
                cert.as_images.append((N, eps.wedge(dpi)))
                if cd.xi is not None and not cd.xi.is_zero():
                    cert.exact.append((N, cd.xi.reindex(ambient).scale(inv_pi_N).wedge(field_.dlog_pi())))
        if not P_omega.is_zero() or (P_nu is not None and not P_nu.is_zero()):
            higher[N] = CanonicalPiece(N, P_omega, P_nu)
    h0 = comps.get(0, [DifferentialForm.zero(coeff, n), _zero_nu(field_, n)])
    return CanonicalDecomposition(field_, n, h0[0], h0[1], dict(sorted(higher.items())), cert)


def residues(f: LaurentClass):
    """(first residue, second residue) of a class in U_0."""
    cd = canonicalize(f)
    if cd.higher:
        level = max(cd.higher)
        raise FiltrationError(f"class is not in U_0: it lies in U_{level} and not below", level)
    return cd.h0_omega, cd.h0_nu


def filtration_level(f: LaurentClass) -> int:
    cd = canonicalize(f)
    if cd.higher:
        return max(cd.higher)
    if cd.h0_omega.is_zero() and (cd.h0_nu is None or cd.h0_nu.is_zero()):
        return -1
    return 0


def graded_image(f: LaurentClass, m: int):
    """Representative of the image of f in U_m / U_{m-1}.

    An n-form for p not dividing m, a pair (n-form, (n-1)-form) of complement
    projections for p | m > 0, and the pair of residues for m = 0.
    """
    cd = canonicalize(f)
    level = max(cd.higher) if cd.higher else 0
    if level > m:
        raise FiltrationError(f"class lies in U_{level}, not in U_{m}", level)
    p = f.field.coeff.p
    if m == 0:
        return cd.h0_omega, cd.h0_nu
    piece = cd.higher.get(m)
    zero_om = DifferentialForm.zero(f.field.coeff, f.degree)
    if m % p:
        return piece.omega if piece else zero_om
    if piece is None:
        return zero_om, _zero_nu(f.field, f.degree)
    return piece.omega, piece.nu


# ---------------------------------------------------------------------------
# extension of scalars


@dataclass(frozen=True)
class ValuedExtension:
    """tau = u * pi^e with u a unit over the coefficient field of the target."""

    e: int
    u: RationalFunction

    def __post_init__(self):
        if self.e < 1:
            raise PreconditionError(f"ramification index must be positive, got {self.e}")
        if self.u.is_zero():
            raise PreconditionError("u = 0 is not a unit")


def extend_scalars(f: LaurentClass, ext: ValuedExtension, target: LaurentField) -> LaurentClass:
    """Pull a class over K1'((tau)) back to K1((pi)) along tau = u pi^e."""
    source = f.field
    if set(source.coeff.variables) - set(target.coeff.variables):
        raise ConfigError(f"{source.coeff} is not a subfield of {target.coeff}")
    u = ext.u
    if u.config != target.coeff:
        if set(u.config.variables) - set(target.coeff.variables):
            raise PreconditionError(f"u = {u} is not a unit of {target}")
        u = u.reindex(target.coeff)
    du = dlog(u)
    n = f.degree
    comps = {}
    for i, (omega, nu) in f.components.items():
        s = u ** (-i)
        om = omega.reindex(target.coeff)
        if nu is not None and not nu.is_zero():
            nu_t = nu.reindex(target.coeff)
            om = om + nu_t.wedge(du)
            new_nu = nu_t.scale(s).scale(ext.e)
        else:
            new_nu = _zero_nu(target, n)
        comps[ext.e * i] = (om.scale(s), new_nu)
    return LaurentClass(target, n, comps)


def psi(m: int, e: int, u: RationalFunction, graded):
    """The induced map on graded pieces, from the explicit formulas."""
    p = u.config.p
    du = dlog(u)
    if m == 0:
        omega, nu = graded
        if nu is None:
            return omega, None
        return omega + nu.wedge(du), nu.scale(e)
    s = u ** (-m)
    if m % p:
        return graded.scale(s)
    omega, nu = graded
    new_om = omega.scale(s)
    if nu is None:
        return split_closed(new_om)[0], None
    new_om = new_om + nu.scale(s).wedge(du)
    return split_closed(new_om)[0], split_closed(nu.scale(s).scale(e))[0]
