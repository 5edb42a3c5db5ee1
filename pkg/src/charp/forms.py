"""Differential forms over F_q(x_1, ..., x_m) and logarithmic presentations.

Forms are stored on the basis dx_I with I a strictly increasing tuple of
variable indices.  Closedness, exactness and the Cartier decomposition are
decided through the weight grading: a term c^p * x^e * dx_I (c arbitrary) has
weight W = (e + 1_I) mod p.  The exterior derivative preserves weights, and on
every weight W != 0 the complex is contractible with the explicit homotopy
h_W = W_j^-1 * x_j * iota_j, j the first index with W_j != 0.  Weight zero is
exactly the image of the Frobenius on logarithmic forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import ConfigError, DomainError, PreconditionError
from .fields import FieldConfig
from .rational import (
    RationalFunction,
    frobenius_scalar,
    kp_expand,
    partial_derivative,
    pth_root,
    residue_split,
)


def _wedge_sign(I, J):
    """Sign of sorting I + J, or 0 if they share an index."""
    if set(I) & set(J):
        return 0
    inversions = sum(1 for i in I for j in J if i > j)
    return -1 if inversions % 2 else 1


class DifferentialForm:
    """Immutable n-form  sum_I f_I dx_I  with no stored zero coefficients."""

    __slots__ = ("config", "degree", "coeffs", "_hash")

    def __init__(self, config: FieldConfig, degree: int, coeffs=None):
        self.config = config
        self.degree = degree
        clean = {}
        if coeffs:
            for I, f in coeffs.items():
                I = tuple(I)
                if len(I) != degree or list(I) != sorted(set(I)):
                    raise ValueError(f"bad index tuple {I} for a {degree}-form")
                if f.config != config:
                    raise ConfigError(f"coefficient field {f.config} differs from {config}")
                if not f.is_zero():
                    clean[I] = f
        self.coeffs = clean
        self._hash = None

    @classmethod
    def zero(cls, config, degree):
        return cls(config, degree)

    @classmethod
    def scalar(cls, f: RationalFunction):
        return cls(f.config, 0, {(): f})

    @classmethod
    def basis(cls, config, I, coeff=None):
        coeff = RationalFunction.one(config) if coeff is None else coeff
        I = tuple(config.index(v) if isinstance(v, str) else v for v in I)
        order = sorted(range(len(I)), key=lambda k: I[k])
        sign = _perm_sign(order)
        return cls(config, len(I), {tuple(sorted(I)): coeff if sign > 0 else -coeff})

    @classmethod
    def differential(cls, config, name):
        return cls.basis(config, (name,))

    def is_zero(self):
        return not self.coeffs

    def scalar_value(self) -> RationalFunction:
        if self.degree != 0:
            raise ValueError("not a 0-form")
        return self.coeffs.get((), RationalFunction.zero(self.config))

    def _check(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        self.config.check_same(other.config)
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if other.degree != self.degree:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise ValueError(f"cannot add a {self.degree}-form and a {other.degree}-form")
        out = dict(self.coeffs)
        for I, f in other.coeffs.items():
            out[I] = out[I] + f if I in out else f
        return DifferentialForm(self.config, self.degree, out)

    def __neg__(self):
        return DifferentialForm(self.config, self.degree, {I: -f for I, f in self.coeffs.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, f) -> "DifferentialForm":
        """Multiply by a function (RationalFunction) or an integer."""
        if isinstance(f, int):
            f = RationalFunction.from_int(self.config, f)
        if f.is_zero():
            return DifferentialForm.zero(self.config, self.degree)
        if f.is_one():
            return self
        return DifferentialForm(self.config, self.degree, {I: g * f for I, g in self.coeffs.items()})

    def __mul__(self, f):
        if isinstance(f, (int, RationalFunction)):
            return self.scale(f)
        return NotImplemented

    __rmul__ = __mul__

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        out = {}
        for I, f in self.coeffs.items():
            for J, g in other.coeffs.items():
                s = _wedge_sign(I, J)
                if s == 0:
                    continue
                K = tuple(sorted(I + J))
                term = f * g if s > 0 else -(f * g)
                out[K] = out[K] + term if K in out else term
        return DifferentialForm(self.config, self.degree + other.degree, out)

    def contract(self, j: int) -> "DifferentialForm":
        """Interior product with the coordinate field d/dx_j."""
        out = {}
        for I, f in self.coeffs.items():
            if j in I:
                k = I.index(j)
                out[I[:k] + I[k + 1:]] = f if k % 2 == 0 else -f
        return DifferentialForm(self.config, self.degree - 1, out)

    def reindex(self, target: FieldConfig) -> "DifferentialForm":
        """Move to another configuration, matching variables by name."""
        if target == self.config:
            return self
        positions = []
        for v in self.config.variables:
            positions.append(target.variables.index(v) if v in target.variables else None)
        out = {}
        for I, f in self.coeffs.items():
            if any(positions[i] is None for i in I):
                raise ConfigError(f"variable missing from {target}")
            J = [positions[i] for i in I]
            order = sorted(range(len(J)), key=lambda k: J[k])
            g = f.reindex(target)
            K = tuple(sorted(J))
            term = g if _perm_sign(order) > 0 else -g
            out[K] = out[K] + term if K in out else term
        return DifferentialForm(target, self.degree, out)

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.config == other.config
        return self.config == other.config and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.config, self.degree, frozenset(self.coeffs.items())))
        return self._hash

    def __repr__(self):
        from .textio import format_form

        return f"DifferentialForm({format_form(self)})"

    def __str__(self):
        from .textio import format_form

        return format_form(self)


def _perm_sign(order):
    seen = 0
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                seen += 1
    return -1 if seen % 2 else 1


def exterior_d(omega: DifferentialForm) -> DifferentialForm:
    config = omega.config
    out = {}
    for I, f in omega.coeffs.items():
        for j in sorted(f.support()):
            if j in I:
                continue
            df = partial_derivative(f, j)
            if df.is_zero():
                continue
            before = sum(1 for i in I if i < j)
            K = tuple(sorted(I + (j,)))
            term = df if before % 2 == 0 else -df
            out[K] = out[K] + term if K in out else term
    return DifferentialForm(config, omega.degree + 1, out)


def wedge(*forms: DifferentialForm) -> DifferentialForm:
    result = forms[0]
    for f in forms[1:]:
        result = result.wedge(f)
    return result


def dlog(f: RationalFunction) -> DifferentialForm:
    """df / f."""
    config = f.config
    if f.is_zero():
        raise DomainError("dlog of zero")
    if f.is_monomial():
        _, exps = f.monomial_data()
        out = {}
        for j, a in enumerate(exps):
            if a % config.p:
                xj = RationalFunction.variable(config, j)
                out[(j,)] = xj.inverse().scale(config.gf.element(a))
        return DifferentialForm(config, 1, out)
    inv = f.inverse()
    out = {}
    for j in sorted(f.support()):
        df = partial_derivative(f, j)
        if not df.is_zero():
            out[(j,)] = df * inv
    return DifferentialForm(config, 1, out)


# ---------------------------------------------------------------------------
# logarithmic presentations


def _atom_key(b: RationalFunction):
    if b.is_monomial():
        _, exps = b.monomial_data()
        return (0, exps.index(1), "")
    from .textio import format_rational

    return (1, 0, format_rational(b))


def _atomize(b: RationalFunction):
    """dlog b as an integer combination of atoms: list of (multiplicity, atom)."""
    config = b.config
    if b.is_zero():
        raise DomainError("dlog of zero in a logarithmic term")
    if b.is_monomial():
        _, exps = b.monomial_data()
        return [(a, RationalFunction.variable(config, j)) for j, a in enumerate(exps) if a % config.p]
    if b.is_constant():
        return []
    lc = b.num.leading_coefficient()
    if lc != 1:
        b = b.scale(config.gf.inv(lc))
    return [(1, b)]


class LogTermSum:
    """Presentation  sum_k a_k * dlog(b_k1) ^ ... ^ dlog(b_kn)."""

    __slots__ = ("config", "degree", "terms", "_canon")

    def __init__(self, config: FieldConfig, degree: int, terms=()):
        self.config = config
        self.degree = degree
        clean = []
        for a, bs in terms:
            bs = tuple(bs)
            if len(bs) != degree:
                raise ValueError(f"term of length {len(bs)} in a degree {degree} presentation")
            for b in (a, *bs):
                config.check_same(b.config)
            for b in bs:
                if b.is_zero():
                    raise DomainError("zero argument of dlog")
            if not a.is_zero():
                clean.append((a, bs))
        self.terms = tuple(clean)
        self._canon = None

    @classmethod
    def scalar(cls, a: RationalFunction):
        return cls(a.config, 0, [(a, ())])

    @classmethod
    def zero(cls, config, degree):
        return cls(config, degree)

    @classmethod
    def dlog(cls, b: RationalFunction):
        return cls(b.config, 1, [(RationalFunction.one(b.config), (b,))])

    def canonical(self) -> "LogTermSum":
        """Expand monomial arguments into variables, sort slots, merge terms."""
        if self._canon is not None:
            return self._canon
        config = self.config
        acc = {}
        keys = {}
        for a, bs in self.terms:
            expanded = [_atomize(b) for b in bs]
            for choice in product(*expanded):
                mult = 1
                atoms = []
                for m, atom in choice:
                    mult *= m
                    atoms.append(atom)
                if mult % config.p == 0:
                    continue
                ks = [_atom_key(t) for t in atoms]
                if len(set(ks)) < len(ks):
                    continue
                order = sorted(range(len(ks)), key=lambda k: ks[k])
                if _perm_sign(order) < 0:
                    mult = -mult
                sorted_atoms = tuple(atoms[k] for k in order)
                sorted_keys = tuple(ks[k] for k in order)
                coeff = a.scale(config.gf.element(mult))
                if sorted_keys in acc:
                    acc[sorted_keys] = acc[sorted_keys] + coeff
                else:
                    acc[sorted_keys] = coeff
                    keys[sorted_keys] = sorted_atoms
        terms = [(acc[k], keys[k]) for k in sorted(acc) if not acc[k].is_zero()]
        canon = LogTermSum(config, self.degree, terms)
        canon._canon = canon
        self._canon = canon
        return canon

    def is_zero(self):
        return not self.canonical().terms

    def __add__(self, other):
        if not isinstance(other, LogTermSum):
            return NotImplemented
        self.config.check_same(other.config)
        if other.degree != self.degree:
            raise ValueError("degree mismatch in logarithmic sum")
        return LogTermSum(self.config, self.degree, self.terms + other.terms)

    def __neg__(self):
        return LogTermSum(self.config, self.degree, [(-a, bs) for a, bs in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f: RationalFunction) -> "LogTermSum":
        return LogTermSum(self.config, self.degree, [(a * f, bs) for a, bs in self.terms])

    def wedge(self, other: "LogTermSum") -> "LogTermSum":
        self.config.check_same(other.config)
        return LogTermSum(self.config, self.degree + other.degree,
                          [(a * c, bs + cs) for a, bs in self.terms for c, cs in other.terms])

    def reindex(self, target: FieldConfig) -> "LogTermSum":
        return LogTermSum(target, self.degree,
                          [(a.reindex(target), tuple(b.reindex(target) for b in bs))
                           for a, bs in self.terms])

    def __eq__(self, other):
        if not isinstance(other, LogTermSum):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        if not a.terms and not b.terms:
            return self.config == other.config
        return (self.config == other.config and self.degree == other.degree
                and a.terms == b.terms)

    def __hash__(self):
        c = self.canonical()
        return hash((self.config, self.degree, c.terms))

    def __repr__(self):
        from .textio import format_logsum

        return f"LogTermSum({format_logsum(self)})"

    def __str__(self):
        from .textio import format_logsum

        return format_logsum(self)


def log_to_form(t: LogTermSum) -> DifferentialForm:
    config = t.config
    total = DifferentialForm.zero(config, t.degree)
    for a, atoms in t.canonical().terms:
        if all(b.is_monomial() for b in atoms):
            idx = [b.monomial_data()[1].index(1) for b in atoms]
            denom = RationalFunction.one(config)
            for b in atoms:
                denom = denom * b
            term = DifferentialForm(config, t.degree, {tuple(idx): a / denom})
        else:
            term = DifferentialForm.scalar(a)
            for b in atoms:
                term = term.wedge(dlog(b))
        total = total + term
    return total


def frobenius_phi(t: LogTermSum) -> LogTermSum:
    """a dlog b_1 ^ ... -> a^p dlog b_1 ^ ..."""
    return LogTermSum(t.config, t.degree, [(frobenius_scalar(a), bs) for a, bs in t.terms])


def artin_schreier_map(t: LogTermSum) -> DifferentialForm:
    """(a^p - a) dlog b_1 ^ ... as a form."""
    return log_to_form(LogTermSum(t.config, t.degree,
                                  [(frobenius_scalar(a) - a, bs) for a, bs in t.terms]))


# ---------------------------------------------------------------------------
# monomial bases and weights


@dataclass
class MonomialTermDecomposition:
    """Terms (c, e, I) standing for c^p * x^e * dx_I with e in {0..p-1}^m."""

    config: FieldConfig
    degree: int
    terms: list

    def reassemble(self) -> DifferentialForm:
        out = DifferentialForm.zero(self.config, self.degree)
        for c, e, I in self.terms:
            coeff = frobenius_scalar(c) * RationalFunction.monomial(self.config, e)
            out = out + DifferentialForm(self.config, self.degree, {I: coeff})
        return out


def monomial_decompose(omega: DifferentialForm) -> MonomialTermDecomposition:
    terms = []
    for I in sorted(omega.coeffs):
        coords = kp_expand(omega.coeffs[I]).coords
        for e in sorted(coords):
            terms.append((coords[e], e, I))
    return MonomialTermDecomposition(omega.config, omega.degree, terms)


def term_weight(e, I, p):
    return tuple((k + (j in I)) % p for j, k in enumerate(e))


def is_closed_monomial(e, I) -> bool:
    """c^p x^e dx_I is closed iff e_j = 0 (mod p) off I; e is reduced mod p here."""
    return all(k == 0 for j, k in enumerate(e) if j not in I)


def in_complement_basis(e, I, p) -> bool:
    """Membership in the fixed basis of a complement to the closed forms.

    These are the monomials x^e dx_I whose weight W is nonzero and whose
    first index j with W_j != 0 is not in I; every such monomial is non-closed.
    """
    W = term_weight(e, I, p)
    j0 = next((j for j, w in enumerate(W) if w), None)
    return j0 is not None and j0 not in I


def weight_components(omega: DifferentialForm) -> dict:
    """Split omega by weight; keys are weight tuples, values forms."""
    config = omega.config
    p = config.p
    parts = {}
    for I, f in omega.coeffs.items():
        for e, piece in residue_split(f).items():
            W = term_weight(e, I, p)
            slot = parts.setdefault(W, {})
            slot[I] = slot[I] + piece if I in slot else piece
    return {W: DifferentialForm(config, omega.degree, c) for W, c in parts.items()}


def _homotopy(form: DifferentialForm, W) -> DifferentialForm:
    config = form.config
    j0 = next(j for j, w in enumerate(W) if w)
    x = RationalFunction.variable(config, j0).scale(config.gf.inv(W[j0]))
    return form.contract(j0).scale(x)


def split_closed(omega: DifferentialForm):
    """omega = P + mu with mu closed and P in the span of the complement basis.

    P depends only on d(omega), so it is a canonical representative of omega
    modulo closed forms.
    """
    d_omega = exterior_d(omega)
    P = DifferentialForm.zero(omega.config, omega.degree)
    for W, comp in weight_components(d_omega).items():
        if any(W):
            P = P + _homotopy(comp, W)
    return P, omega - P


def is_exact(omega: DifferentialForm):
    """(True, xi) with d(xi) = omega, or (False, None)."""
    if omega.degree == 0:
        return (omega.is_zero(), None)
    if omega.is_zero():
        return True, DifferentialForm.zero(omega.config, omega.degree - 1)
    if not exterior_d(omega).is_zero():
        return False, None
    xi = DifferentialForm.zero(omega.config, omega.degree - 1)
    for W, comp in weight_components(omega).items():
        if not any(W):
            return False, None
        xi = xi + _homotopy(comp, W)
    return True, xi


@dataclass
class CartierDecomposition:
    epsilon: LogTermSum
    xi: DifferentialForm | None

    def reassemble(self) -> DifferentialForm:
        out = log_to_form(frobenius_phi(self.epsilon))
        if self.xi is not None:
            out = out + exterior_d(self.xi)
        return out


def cartier_decompose(mu: DifferentialForm) -> CartierDecomposition:
    """Closed mu = Phi(epsilon) + d(xi), epsilon on the dlog x_I basis."""
    config = mu.config
    d_mu = exterior_d(mu)
    if not d_mu.is_zero():
        raise PreconditionError("form is not closed", witness=d_mu)
    if mu.degree == 0:
        return CartierDecomposition(LogTermSum(config, 0, [(pth_root(mu.scalar_value()), ())]), None)
    terms = []
    xi = DifferentialForm.zero(config, mu.degree - 1)
    for W, comp in sorted(weight_components(mu).items()):
        if any(W):
            xi = xi + _homotopy(comp, W)
            continue
        for I in sorted(comp.coeffs):
            xs = [RationalFunction.variable(config, i) for i in I]
            prod_x = RationalFunction.one(config)
            for x in xs:
                prod_x = prod_x * x
            terms.append((pth_root(comp.coeffs[I] * prod_x), tuple(xs)))
    return CartierDecomposition(LogTermSum(config, mu.degree, terms), xi)
