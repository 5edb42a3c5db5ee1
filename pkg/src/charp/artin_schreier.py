"""Deciding classes of F_q(t) modulo the image of g -> g^p - g.

Dense univariate polynomials are lists of F_q elements, lowest degree first,
with no trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .poly import Polynomial
from .rational import RationalFunction, frobenius_scalar

# ---------------------------------------------------------------------------
# dense univariate arithmetic


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def u_add(a, b, gf):
    n = max(len(a), len(b))
    return _trim([gf.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])


def u_sub(a, b, gf):
    return u_add(a, [gf.neg(c) for c in b], gf)


def u_mul(a, b, gf):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = gf.add(out[i + j], gf.mul(x, y))
    return _trim(out)


def u_scale(a, c, gf):
    return _trim([gf.mul(x, c) for x in a])


def u_divmod(a, b, gf):
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    a = list(a)
    inv = gf.inv(b[-1])
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = gf.mul(a[-1], inv)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = gf.sub(a[shift + i], gf.mul(c, y))
        _trim(a)
    return _trim(q), a


def u_monic(a, gf):
    return u_scale(a, gf.inv(a[-1]), gf) if a else a


def u_gcd(a, b, gf):
    while b:
        a, b = b, u_divmod(a, b, gf)[1]
    return u_monic(a, gf)


def u_ext_gcd(a, b, gf):
    """(g, s, t) with s*a + t*b = g monic."""
    r0, r1, s0, s1, t0, t1 = a, b, [1], [], [], [1]
    while r1:
        q, r = u_divmod(r0, r1, gf)
        r0, r1 = r1, r
        s0, s1 = s1, u_sub(s0, u_mul(q, s1, gf), gf)
        t0, t1 = t1, u_sub(t0, u_mul(q, t1, gf), gf)
    inv = gf.inv(r0[-1])
    return u_scale(r0, inv, gf), u_scale(s0, inv, gf), u_scale(t0, inv, gf)


def u_derivative(a, gf):
    return _trim([gf.mul(c, gf.element(i)) for i, c in enumerate(a)][1:])


def u_pth_root(a, gf):
    p = gf.p
    return _trim([gf.root(a[i]) for i in range(0, len(a), p)])


def u_pow(a, k, gf):
    out = [1]
    while k:
        if k & 1:
            out = u_mul(out, a, gf)
        k >>= 1
        if k:
            a = u_mul(a, a, gf)
    return out


def u_powmod(a, k, m, gf):
    out = [1]
    a = u_divmod(a, m, gf)[1]
    while k:
        if k & 1:
            out = u_divmod(u_mul(out, a, gf), m, gf)[1]
        k >>= 1
        if k:
            a = u_divmod(u_mul(a, a, gf), m, gf)[1]
    return out


def squarefree_decomposition(f, gf):
    """Monic f = prod S_j^j with S_j squarefree, pairwise coprime; returns {j: S_j}."""
    p = gf.p
    f = u_monic(f, gf)
    out = {}

    def rec(f, mult):
        if len(f) <= 1:
            return
        df = u_derivative(f, gf)
        if not df:
            rec(u_pth_root(f, gf), mult * p)
            return
        c = u_gcd(f, df, gf)
        w = u_divmod(f, c, gf)[0]
        i = 1
        while len(w) > 1:
            y = u_gcd(w, c, gf)
            z = u_divmod(w, y, gf)[0]
            if len(z) > 1:
                out[i * mult] = u_mul(out.get(i * mult, [1]), z, gf)
            i += 1
            w = y
            c = u_divmod(c, y, gf)[0]
        if len(c) > 1:
            rec(u_pth_root(c, gf), mult * p)

    rec(f, 1)
    return out


def to_dense(f: Polynomial):
    out = [0] * (f.total_degree() + 1)
    for (k,), c in f.terms.items():
        out[k] = c
    return out


def from_dense(a, config) -> Polynomial:
    return Polynomial(config, {(i,): c for i, c in enumerate(a) if c}, _clean=True)


# ---------------------------------------------------------------------------
# reduction


@dataclass
class ASReducedClass:
    """f = representative + (g^p - g), all pole orders of the representative prime to p.

    ``pole_data`` lists (place, order): ``"inf"`` or the squarefree polynomial
    whose roots are the finite places with that pole order.
    """

    representative: RationalFunction
    trivial: bool
    pole_data: list = field(default_factory=list)
    witness: RationalFunction | None = None


def wp(g: RationalFunction) -> RationalFunction:
    """g^p - g."""
    return frobenius_scalar(g) - g


def _split(f: RationalFunction):
    gf = f.config.gf
    num, den = to_dense(f.num), to_dense(f.den)
    q, r = u_divmod(num, den, gf)
    return q, r, den


def _finite_step(r, den, gf):
    """A correction h with a p-divisible pole order lowered by f - wp(h), or None."""
    p = gf.p
    parts = squarefree_decomposition(den, gf)
    for j in sorted(parts, reverse=True):
        if j % p:
            continue
        S = parts[j]
        Sj = u_pow(S, j, gf)
        rest = u_divmod(den, Sj, gf)[0]
        # partial fraction piece over S^j: r / den = A / S^j + B / rest
        _, s, _ = u_ext_gcd(rest, Sj, gf)
        A = u_divmod(u_mul(r, s, gf), Sj, gf)[1]
        c0 = u_divmod(A, S, gf)[1]
        if not c0:
            continue
        # p-th root of c0 in F_q[t]/(S): iterate Frobenius until it cycles back
        orbit = [c0]
        while True:
            nxt = u_powmod(orbit[-1], p, S, gf)
            if nxt == c0:
                break
            orbit.append(nxt)
        return orbit[-1], S, j // p
    return None


def as_reduce(f: RationalFunction) -> ASReducedClass:
    config = f.config
    if config.nvars != 1:
        raise ConfigError(f"as_reduce needs a one-variable field, got {config}")
    gf, p = config.gf, config.p
    t = RationalFunction.variable(config, 0)
    witness = RationalFunction.zero(config)
    current = f
    while True:
        q, r, den = _split(current)
        if len(q) > 1 and (len(q) - 1) % p == 0:
            h = t ** ((len(q) - 1) // p) * gf.root(q[-1])
        else:
            step = _finite_step(r, den, gf)
            if step is None:
                break
            c, S, k = step
            h = RationalFunction(from_dense(c, config), from_dense(S, config) ** k)
        current = current - wp(h)
        witness = witness + h
    # constants: c is in the image iff its absolute trace vanishes
    q, r, den = _split(current)
    c = q[0] if q else 0
    if c:
        tr = gf.trace(c)
        delta = next(a for a in range(gf.q) if gf.trace(a) == 1)
        target = gf.sub(c, gf.mul(gf.element(tr), delta)) if tr else c
        a = next(a for a in range(gf.q) if gf.sub(gf.frob(a), a) == target)
        if a:
            h = RationalFunction.constant(config, a)
            current = current - wp(h)
            witness = witness + h
    poles = []
    q, r, den = _split(current)
    if len(q) > 1:
        poles.append(("inf", len(q) - 1))
    for j, S in sorted(squarefree_decomposition(den, gf).items()):
        poles.append((from_dense(S, config), j))
    return ASReducedClass(current, current.is_zero(), poles, witness)
