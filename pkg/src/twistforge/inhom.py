"""Quantized inhomogeneous Lie algebras built from an associative ring L.

The ring ``R = K E + L + L*`` has basis ``E, H_1..H_v, X^1..X^v`` (in that
order) with

    H_mu H_nu = B^s_{mu nu} H_s,   X^nu H_mu = B^nu_{mu s} X^s,
    X X = 0,   H X = 0,            E the unit.

Generators of ``U(L |> L*)`` are lifted into the truncated ``T(R)`` and every
Hopf identity of the twisted algebra is checked there exactly, "to degree N".
Pure series identities are checked to series degree D.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .bialgebra import (
    GradedElement,
    QTStructure,
    apply_coproduct,
    apply_counit,
    box_degrees,
    graded_invert,
    graded_tensor,
    lift_primitive,
    swap_legs,
)
from .rational import ONE, ZERO, to_q
from .report import Report, diff_summary
from .series import (
    LieRingSpec,
    MatrixSeries,
    TruncatedPoly,
    apply_univariate,
    bch,
    embed_variables,
    poly_compose,
    series_inverse,
)
from .tensor_ring import (
    RingError,
    RingSpec,
    TensorElement,
    embed,
    idempotent,
    invert,
    mul,
    permute,
    tensor,
    validate_ring,
)
from .twist import (
    GradedTwist,
    fusion_twist,
    rmatrix,
    verify_membership,
    verify_rrp1,
    verify_rrp2,
    verify_te,
    verify_triangularity,
    ybe_check,
)


def inhom_ring(lie: LieRingSpec) -> RingSpec:
    v = lie.dim
    E = 0

    def h(i):
        return 1 + i

    def x(i):
        return 1 + v + i

    entries = {}

    def add(r, s, a, c):
        entries[(r, s, a)] = entries.get((r, s, a), ZERO) + c

    for i in range(2 * v + 1):
        add(E, i, i, ONE)
        if i != E:
            add(i, E, i, ONE)
    for (a, b, s), c in lie.table.items():
        # H_a H_b = c H_s
        add(h(a), h(b), h(s), c)
        # X^s H_a = B^s_{a b} X^b
        add(x(s), h(a), x(b), c)
    product = tuple((r, s, a, c) for (r, s, a), c in sorted(entries.items()) if c != 0)
    return RingSpec(f"R({lie.name or 'L'})", 2 * v + 1, 0, product)


@dataclass
class InhomModel:
    lie: LieRingSpec
    ring: RingSpec
    phi11: TensorElement
    rtilde: TensorElement
    D: int
    N: int
    left: MatrixSeries | None = None
    right: MatrixSeries | None = None
    g: MatrixSeries | None = None
    f: MatrixSeries | None = None
    phi: list = field(default_factory=list)
    psi: list = field(default_factory=list)

    @property
    def v(self):
        return self.lie.dim

    def H(self, mu) -> TensorElement:
        return TensorElement.basis(self.ring, (1 + mu,))

    def X(self, nu) -> TensorElement:
        return TensorElement.basis(self.ring, (1 + self.v + nu,))

    @property
    def E(self) -> TensorElement:
        return TensorElement.basis(self.ring, (0,))

    def xt_vars(self, cap=None):
        return TruncatedPoly.variables(self.v, self.D if cap is None else cap)

    def psi_at(self, cap):
        """``psi`` to series degree ``cap`` (recomputed when the model's D is too small)."""
        if cap <= self.D:
            return [p.truncate(cap) for p in self.psi]
        return series_inverse(canonical_cocycle(self.lie, cap))

    def labels(self):
        return {"N": self.N, "D": self.D}


def canonical_cocycle(lie: LieRingSpec, cap: int):
    """``phi(X) = ((e^{-L(X)} - 1) / (-L(X))) X``."""
    v = lie.dim
    if v == 0:
        return []
    xs = TruncatedPoly.variables(v, cap)
    return apply_univariate("one_minus_exp_neg_over_z", lie.left_matrix(xs)) @ xs


def commutator_function(lie: LieRingSpec, cap: int) -> MatrixSeries:
    """``f = ((L-R)/(e^{L-R}-1)) (e^{L-R} - e^{L})``; entry ``(nu, mu)`` is ``[H_mu, Xt^nu]``."""
    xs = TruncatedPoly.variables(lie.dim, cap)
    lm, rm = lie.left_matrix(xs), lie.right_matrix(xs)
    diff = lm - rm
    return apply_univariate("z_over_expm1", diff) @ (apply_univariate("exp", diff) - apply_univariate("exp", lm))


def build_model(lie: LieRingSpec, D: int = 5, N: int = 4) -> InhomModel:
    check = lie.validate()
    if not check.passed:
        raise RingError(f"structure constants of {lie.name!r} are not associative: witness {check.witness}")
    ring = inhom_ring(lie)
    if not validate_ring(ring).passed:
        raise RingError("semidirect ring failed validation")
    v = lie.dim
    e2 = idempotent(ring, 2)
    xh = TensorElement.zero(ring, 2)
    hx = TensorElement.zero(ring, 2)
    for nu in range(v):
        X, H = TensorElement.basis(ring, (1 + v + nu,)), TensorElement.basis(ring, (1 + nu,))
        xh = xh + tensor(X, H)
        hx = hx + tensor(H, X)
    model = InhomModel(lie, ring, e2 - xh, e2 + hx - xh, D, N)
    if v:
        xs = TruncatedPoly.variables(v, D)
        model.left = lie.left_matrix(xs)
        model.right = lie.right_matrix(xs)
        model.g = apply_univariate("exp", model.left)
        model.f = commutator_function(lie, D)
        model.phi = canonical_cocycle(lie, D)
        model.psi = series_inverse(model.phi)
    return model


# --------------------------------------------------------------------------
# evaluation of commuting series inside T(R)^{(x)r}


def evaluate(p: TruncatedPoly, elems, one: GradedElement, cache=None) -> GradedElement:
    """``p(elems)`` for pairwise commuting graded elements; constant term times ``one``."""
    cache = {} if cache is None else cache
    total = one.scale(p.constant)
    for e, c in sorted(p.terms.items()):
        if sum(e) == 0:
            continue
        total = total + _monomial(e, elems, cache).scale(c)
    return total


def _monomial(e, elems, cache):
    if e in cache:
        return cache[e]
    i = max(j for j, k in enumerate(e) if k)
    prev = list(e)
    prev[i] -= 1
    prev = tuple(prev)
    if sum(prev) == 0:
        out = elems[i]
    else:
        out = _monomial(prev, elems, cache) * elems[i]
    cache[e] = out
    return out


def graded_exp(a: GradedElement, sign=1) -> GradedElement:
    """``exp(sign * a)`` componentwise; every component must be nilpotent."""
    comps = {}
    for key in a.domain:
        z = a.component(key).scale(sign)
        n = sum(key)
        total = idempotent(a.ring, n)
        power = total
        for k in range(1, n + 2):
            power = mul(power, z).scale(to_q(1) / k)
            if power.is_zero():
                break
            total = total + power
        else:
            raise ArithmeticError(f"component {key} of the exponent is not nilpotent")
        comps[key] = total
    return GradedElement(a.ring, a.arity, a.domain, comps)


@dataclass
class Lifts:
    cutoff: int
    one: GradedElement
    H: list
    X: list
    Xt: list
    twist: GradedTwist
    domain: tuple

    def generators(self):
        """Named generator lifts in a fixed order."""
        out = [(f"H{m}", h) for m, h in enumerate(self.H)]
        out += [(f"X{n}", x) for n, x in enumerate(self.X)]
        out += [(f"Xt{n}", x) for n, x in enumerate(self.Xt)]
        return out


def lift_generators(model: InhomModel, cutoff: int, psi=None):
    ring = model.ring
    one = GradedElement.one(ring, 1, cutoff)
    H = [lift_primitive(model.H(m), cutoff) for m in range(model.v)]
    X = [lift_primitive(model.X(n), cutoff) for n in range(model.v)]
    psi = model.psi_at(cutoff) if psi is None else psi
    cache = {}
    Xt = [evaluate(p, X, one, cache) for p in psi]
    return one, H, X, Xt


def exp_twist(ring, Xt, H, domain, sign=-1) -> GradedElement:
    """``exp(sign * sum_nu Xt^nu (x) H_nu)`` on a bigraded domain."""
    a = GradedElement.zero(ring, 2, domain=domain)
    for xt, h in zip(Xt, H):
        a = a + graded_tensor(xt, h, domain)
    return graded_exp(a, sign)


def generator_lifts(model: InhomModel, N=None, domain=None, psi=None) -> Lifts:
    """Lifts of ``H_mu, X^nu, Xt^nu = psi^nu(X)`` and the twist ``exp(-Xt (x) H)``."""
    N = model.N if N is None else N
    domain = box_degrees(2, N) if domain is None else tuple(domain)
    cutoff = max(sum(k) for k in domain)
    one, H, X, Xt = lift_generators(model, cutoff, psi)
    phi = exp_twist(model.ring, Xt, H, domain)
    return Lifts(cutoff, one, H, X, Xt, GradedTwist.from_graded(phi), domain)


def twisted_coproduct(twist: GradedElement, h: GradedElement) -> GradedElement:
    """``Phi^{-1} Delta(h) Phi`` on the twist's domain."""
    dh = apply_coproduct(h, 0, twist.domain)
    return graded_invert(twist) * dh * twist


# --------------------------------------------------------------------------
# verification


def verify_exponential_form(model: InhomModel, N=None) -> Report:
    """Fusion/recursion twist from ``Phi^{1,1}`` equals ``exp(-psi(X) (x) H)``."""
    N = model.N if N is None else N
    rep = Report("exp_form", labels={"N": N, "D": model.D})
    fused = fusion_twist(model.phi11, N)
    lifts = generator_lifts(model, N)
    for key in box_degrees(2, N):
        rep.grid.append(key)
        d = fused.component(key) - lifts.twist.component(key)
        if not d.is_zero():
            rep.fail(bidegree=list(key), diff=diff_summary(d))
    rep.children.append(verify_membership(fused, QTStructure.trivial(model.ring)))
    return rep


def _compare(rep, key, lhs, rhs, **info):
    rep.grid.append(key)
    diffs = lhs.differences(rhs)
    if diffs:
        k, d = diffs[0]
        rep.fail(case=key, at=list(k), diff=diff_summary(d), **info)


def verify_hopf_structure(model: InhomModel, D=None, N=None) -> Report:
    D = model.D if D is None else D
    N = model.N if N is None else N
    v, lie = model.v, model.lie
    top = Report("hopf_structure", labels={"N": N, "D": D})
    lifts = generator_lifts(model, N)
    one, H, X, Xt, phi = lifts.one, lifts.H, lifts.X, lifts.Xt, lifts.twist
    dom2 = lifts.domain
    xt_cache: dict = {}

    def at_xt(p):
        return evaluate(p, Xt, one, xt_cache)

    # [H_mu, H_nu] keeps its classical value
    rep = Report("lie_relations", labels={"N": N})
    consts = lie.bracket_constants()
    for mu, nu in iproduct(range(v), repeat=2):
        lhs = H[mu] * H[nu] - H[nu] * H[mu]
        rhs = GradedElement.zero(model.ring, 1, N)
        for (a, b, s), c in consts.items():
            if (a, b) == (mu, nu):
                rhs = rhs + H[s].scale(c)
        _compare(rep, f"[H{mu},H{nu}]", lhs, rhs)
    top.children.append(rep)

    # (i) [H_mu, Xt^nu] = f(Xt)^nu_mu
    rep = Report("commutator_H_Xt", labels={"N": N, "D": D})
    cap = max(D, N)
    f = commutator_function(lie, cap) if v else None
    for mu, nu in iproduct(range(v), repeat=2):
        lhs = H[mu] * Xt[nu] - Xt[nu] * H[mu]
        _compare(rep, f"[H{mu},Xt{nu}]", lhs, at_xt(f[nu, mu]))
    top.children.append(rep)

    # (ii) Dt(H_mu) = H_mu (x) 1 + g(Xt)^nu_mu (x) H_nu
    rep = Report("coproduct_H", labels={"N": N, "D": D})
    g = apply_univariate("exp", lie.left_matrix(model.xt_vars(cap))) if v else None
    dt = {}
    for mu in range(v):
        dt[f"H{mu}"] = twisted_coproduct(phi, H[mu])
        rhs = graded_tensor(H[mu], one, dom2)
        for nu in range(v):
            rhs = rhs + graded_tensor(at_xt(g[nu, mu]), H[nu], dom2)
        _compare(rep, f"H{mu}", dt[f"H{mu}"], rhs)
    top.children.append(rep)

    # (iii) Dt(Xt^nu) = BCH(1 (x) Xt, Xt (x) 1)
    rep = Report("coproduct_Xt", labels={"N": N, "D": D})
    left_vars = [embed_variables(p, 2 * v, 0) for p in TruncatedPoly.variables(v, cap)]
    right_vars = [embed_variables(p, 2 * v, v) for p in TruncatedPoly.variables(v, cap)]
    bch_polys = bch(lie, right_vars, left_vars, cap) if v else []
    legs = [graded_tensor(x, one, dom2) for x in Xt] + [graded_tensor(one, x, dom2) for x in Xt]
    one2 = GradedElement.one(model.ring, 2, domain=dom2)
    leg_cache: dict = {}
    for nu in range(v):
        dt[f"Xt{nu}"] = twisted_coproduct(phi, Xt[nu])
        _compare(rep, f"Xt{nu}", dt[f"Xt{nu}"], evaluate(bch_polys[nu], legs, one2, leg_cache))
    rep.notes.append("order: first BCH argument is the right leg 1 (x) Xt")
    top.children.append(rep)

    # (iv) antipode on generators, both sides
    rep = Report("antipode", labels={"N": N, "D": D})
    minus_xt = [x.scale(-1) for x in Xt]
    neg_cache: dict = {}
    g_neg = apply_univariate("exp", -lie.left_matrix(model.xt_vars(cap))) if v else None
    zero1 = GradedElement.zero(model.ring, 1, N)
    s_h = []
    for mu in range(v):
        s = zero1
        for nu in range(v):
            s = s - at_xt(g_neg[nu, mu]) * H[nu]
        s_h.append(s)
    for mu in range(v):
        # m (S (x) id): S(H_mu) + S(g^nu_mu(Xt)) H_nu, with S(Xt) = -Xt
        left = s_h[mu]
        for nu in range(v):
            left = left + evaluate(g[nu, mu], minus_xt, one, neg_cache) * H[nu]
        _compare(rep, f"S*id H{mu}", left, zero1)
        # m (id (x) S): H_mu + g^nu_mu(Xt) S(H_nu)
        right = H[mu]
        for nu in range(v):
            right = right + at_xt(g[nu, mu]) * s_h[nu]
        _compare(rep, f"id*S H{mu}", right, zero1)
    for nu in range(v):
        p = bch_polys[nu]
        _compare(rep, f"S*id Xt{nu}", evaluate(p, Xt + minus_xt, one), zero1)
        _compare(rep, f"id*S Xt{nu}", evaluate(p, minus_xt + Xt, one), zero1)
    top.children.append(rep)

    # (v) coassociativity of Dt, (vi) counit
    rep_c = Report("coassociativity", labels={"N": N})
    rep_e = Report("counit", labels={"N": N})
    for name, d in sorted(dt.items()):
        for m, n, k in [t for t in iproduct(range(N + 1), repeat=3) if sum(t) <= N]:
            rep_c.grid.append((name, m, n, k))
            b = phi.component((m, n))
            pb = embed(b, 0, k)
            left = mul(mul(invert(pb), d.component((m + n, k))), pb)
            pe = embed(phi.component((n, k)), m, 0)
            right = mul(mul(invert(pe), d.component((m, n + k))), pe)
            if left != right:
                rep_c.fail(generator=name, triple=[m, n, k], diff=diff_summary(left - right))
        h = dict(lifts.generators())[name]
        _compare(rep_e, f"eps*id {name}", apply_counit(d, 0), h)
        _compare(rep_e, f"id*eps {name}", apply_counit(d, 1), h)
    top.children.extend([rep_c, rep_e])

    # series-level identities
    top.children.append(verify_series_identities(model, D))
    return top


def verify_series_identities(model: InhomModel, D=None) -> Report:
    """``g(bch(u,w)) = g(u) g(w)``, boundary conditions of ``f``, abelian reduction."""
    D = model.D if D is None else D
    lie, v = model.lie, model.v
    rep = Report("series_identities", labels={"D": D})
    if v == 0:
        return rep
    u = [embed_variables(p, 2 * v, 0) for p in TruncatedPoly.variables(v, D)]
    w = [embed_variables(p, 2 * v, v) for p in TruncatedPoly.variables(v, D)]
    g_bch = apply_univariate("exp", lie.left_matrix(bch(lie, u, w, D)))
    g_prod = apply_univariate("exp", lie.left_matrix(u)) @ apply_univariate("exp", lie.left_matrix(w))
    rep.grid.append("g(bch(u,w)) = g(u)g(w)")
    if g_bch != g_prod:
        rep.fail(case="g(bch(u,w)) = g(u)g(w)")
    f = model.f if D == model.D else commutator_function(lie, D)
    rep.grid.append("f(0) = 0")
    if any(p.constant != 0 for row in f.entries for p in row):
        rep.fail(case="f(0) = 0")
    for mu, nu, s in iproduct(range(v), repeat=3):
        rep.grid.append(f"d_{s} f^{mu}_{nu}(0)")
        got = f[mu, nu].linear_coefficients()[s]
        if got != -lie.b(mu, nu, s):
            rep.fail(case=f"d_{s} f^{mu}_{nu}(0)", got=str(got), expected=str(-lie.b(mu, nu, s)))
    xs = TruncatedPoly.variables(v, D)
    g = apply_univariate("exp", lie.left_matrix(xs))
    rep.grid.append("g(0) = I")
    if g.constant_matrix() != MatrixSeries.identity(v, v, D).constant_matrix():
        rep.fail(case="g(0) = I")
    if lie.is_commutative:
        rep.grid.append("abelian: L = R")
        if lie.left_matrix(xs) != lie.right_matrix(xs):
            rep.fail(case="abelian: L = R")
        rep.grid.append("abelian: f = 1 - e^L")
        if f != MatrixSeries.identity(v, v, D) - g:
            rep.fail(case="abelian: f = 1 - e^L")
    return rep


def cocycle_law(lie: LieRingSpec, phi, cap: int, order="wu") -> Report:
    """``phi(bch(w,u)) = phi(u) + e^{-L(u)} phi(w)``; ``u`` left leg, ``w`` right leg.

    ``order="uw"`` tests ``phi(bch(u,w))`` instead.
    """
    v = lie.dim
    rep = Report("cocycle_law", labels={"D": cap, "order": order})
    if v == 0:
        return rep
    u = [embed_variables(p, 2 * v, 0) for p in TruncatedPoly.variables(v, cap)]
    w = [embed_variables(p, 2 * v, v) for p in TruncatedPoly.variables(v, cap)]
    composed = bch(lie, w, u, cap) if order == "wu" else bch(lie, u, w, cap)
    lhs = [poly_compose(p.truncate(cap), composed) for p in phi]
    phi_u = [poly_compose(p.truncate(cap), u) for p in phi]
    phi_w = [poly_compose(p.truncate(cap), w) for p in phi]
    act = apply_univariate("exp", -lie.left_matrix(u))
    rhs = [a + b for a, b in zip(phi_u, act @ phi_w)]
    for nu in range(v):
        rep.grid.append(nu)
        d = lhs[nu] - rhs[nu]
        if not d.is_zero():
            rep.fail(component=nu, diff=diff_summary(d))
    return rep


def verify_group_cocycle(model: InhomModel, D=None, phi=None) -> Report:
    D = model.D if D is None else D
    lie, v = model.lie, model.v
    phi = canonical_cocycle(lie, D) if phi is None else phi
    top = Report("group_cocycle", labels={"D": D})
    law = cocycle_law(lie, phi, D, "wu")
    if law.passed:
        top.notes.append("argument order phi(bch(w,u)), u = left leg, w = right leg")
    else:
        other = cocycle_law(lie, phi, D, "uw")
        top.notes.append("only the opposite order phi(bch(u,w)) passes" if other.passed
                         else "neither argument order passes")
    top.children.append(law)
    inv = Report("psi_phi_identity", labels={"D": D})
    if v:
        psi = series_inverse(phi, D)
        xs = TruncatedPoly.variables(v, D)
        for name, a, b in (("psi o phi", psi, phi), ("phi o psi", phi, psi)):
            comp = [poly_compose(p, b) for p in a]
            for nu in range(v):
                inv.grid.append(f"{name}[{nu}]")
                if comp[nu] != xs[nu]:
                    inv.fail(case=f"{name}[{nu}]", diff=diff_summary(comp[nu] - xs[nu]))
        lin = Report("linear_order", labels={"D": D})
        for mu, nu in iproduct(range(v), repeat=2):
            lin.grid.append((mu, nu))
            if phi[mu].linear_coefficients()[nu] != (ONE if mu == nu else ZERO):
                lin.fail(entry=[mu, nu])
        top.children.append(lin)
    top.children.append(inv)
    return top


def verify_quasitriangularity(model: InhomModel, N=None) -> Report:
    """``R Dt(h) R^{-1} = tau Dt(h)`` on bidegrees ``(m, n)`` with ``m, n <= N-1``."""
    N = model.N if N is None else N
    top = Report("quasitriangularity", labels={"N": N, "max_leg": N - 1})
    domain = box_degrees(2, 2 * (N - 1), max_leg=N - 1)
    lifts = generator_lifts(model, domain=domain)
    phi = lifts.twist
    r_twist = rmatrix(phi)
    r_exp = exp_twist(model.ring, lifts.H, lifts.Xt, domain, sign=1) * phi

    rep = Report("rmatrix_forms", labels={"max_leg": N - 1})
    _compare(rep, "Phi21^-1 Phi = exp(H (x) Xt) exp(-Xt (x) H)", r_twist, r_exp)
    rep.grid.append("R^{1,1} = rtilde")
    if r_twist.component((1, 1)) != model.rtilde:
        rep.fail(case="R^{1,1} = rtilde")
    top.children.append(rep)

    rep = Report("rtilde", labels={})
    rep.grid.append("ybe")
    if not ybe_check(model.rtilde):
        rep.fail(case="ybe")
    rep.grid.append("rtilde21 rtilde = E (x) E")
    if mul(permute(model.rtilde, (1, 0)), model.rtilde) != idempotent(model.ring, 2):
        rep.fail(case="rtilde21 rtilde = E (x) E")
    top.children.append(rep)

    top.children.append(verify_triangularity(r_twist))

    rep = Report("intertwining", labels={"max_leg": N - 1})
    r_inv = graded_invert(r_twist)
    for name, h in lifts.generators():
        dt = twisted_coproduct(phi, h)
        _compare(rep, name, r_twist * dt * r_inv, swap_legs(dt))
    top.children.append(rep)
    return top


def verify_cocycle_twist(lie: LieRingSpec, phi_in, D: int, N: int) -> Report:
    """Twist ``exp(-psi(X) (x) H)`` from a group 1-cocycle ``phi_in`` (``psi`` its inverse)."""
    top = Report("cocycle_twist", labels={"N": N, "D": D})
    law = cocycle_law(lie, phi_in, D)
    law.check = "precondition_cocycle_law"
    top.children.append(law)
    if not law.passed:
        top.notes.append("phi_in is not a group 1-cocycle; twist not built")
        return top
    if D < N:
        raise ValueError("series degree D must be at least the truncation N")
    model = build_model(lie, D, N)
    psi = series_inverse(phi_in, D) if lie.dim else []
    lifts = generator_lifts(model, N, psi=psi)
    top.children.append(verify_te(lifts.twist))
    top.children.append(verify_rrp1(lifts.twist))
    top.children.append(verify_rrp2(lifts.twist))
    return top
