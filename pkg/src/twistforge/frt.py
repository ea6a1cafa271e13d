"""The dual side: RTT relations, the action/coaction pair and the bicrossproduct.

Dual generators carry the basis index of the ring ``R`` they are dual to:
``e`` for ``E`` (index 0), ``h^mu`` for ``H_mu`` (``1 + mu``) and ``x_nu`` for
``X^nu`` (``1 + v + nu``).  Elements of the dual algebra are sparse dicts
``{word: coeff}`` with words tuples of generator indices.  After the
specialization ``e = 1`` words simply lose their ``e`` letters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from . import linalg
from .inhom import InhomModel
from .rational import ONE, ZERO, q_str, to_q
from .report import Report
from .series import (
    MatrixSeries,
    TruncatedPoly,
    apply_univariate,
    bch,
    embed_variables,
    poly_compose,
)
from .tensor_ring import TensorElement, mul


# --------------------------------------------------------------------------
# generators and words


def gen_label(v: int, g: int) -> str:
    if g == 0:
        return "e"
    if g <= v:
        return f"h{g - 1}"
    return f"x{g - 1 - v}"


def parse_label(v: int, label: str) -> int:
    if label == "e":
        return 0
    kind, num = label[0], label[1:]
    if kind not in "hx" or not num.isdigit() or int(num) >= v:
        raise ValueError(f"unknown dual generator {label!r}")
    return 1 + int(num) + (v if kind == "x" else 0)


def _rank(v, g):
    """Normal order: e, then x's, then h's."""
    if g == 0:
        return 0
    if g > v:
        return g - v
    return v + g


def is_normal(v, word) -> bool:
    ranks = [_rank(v, g) for g in word]
    return ranks == sorted(ranks)


def word_order(v, words):
    """Columns for elimination: non-normal words first so they become pivots."""
    return sorted(words, key=lambda w: (is_normal(v, w), len(w) * -1, [-_rank(v, g) for g in w]))


def _add(acc: dict, vec: dict, c=ONE):
    for w, x in vec.items():
        y = acc.get(w, ZERO) + c * x
        if y:
            acc[w] = y
        else:
            acc.pop(w, None)
    return acc


def specialize(vec: dict) -> dict:
    """Set ``e = 1``: drop every ``e`` letter."""
    out: dict = {}
    for w, c in vec.items():
        _add(out, {tuple(g for g in w if g != 0): c})
    return out


class Span:
    """Sparse row-reduced span of word vectors with a fixed column order."""

    def __init__(self, v: int, vectors, order=None):
        self.v = v
        vectors = [dict(x) for x in vectors if x]
        words = sorted({w for x in vectors for w in x})
        self.order = word_order(v, words) if order is None else list(order)
        col = {w: i for i, w in enumerate(self.order)}
        mat = [[ZERO] * len(self.order) for _ in vectors]
        for i, x in enumerate(vectors):
            for w, c in x.items():
                mat[i][col[w]] = c
        red, pivots = linalg.rref(mat, len(self.order)) if mat else ([], [])
        self.rows = []
        for i, p in enumerate(pivots):
            self.rows.append((self.order[p], {self.order[j]: c for j, c in enumerate(red[i]) if c != 0}))

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        out = dict(vec)
        for pivot, row in self.rows:
            c = out.get(pivot)
            if c:
                _add(out, row, -c)
        return out

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def vectors(self):
        return [row for _, row in self.rows]


# --------------------------------------------------------------------------
# dual generators


@dataclass
class DualGenerators:
    """Dual basis ``(e, h^mu, x_nu)`` with the coproduct induced by ``R``'s product."""

    v: int
    dim: int
    coproduct: dict = field(default_factory=dict)

    @classmethod
    def from_model(cls, model: InhomModel):
        ring = model.ring
        cop = {g: {} for g in range(ring.dim)}
        # E_g E_r = sum_a mu^a_{g r} E_a  gives  Delta(dual_a) = sum mu^a_{g r} dual_g (x) dual_r
        for g, r, a, c in ring.product:
            _add(cop[a], {(g, r): c})
        return cls(model.v, ring.dim, cop)

    def label(self, g):
        return gen_label(self.v, g)

    def counit(self, g):
        return ONE if g == 0 else ZERO

    def coproduct_word(self, word) -> dict:
        """``Delta`` of a word, as ``{(word1, word2): coeff}``."""
        out = {((), ()): ONE}
        for g in word:
            nxt: dict = {}
            for (a, b), c in out.items():
                for (l, r), d in self.coproduct[g].items():
                    key = (a + (l,), b + (r,))
                    y = nxt.get(key, ZERO) + c * d
                    if y:
                        nxt[key] = y
                    else:
                        nxt.pop(key)
            out = nxt
        return out

    def apply_coproduct(self, vec: dict) -> dict:
        out: dict = {}
        for w, c in vec.items():
            _add(out, self.coproduct_word(w), c)
        return out


def closed_form_coproduct(lie) -> dict:
    """``Delta(h^s) = h^s e + e h^s + B^s_{mn} h^m h^n``, ``Delta(x_s) = x_s e + e x_s + B^n_{ms} x_n h^m``."""
    v = lie.dim

    def h(i):
        return 1 + i

    def x(i):
        return 1 + v + i

    cop = {0: {(0, 0): ONE}}
    for s in range(v):
        cop[h(s)] = {(h(s), 0): ONE, (0, h(s)): ONE}
        cop[x(s)] = {(x(s), 0): ONE, (0, x(s)): ONE}
    for (m, n, s), c in lie.table.items():
        # B^s_{mn} h^m (x) h^n
        _add(cop[h(s)], {(h(m), h(n)): c})
        # B^s_{m n}: x_s (x) h^m appears in Delta(x_n)
        _add(cop[x(n)], {(x(s), h(m)): c})
    return cop


# --------------------------------------------------------------------------
# relations


@dataclass
class RelationSet:
    """Independent quadratic relations in canonical row-reduced form."""

    v: int
    relations: list

    @property
    def span(self) -> Span:
        return Span(self.v, self.relations)

    def labels(self, word):
        return [gen_label(self.v, g) for g in word]

    def to_list(self):
        return [[{"word": self.labels(w), "coeff": q_str(c)} for w, c in sorted(r.items())]
                for r in self.relations]

    @classmethod
    def from_list(cls, v, data):
        rels = []
        for rel in data:
            vec: dict = {}
            for term in rel:
                _add(vec, {tuple(parse_label(v, s) for s in term["word"]): to_q(term["coeff"])})
            rels.append(vec)
        return cls(v, rels)

    def render(self):
        out = []
        for r in self.relations:
            parts = [f"{q_str(c)}*{''.join(self.labels(w)) or '1'}" for w, c in sorted(r.items())]
            out.append(" + ".join(parts) + " = 0")
        return out


def rtt_rows(model: InhomModel) -> list:
    """Coefficient rows ``[R (E_r (x) E_s)]_{ab} - [(E_s (x) E_r) R]_{ab}`` over words ``(r, s)``."""
    ring, rmat = model.ring, model.rtilde
    rows: dict = {}
    for r, s in iproduct(range(ring.dim), repeat=2):
        z = TensorElement.basis(ring, (r, s))
        zt = TensorElement.basis(ring, (s, r))
        diff = mul(rmat, z) - mul(zt, rmat)
        for ab, c in diff.items():
            _add(rows.setdefault(ab, {}), {(r, s): c})
    return [rows[k] for k in sorted(rows) if rows[k]]


def extract_rtt(model: InhomModel) -> RelationSet:
    v = model.v
    words = list(iproduct(range(model.ring.dim), repeat=2))
    span = Span(v, rtt_rows(model), order=word_order(v, words))
    return RelationSet(v, span.vectors())


def _lift_e(vec):
    """Bring a relation to homogeneous degree 2 by padding short words with ``e``."""
    out: dict = {}
    for w, c in vec.items():
        _add(out, {w + (0,) * (2 - len(w)): c})
    return out


def action_tensor(lie, mu, nu) -> dict:
    """``x_mu |> h^nu = B^nu_{mu s} h^s + B^nu_{s a} B^s_{b mu} h^a h^b`` (words sorted)."""
    v = lie.dim
    out: dict = {}
    for s in range(v):
        c = lie.b(nu, mu, s)
        if c:
            _add(out, {(1 + s,): c})
    for s, a, b in iproduct(range(v), repeat=3):
        c = lie.b(nu, s, a) * lie.b(s, b, mu)
        if c:
            _add(out, {tuple(sorted((1 + a, 1 + b))): c})
    return out


def closed_form_relations(lie) -> list:
    """The displayed commutation rules, with ``e`` kept explicit and central."""
    v = lie.dim

    def h(i):
        return 1 + i

    def x(i):
        return 1 + v + i

    rels = []
    for mu, nu in iproduct(range(v), repeat=2):
        if mu < nu:
            r = {(x(mu), x(nu)): ONE, (x(nu), x(mu)): -ONE}
            for s in range(v):
                c = lie.b(s, nu, mu) - lie.b(s, mu, nu)
                if c:
                    _add(r, {(x(s), 0): -c})
            rels.append(r)
            rels.append({(h(mu), h(nu)): ONE, (h(nu), h(mu)): -ONE})
        r = {(x(mu), h(nu)): ONE, (h(nu), x(mu)): -ONE}
        _add(r, _lift_e(action_tensor(lie, mu, nu)), -ONE)
        rels.append(r)
    for g in range(1, 2 * v + 1):
        rels.append({(0, g): ONE, (g, 0): -ONE})
    # words of the action written with sorted h's are equal modulo [h, h] = 0
    return [r for r in rels if r]


def _span_diff(rep, name, vectors, span, labels):
    for vec in vectors:
        rest = span.reduce(vec)
        if rest:
            rep.fail(case=name, relation=_show(vec, labels), residue=_show(rest, labels))


def _show(vec, labels):
    return [["".join(labels(w)) or "1", q_str(c)] for w, c in sorted(vec.items())][:6]


def compare_relations(extracted: RelationSet, model: InhomModel) -> Report:
    rep = Report("compare_relations", labels={"ring": model.lie.name})
    closed = closed_form_relations(model.lie)
    cspan = Span(model.v, closed)
    espan = extracted.span
    rep.grid.append("closed form within extracted")
    _span_diff(rep, "closed form within extracted", closed, espan, extracted.labels)
    rep.grid.append("extracted within closed form")
    _span_diff(rep, "extracted within closed form", extracted.relations, cspan, extracted.labels)
    rep.notes.append(f"rank {espan.rank} extracted, {cspan.rank} closed form")
    return rep


def verify_ideal_closure(extracted: RelationSet, model: InhomModel) -> Report:
    """``Delta(J) in J (x) F + F (x) J`` at word length two."""
    rep = Report("bialgebra_ideal", labels={"ring": model.lie.name})
    dual = DualGenerators.from_model(model)
    span = extracted.span
    for i, rel in enumerate(extracted.relations):
        rep.grid.append(i)
        d = dual.apply_coproduct(rel)
        # reduce the left leg, then the right leg
        by_right: dict = {}
        for (a, b), c in d.items():
            by_right.setdefault(b, {})[a] = c
        stage: dict = {}
        for b, vec in by_right.items():
            for a, c in span.reduce(vec).items():
                stage.setdefault(a, {})[b] = c
        rest = {}
        for a, vec in stage.items():
            for b, c in span.reduce(vec).items():
                rest[(a, b)] = c
        if rest:
            rep.fail(relation=i, residue=[[list(k[0]), list(k[1]), q_str(c)] for k, c in sorted(rest.items())[:4]])
    return rep


def verify_dual_coproduct(model: InhomModel) -> Report:
    """Coproduct tensors from ``R``'s structure constants against the closed form."""
    rep = Report("dual_coproduct", labels={"ring": model.lie.name})
    dual = DualGenerators.from_model(model)
    closed = closed_form_coproduct(model.lie)
    for g in range(dual.dim):
        rep.grid.append(dual.label(g))
        if dual.coproduct[g] != closed[g]:
            rep.fail(generator=dual.label(g))
    return rep


# --------------------------------------------------------------------------
# action, coaction, bicrossproduct


def _is_acting(v, w):
    return all(g > v for g in w)


def _is_coordinate(v, w):
    return all(1 <= g <= v for g in w)


def coaction_beta(model: InhomModel) -> dict:
    """``beta = (pi_x (x) pi_h) o Delta`` on the ``x`` generators, with ``e = 1``.

    ``pi_x`` keeps words in ``x`` and ``e`` only, ``pi_h`` words in ``h`` and ``e``.
    Returns ``{generator: {(x-word, h-word): coeff}}``.
    """
    v = model.v
    dual = DualGenerators.from_model(model)
    out = {0: {((), ()): ONE}}
    for g in range(1 + v, 1 + 2 * v):
        terms: dict = {}
        for (a, b), c in dual.coproduct[g].items():
            wa, wb = tuple(t for t in (a,) if t != 0), tuple(t for t in (b,) if t != 0)
            if _is_acting(v, wa) and _is_coordinate(v, wb):
                key = (wa, wb)
                terms[key] = terms.get(key, ZERO) + c
        out[g] = {k: c for k, c in terms.items() if c}
    return out


def closed_form_beta(lie) -> dict:
    """``beta(x_s) = x_s (x) 1 + B^n_{m s} x_n (x) h^m``."""
    v = lie.dim
    out = {0: {((), ()): ONE}}
    for s in range(v):
        out[1 + v + s] = {((1 + v + s,), ()): ONE}
    for (m, s, n), c in lie.table.items():
        key = ((1 + v + n,), (1 + m,))
        out[1 + v + s][key] = out[1 + v + s].get(key, ZERO) + c
    return out


def verify_coaction(model: InhomModel) -> Report:
    rep = Report("coaction_beta", labels={"ring": model.lie.name})
    beta = coaction_beta(model)
    closed = closed_form_beta(model.lie)
    for g in sorted(beta):
        label = gen_label(model.v, g)
        rep.grid.append(f"beta({label})")
        if beta[g] != closed[g]:
            rep.fail(case=f"beta({label})")
        rep.grid.append(f"counit({label})")
        # (id (x) eps) beta = id: only the empty h-word survives
        kept = {a: c for (a, b), c in beta[g].items() if b == ()}
        if kept != ({(g,): ONE} if g else {(): ONE}):
            rep.fail(case=f"counit({label})")
    return rep


def bicross_commutator(lie, g1, g2) -> dict:
    """``g1 g2 - g2 g1`` from ``(a (x) x)(b (x) y) = a (x_(1) |> b) (x) x_(2) y`` with ``e = 1``."""
    v = lie.dim
    if g1 > v and 1 <= g2 <= v:
        return action_tensor(lie, g1 - 1 - v, g2 - 1)
    if 1 <= g1 <= v and g2 > v:
        return {w: -c for w, c in action_tensor(lie, g2 - 1 - v, g1 - 1).items()}
    if g1 > v and g2 > v:
        # the acting factor is U(L) under x_mu -> -H_mu
        mu, nu = g1 - 1 - v, g2 - 1 - v
        out: dict = {}
        for (a, b, s), c in lie.bracket_constants().items():
            if (a, b) == (mu, nu):
                _add(out, {(1 + v + s,): -c})
        return out
    return {}


def bicross_coproduct(lie, g) -> dict:
    """Coproduct of a generator from the bicrossproduct formula, ``e = 1``."""
    v = lie.dim
    out: dict = {}
    if 1 <= g <= v:
        # Delta(h (x) 1) = (h_(1) (x) 1) (x) (h_(2) (x) 1)
        s = g - 1
        _add(out, {((g,), ()): ONE, ((), (g,)): ONE})
        for (m, n, t), c in lie.table.items():
            if t == s:
                _add(out, {((1 + m,), (1 + n,)): c})
        return out
    if g > v:
        # x primitive in U(L); beta(x) = x^(1) (x) x^(2) feeds (1 (x) x^(1)) (x) (x^(2) (x) 1)
        for (xw, hw), c in closed_form_beta(lie)[g].items():
            _add(out, {(xw, hw): c})
        _add(out, {((), (g,)): ONE})
        return out
    return {((), ()): ONE}


def verify_bicrossproduct(model: InhomModel, extracted: RelationSet | None = None) -> Report:
    lie, v = model.lie, model.v
    extracted = extract_rtt(model) if extracted is None else extracted
    top = Report("bicrossproduct", labels={"ring": lie.name})

    # the action tensor and the closed-form [x, h] coefficient tensor agree
    rep = Report("action_vs_relations")
    closed = closed_form_relations(lie)
    for mu, nu in iproduct(range(v), repeat=2):
        rep.grid.append((mu, nu))
        xh = next(r for r in closed if r.get((1 + v + mu, 1 + nu)) == ONE and r.get((1 + nu, 1 + v + mu)) == -ONE)
        rhs = {w: -c for w, c in specialize(xh).items()
               if w not in ((1 + v + mu, 1 + nu), (1 + nu, 1 + v + mu))}
        if rhs != action_tensor(lie, mu, nu):
            rep.fail(pair=[mu, nu])
    top.children.append(rep)

    # product formula against the extracted relations with e = 1
    rep = Report("product_formula")
    spec_span = Span(v, [specialize(r) for r in extracted.relations])
    formula = []
    gens = range(1, 2 * v + 1)
    for g1, g2 in iproduct(gens, repeat=2):
        rep.grid.append((gen_label(v, g1), gen_label(v, g2)))
        rel = {(g1, g2): ONE}
        _add(rel, {(g2, g1): -ONE})
        _add(rel, bicross_commutator(lie, g1, g2), -ONE)
        formula.append(rel)
        rest = spec_span.reduce(rel)
        if rest:
            rep.fail(pair=[gen_label(v, g1), gen_label(v, g2)], residue=_show(rest, extracted.labels))
    fspan = Span(v, formula)
    rep.grid.append("extracted within formula span")
    for r in spec_span.vectors():
        if not fspan.contains(r):
            rep.fail(case="extracted within formula span", relation=_show(r, extracted.labels))
    top.children.append(rep)

    # coproduct formula against the dual coproduct with e = 1
    rep = Report("coproduct_formula")
    dual = DualGenerators.from_model(model)
    for g in gens:
        rep.grid.append(gen_label(v, g))
        target: dict = {}
        for (a, b), c in dual.coproduct[g].items():
            key = (tuple(t for t in (a,) if t), tuple(t for t in (b,) if t))
            target[key] = target.get(key, ZERO) + c
        target = {k: c for k, c in target.items() if c}
        if bicross_coproduct(lie, g) != target:
            rep.fail(generator=gen_label(v, g))
    top.children.append(rep)
    return top


# --------------------------------------------------------------------------
# eta change of basis


def _hull_power_series(lie, a, coeffs):
    """``sum_k coeffs[k] a^k`` for ``k >= 1`` in the unital hull of ``lie`` (no constant)."""
    cap = a[0].cap
    total = [TruncatedPoly.zero(a[0].nvars, cap) for _ in range(lie.dim)]
    power = a
    for k in range(1, cap + 1):
        if k > 1:
            power = lie.product(power, a)
        c = coeffs[k]
        if c:
            total = [t + p.scale(c) for t, p in zip(total, power)]
    return total


def _log1p_coeffs(n):
    return [ZERO] + [to_q((-1) ** (k + 1)) / k for k in range(1, n + 1)]


def _exp_coeffs(n):
    out, f = [ONE], ONE
    for k in range(1, n + 1):
        f *= k
        out.append(ONE / f)
    return out


def eta_change_of_basis(model: InhomModel, D: int) -> list:
    """``eta = log(1 + h)`` in the unital hull, so that ``sum_n h^n H_n = exp(sum_m eta^m H_m) - E``."""
    lie = model.lie
    if lie.dim == 0:
        return []
    hs = TruncatedPoly.variables(lie.dim, D)
    return _hull_power_series(lie, hs, _log1p_coeffs(D))


def verify_eta(model: InhomModel, D: int) -> Report:
    lie, v = model.lie, model.v
    rep = Report("eta_change_of_basis", labels={"D": D})
    if v == 0:
        return rep
    eta = eta_change_of_basis(model, D)
    hs = TruncatedPoly.variables(v, D)

    rep.grid.append("exp(eta) - E = h")
    if _hull_power_series(lie, eta, _exp_coeffs(D)) != hs:
        rep.fail(case="exp(eta) - E = h")

    rep.grid.append("e^{L(eta)} - I = L(h)")
    g_eta = apply_univariate("exp", lie.left_matrix(eta))
    if g_eta - MatrixSeries.identity(v, v, D) != lie.left_matrix(hs):
        rep.fail(case="e^{L(eta)} - I = L(h)")

    rep.grid.append("linear order")
    for mu in range(v):
        if (eta[mu] - hs[mu]).truncate(1) != TruncatedPoly.zero(v, 1):
            rep.fail(case="linear order", component=mu)

    # coproduct of eta induced by Delta(h), against the opposite X-tilde coproduct
    a = [embed_variables(p, 2 * v, 0) for p in hs]
    b = [embed_variables(p, 2 * v, v) for p in hs]
    delta_h = [x + y for x, y in zip(a, b)]
    delta_h = [d + p for d, p in zip(delta_h, lie.product(a, b))]
    lhs = [poly_compose(p, delta_h) for p in eta]
    eta_a = [poly_compose(p, a) for p in eta]
    eta_b = [poly_compose(p, b) for p in eta]
    rhs = bch(lie, eta_a, eta_b, D)
    rep.grid.append("Delta(eta) = BCH(eta (x) 1, 1 (x) eta)")
    if lhs != rhs:
        rep.fail(case="Delta(eta) = BCH(eta (x) 1, 1 (x) eta)")
    if lie.is_commutative:
        rep.grid.append("abelian: Delta(eta) primitive")
        if lhs != [x + y for x, y in zip(eta_a, eta_b)]:
            rep.fail(case="abelian: Delta(eta) primitive")

    # the x_nu (x) h coefficient of Delta(x_s) is (e^{L(eta)} - I)^nu_s
    rep.grid.append("x-coproduct matrix")
    dual = DualGenerators.from_model(model)
    for s, nu in iproduct(range(v), repeat=2):
        coeff = TruncatedPoly.zero(v, D)
        for (l, r), c in dual.coproduct[1 + v + s].items():
            if l == 1 + v + nu and 1 <= r <= v:
                coeff = coeff + hs[r - 1].scale(c)
        if coeff != (g_eta - MatrixSeries.identity(v, v, D))[nu, s]:
            rep.fail(case="x-coproduct matrix", entry=[nu, s])
    return rep


def verify_frt(model: InhomModel, D: int | None = None) -> Report:
    """Every dual-side check for one model."""
    D = model.D if D is None else D
    top = Report("frt_bicross", labels={"ring": model.lie.name, "D": D})
    extracted = extract_rtt(model)
    top.children.append(compare_relations(extracted, model))
    top.children.append(verify_ideal_closure(extracted, model))
    top.children.append(verify_dual_coproduct(model))
    top.children.append(verify_coaction(model))
    top.children.append(verify_bicrossproduct(model, extracted))
    top.children.append(verify_eta(model, D))
    return top
