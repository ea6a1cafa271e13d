"""Twisting cocycles in T(R).

A :class:`GradedTwist` stores the bigraded images ``Phi^{m,k}`` of a twist
with ``m + k`` bounded.  ``build_from_seeds`` fills the whole family from the
``Phi^{1,k}`` by the recursion

    Phi^{m+1,k} = Phi^{m,1+k} . (e^m (x) Phi^{1,k}) . (Phi^{m,1} (x) e^k)^{-1}

and ``verify_te`` checks the graded twisting equation on the full grid.
"""
from __future__ import annotations

from itertools import product as iproduct

from .bialgebra import GradedElement, QTStructure, box_degrees, membership_S
from .report import Report, diff_summary
from .tensor_ring import (
    NotInvertibleError,
    TensorElement,
    UnsupportedError,
    block_swap,
    embed,
    idempotent,
    invert,
    mul,
    permute,
    place,
)


class SeedError(ValueError):
    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class GradedTwist(GradedElement):
    """Family ``Phi^{m,k}`` on a bigraded domain, normalized on the axes."""

    __slots__ = ()

    def __init__(self, ring, domain, comps, check_normalization=True):
        super().__init__(ring, 2, domain, comps)
        if check_normalization:
            for m, k in self.domain:
                if m == 0 or k == 0:
                    if self.component((m, k)) != idempotent(ring, m + k):
                        raise ValueError(f"Phi^{{{m},{k}}} violates the normalization")

    @classmethod
    def from_graded(cls, g: GradedElement, check_normalization=True):
        return cls(g.ring, g.domain, g.comps, check_normalization)

    def phi(self, m, k) -> TensorElement:
        return self.component((m, k))

    @property
    def cutoff(self):
        return max(m + k for m, k in self.domain)

    def check_invertible(self):
        bad = []
        for key in self.domain:
            try:
                invert(self.component(key))
            except (NotInvertibleError, UnsupportedError):
                bad.append(key)
        return bad

    def with_component(self, key, z):
        comps = dict(self.comps)
        comps[tuple(key)] = z
        return GradedTwist(self.ring, self.domain, comps, check_normalization=False)


def trivial_twist(ring, cutoff):
    return GradedTwist(ring, box_degrees(2, cutoff),
                       {k: idempotent(ring, sum(k)) for k in box_degrees(2, cutoff)})


def _normalize_seeds(seeds, cutoff):
    if isinstance(seeds, dict):
        seeds = {int(k): v for k, v in seeds.items()}
    else:
        seeds = {k + 1: v for k, v in enumerate(seeds)}
    missing = [k for k in range(1, cutoff) if k not in seeds]
    if missing:
        raise SeedError(f"missing seeds Phi^{{1,k}} for k in {missing}", k=missing[0])
    for k in range(1, cutoff):
        if seeds[k].degree != k + 1:
            raise SeedError(f"seed Phi^{{1,{k}}} must lie in R^(x){k + 1}", k=k)
    return seeds


def build_from_seeds(seeds, cutoff: int) -> GradedTwist:
    """The unique solution of the graded twisting equation with the given ``Phi^{1,k}``.

    ``seeds`` maps ``k -> Phi^{1,k}`` for ``k = 1 .. cutoff-1`` (a list is read
    as ``[Phi^{1,1}, Phi^{1,2}, ..]``).
    """
    seeds = _normalize_seeds(seeds, cutoff)
    ring = seeds[1].ring
    inv_col = {}
    for k in range(1, cutoff):
        try:
            inv = invert(seeds[k])
        except (NotInvertibleError, UnsupportedError) as exc:
            raise SeedError(f"seed Phi^{{1,{k}}} is not invertible: {exc}", k=k) from exc
        if k == 1:
            inv_col[1] = inv
    phi = {}
    for key in box_degrees(2, cutoff):
        m, k = key
        if m == 0 or k == 0:
            phi[key] = idempotent(ring, m + k)
    for total in range(2, cutoff + 1):
        for m in range(1, total):
            k = total - m
            if m == 1:
                phi[(1, k)] = seeds[k]
                continue
            prev = m - 1
            z = mul(phi[(prev, 1 + k)], embed(phi[(1, k)], prev, 0))
            z = mul(z, embed(inv_col[prev], 0, k))
            phi[(m, k)] = z
        # Phi^{total-1, 1} is now known; its inverse feeds the next layer.
        if total - 1 >= 2:
            inv_col[total - 1] = invert(phi[(total - 1, 1)])
    return GradedTwist(ring, box_degrees(2, cutoff), phi)


def te_grid(cutoff):
    return [t for t in iproduct(range(cutoff + 1), repeat=3) if sum(t) <= cutoff]


def verify_te(t: GradedTwist, cutoff=None) -> Report:
    """``Phi^{m+n,k} Phi_b^{m,n} = Phi^{m,n+k} Phi_e^{n,k}`` for all ``m+n+k <= N``."""
    cutoff = t.cutoff if cutoff is None else cutoff
    rep = Report("twisting_equation", labels={"N": cutoff})
    for m, n, k in te_grid(cutoff):
        rep.grid.append((m, n, k))
        lhs = mul(t.phi(m + n, k), embed(t.phi(m, n), 0, k))
        rhs = mul(t.phi(m, n + k), embed(t.phi(n, k), m, 0))
        if lhs != rhs:
            rep.fail(triple=[m, n, k], diff=diff_summary(lhs - rhs))
    return rep


def fusion_seeds(phi11: TensorElement, cutoff: int) -> dict:
    """``Phi^{1,k} = Phi_12 Phi_13 .. Phi_1(k+1)`` for ``k = 1 .. cutoff-1``."""
    if phi11.degree != 2:
        raise SeedError("Phi^{1,1} must lie in R^(x)2", k=1)
    try:
        invert(phi11)
    except (NotInvertibleError, UnsupportedError) as exc:
        raise SeedError(f"Phi^{{1,1}} is not invertible: {exc}", k=1) from exc
    seeds = {}
    for k in range(1, cutoff):
        z = place(phi11, (0, 1), k + 1)
        for i in range(2, k + 1):
            z = mul(z, place(phi11, (0, i), k + 1))
        seeds[k] = z
    return seeds


def fusion_twist(phi11, cutoff):
    return build_from_seeds(fusion_seeds(phi11, cutoff), cutoff)


def _legs3(z):
    return {name: place(z, slots, 3) for name, slots in
            (("12", (0, 1)), ("13", (0, 2)), ("23", (1, 2)), ("21", (1, 0)))}


def check_split2(phi11: TensorElement, qt: QTStructure) -> bool:
    """``R_23 Phi_12 Phi_13 = Phi_13 Phi_12 R_23`` in ``R^(x)3``."""
    p, r = _legs3(phi11), _legs3(qt.rmat)
    return mul(mul(r["23"], p["12"]), p["13"]) == mul(mul(p["13"], p["12"]), r["23"])


def split_rtilde(phi11: TensorElement, qt: QTStructure) -> TensorElement:
    """``Phi_21^{-1} R Phi``."""
    return mul(mul(invert(permute(phi11, (1, 0))), qt.rmat), phi11)


def check_split1(phi11: TensorElement, qt: QTStructure) -> bool:
    """``Rt_12 Phi_13 Phi_23 = Phi_23 Phi_13 Rt_12`` with ``Rt = Phi_21^{-1} R Phi``."""
    p, r = _legs3(phi11), _legs3(split_rtilde(phi11, qt))
    return mul(mul(r["12"], p["13"]), p["23"]) == mul(mul(p["23"], p["13"]), r["12"])


def verify_membership(t: GradedElement, qt: QTStructure) -> Report:
    """Adjacent-pair S-membership strictly inside each leg of every ``Phi^{m,n}``."""
    rep = Report("membership_S", labels={"N": t.cutoff})
    for m, n in t.domain:
        z = t.component((m, n))
        pairs = list(range(1, m)) + list(range(m + 1, m + n))
        for i in pairs:
            rep.grid.append((m, n, i))
            if not membership_S(z, qt, i):
                rep.fail(bidegree=[m, n], pair=i)
    return rep


def rmatrix(t: GradedElement) -> GradedElement:
    """``R^{m,n} = (block-swapped Phi^{n,m})^{-1} Phi^{m,n}``."""
    comps = {}
    for m, n in t.domain:
        swapped = block_swap(t.component((n, m)), n)
        comps[(m, n)] = mul(invert(swapped), t.component((m, n)))
    return GradedElement(t.ring, 2, t.domain, comps)


def verify_triangularity(r: GradedElement) -> Report:
    """``block-swap(R^{n,m}) R^{m,n} = e^{m+n}`` gradewise."""
    rep = Report("triangularity", labels={"N": r.cutoff})
    for m, n in r.domain:
        rep.grid.append((m, n))
        prod = mul(block_swap(r.component((n, m)), n), r.component((m, n)))
        if prod != idempotent(r.ring, m + n):
            rep.fail(bidegree=[m, n], diff=diff_summary(prod - idempotent(r.ring, m + n)))
    return rep


def ybe_check(r: TensorElement) -> bool:
    """``R_12 R_13 R_23 = R_23 R_13 R_12``."""
    legs = _legs3(r)
    return (mul(mul(legs["12"], legs["13"]), legs["23"])
            == mul(mul(legs["23"], legs["13"]), legs["12"]))


def _outer(phi, m, n, k):
    """``Phi^{m,k}`` placed on the first ``m`` and last ``k`` slots of ``R^(x)(m+n+k)``."""
    slots = list(range(m)) + list(range(m + n, m + n + k))
    return place(phi, slots, m + n + k)


def verify_rrp1(t: GradedTwist, cutoff=None) -> Report:
    """``(id (x) Delta)(Phi) = Phi_12 Phi_13`` gradewise."""
    cutoff = t.cutoff if cutoff is None else cutoff
    rep = Report("rrp1", labels={"N": cutoff})
    for m, n, k in te_grid(cutoff):
        rep.grid.append((m, n, k))
        lhs = t.phi(m, n + k)
        rhs = mul(embed(t.phi(m, n), 0, k), _outer(t.phi(m, k), m, n, k))
        if lhs != rhs:
            rep.fail(triple=[m, n, k], diff=diff_summary(lhs - rhs))
    return rep


def verify_rrp2(t: GradedTwist, cutoff=None) -> Report:
    """``(Dt (x) id)(Phi) = Phi_13 Phi_23`` with ``Dt = Phi^{-1} Delta Phi``."""
    cutoff = t.cutoff if cutoff is None else cutoff
    rep = Report("rrp2", labels={"N": cutoff})
    for m, n, k in te_grid(cutoff):
        rep.grid.append((m, n, k))
        b = embed(t.phi(m, n), 0, k)
        lhs = mul(mul(invert(b), t.phi(m + n, k)), b)
        rhs = mul(_outer(t.phi(m, k), m, n, k), embed(t.phi(n, k), m, 0))
        if lhs != rhs:
            rep.fail(triple=[m, n, k], diff=diff_summary(lhs - rhs))
    return rep


def twist_to_dict(t: GradedElement) -> dict:
    return t.to_dict()


def twist_from_dict(ring, data) -> GradedTwist:
    g = GradedElement.from_dict(ring, data, arity=2)
    return GradedTwist.from_graded(g, check_normalization=False)
