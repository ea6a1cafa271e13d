"""The truncated tensor bialgebra T(R) and its tensor powers.

An element of ``T(R)^{(x)r}`` is a family of tensors indexed by degree tuples
``(n_1, .., n_r)``; the component at such a key lives in ``R^{(x)(n_1+..+n_r)}``.
Products are componentwise, since ``R^{(x)n} R^{(x)m} = 0`` for ``m != n``.
The coproduct is deconcatenation: the ``(i, j)`` component of ``Delta(g)`` is
the degree ``i+j`` component of ``g`` read with a split after slot ``i``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct

from .rational import ONE, ZERO, to_q
from .tensor_ring import (
    RingSpec,
    TensorElement,
    block_swap,
    embed,
    idempotent,
    invert,
    mul,
    permute,
    place,
    tensor,
    transposition,
)


def box_degrees(arity: int, cutoff: int, max_leg: int | None = None) -> tuple:
    """All degree tuples with total ``<= cutoff`` (and each leg ``<= max_leg``)."""
    top = cutoff if max_leg is None else min(cutoff, max_leg)
    keys = [k for k in iproduct(range(top + 1), repeat=arity) if sum(k) <= cutoff]
    return tuple(sorted(keys, key=lambda k: (sum(k), k)))


def _key(arity, key):
    if isinstance(key, int):
        key = (key,)
    key = tuple(key)
    if len(key) != arity:
        raise ValueError(f"degree key {key} does not match arity {arity}")
    return key


class GradedElement:
    """Truncated element of ``T(R)^{(x)arity}``.

    ``domain`` lists the degree keys that are tracked; components absent from
    ``comps`` but inside the domain are zero.  ``cutoff`` is the largest total
    degree in the domain.
    """

    __slots__ = ("ring", "arity", "domain", "comps")

    def __init__(self, ring: RingSpec, arity: int, domain, comps=None):
        self.ring = ring
        self.arity = arity
        self.domain = tuple(domain)
        dom = set(self.domain)
        self.comps = {}
        for key, z in (comps or {}).items():
            key = _key(arity, key)
            if key not in dom:
                raise ValueError(f"component {key} lies outside the domain")
            if z.degree != sum(key):
                raise ValueError(f"component {key} has degree {z.degree}")
            if not z.is_zero():
                self.comps[key] = z

    @property
    def cutoff(self) -> int:
        return max((sum(k) for k in self.domain), default=0)

    @classmethod
    def build(cls, ring, arity, domain, fn):
        return cls(ring, arity, domain, {k: fn(k) for k in domain})

    @classmethod
    def one(cls, ring, arity=1, cutoff=4, domain=None):
        domain = domain if domain is not None else box_degrees(arity, cutoff)
        return cls.build(ring, arity, domain, lambda k: idempotent(ring, sum(k)))

    @classmethod
    def zero(cls, ring, arity=1, cutoff=4, domain=None):
        domain = domain if domain is not None else box_degrees(arity, cutoff)
        return cls(ring, arity, domain, {})

    def component(self, key) -> TensorElement:
        key = _key(self.arity, key)
        z = self.comps.get(key)
        if z is not None:
            return z
        if key not in self.domain:
            raise KeyError(f"degree {key} is beyond the truncation")
        return TensorElement.zero(self.ring, sum(key))

    __getitem__ = component

    def _binary(self, other, op):
        if not isinstance(other, GradedElement) or other.arity != self.arity:
            raise ValueError("graded elements of different arity")
        dom = [k for k in self.domain if k in set(other.domain)]
        return GradedElement(self.ring, self.arity, dom, {k: op(self.component(k), other.component(k)) for k in dom})

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return GradedElement(self.ring, self.arity, self.domain, {k: -z for k, z in self.comps.items()})

    def scale(self, c):
        c = to_q(c)
        return GradedElement(self.ring, self.arity, self.domain, {k: z.scale(c) for k, z in self.comps.items()})

    def __mul__(self, other):
        if isinstance(other, GradedElement):
            if other.arity != self.arity:
                raise ValueError("graded elements of different arity")
            other_dom = set(other.domain)
            dom = [k for k in self.domain if k in other_dom]
            comps = {k: mul(self.comps[k], other.comps[k]) for k in dom
                     if k in self.comps and k in other.comps}
            return GradedElement(self.ring, self.arity, dom, comps)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def restrict(self, domain):
        domain = [k for k in domain if k in set(self.domain)]
        return GradedElement(self.ring, self.arity, domain,
                             {k: z for k, z in self.comps.items() if k in set(domain)})

    def map(self, fn):
        """Apply ``fn(key, tensor)`` to every tracked component (zeros included)."""
        return GradedElement(self.ring, self.arity, self.domain,
                             {k: fn(k, self.component(k)) for k in self.domain})

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return (self.arity == other.arity and set(self.domain) == set(other.domain)
                and self.comps == other.comps)

    __hash__ = None

    def differences(self, other):
        """Keys where the two elements disagree, with the difference tensor."""
        out = []
        for k in self.domain:
            if k in set(other.domain):
                d = self.component(k) - other.component(k)
                if not d.is_zero():
                    out.append((k, d))
        return out

    def __repr__(self):
        return f"GradedElement(arity={self.arity}, cutoff={self.cutoff}, nonzero={sorted(self.comps)})"

    def to_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "components": {",".join(map(str, k)): self.comps[k].to_list() for k in sorted(self.comps)},
        }

    @classmethod
    def from_dict(cls, ring, data, arity=None):
        comps_raw = data.get("components", {})
        keys = [tuple(int(p) for p in k.split(",")) for k in comps_raw]
        if arity is None:
            arity = len(keys[0]) if keys else 1
        cutoff = int(data["cutoff"])
        comps = {}
        for raw, key in zip(comps_raw.values(), keys):
            comps[key] = TensorElement.from_list(ring, sum(key), raw)
        return cls(ring, arity, box_degrees(arity, cutoff), comps)


@dataclass(frozen=True)
class SplitTensor:
    """A tensor of ``R^{(x)n}`` read as an element of ``R^{(x)i} (x) R^{(x)j}``."""

    tensor: TensorElement
    split: int

    @property
    def shape(self):
        return self.split, self.tensor.degree - self.split

    def legs(self):
        """Decompose as ``sum left_basis (x) right`` grouped by the left multi-index."""
        ring = self.tensor.ring
        groups: dict = {}
        for key, c in self.tensor.terms.items():
            groups.setdefault(key[: self.split], {})[key[self.split:]] = c
        return [(TensorElement.basis(ring, lk) if lk else TensorElement(ring, 0, {(): ONE}),
                 TensorElement(ring, self.tensor.degree - self.split, rest))
                for lk, rest in sorted(groups.items())]


def coproduct_component(z: TensorElement, i: int, j: int) -> SplitTensor:
    if i < 0 or j < 0 or i + j != z.degree:
        raise ValueError(f"split ({i}, {j}) does not match degree {z.degree}")
    return SplitTensor(z, i)


def counit(g: GradedElement):
    """The degree-0 component of an element of T(R), as a rational."""
    if g.arity != 1:
        raise ValueError("counit takes an element of T(R)")
    z = g.comps.get((0,))
    return z.terms.get((), ZERO) if z is not None else ZERO


def lift_primitive(x: TensorElement, cutoff: int) -> GradedElement:
    """Image of a primitive generator with fundamental image ``x``:
    degree ``n`` component ``sum_pos e^(pos-1) (x) x (x) e^(n-pos)``."""
    if x.degree != 1:
        raise ValueError("a primitive generator has a degree-1 fundamental image")
    comps = {}
    for n in range(1, cutoff + 1):
        total = TensorElement.zero(x.ring, n)
        for pos in range(n):
            total = total + embed(x, pos, n - pos - 1)
        comps[(n,)] = total
    return GradedElement(x.ring, 1, box_degrees(1, cutoff), comps)


def graded_tensor(a: GradedElement, b: GradedElement, domain=None) -> GradedElement:
    """``a (x) b`` with keys concatenated; restricted to ``domain`` if given."""
    arity = a.arity + b.arity
    if domain is None:
        domain = box_degrees(arity, a.cutoff + b.cutoff)
    comps = {}
    for key in domain:
        ka, kb = key[: a.arity], key[a.arity:]
        if ka in a.comps and kb in b.comps:
            comps[key] = tensor(a.comps[ka], b.comps[kb])
    return GradedElement(a.ring, arity, domain, comps)


def apply_coproduct(y: GradedElement, leg: int, domain=None) -> GradedElement:
    """Apply the untwisted coproduct to leg ``leg``: arity grows by one.

    The new component at ``(.., a, b, ..)`` is the old component at
    ``(.., a+b, ..)``; tensors are unchanged (deconcatenation).
    """
    arity = y.arity + 1
    if domain is None:
        domain = box_degrees(arity, y.cutoff)
    old = set(y.domain)
    comps = {}
    dom = []
    for key in domain:
        src = key[:leg] + (key[leg] + key[leg + 1],) + key[leg + 2:]
        if src in old:
            dom.append(key)
            if src in y.comps:
                comps[key] = y.comps[src]
    return GradedElement(y.ring, arity, dom, comps)


def apply_counit(y: GradedElement, leg: int) -> GradedElement:
    """``(.. (x) eps (x) ..)``: keep the components with leg degree zero."""
    comps, dom = {}, []
    for key in y.domain:
        if key[leg] == 0:
            new = key[:leg] + key[leg + 1:]
            dom.append(new)
            if key in y.comps:
                comps[new] = y.comps[key]
    return GradedElement(y.ring, y.arity - 1, dom, comps)


def swap_legs(y: GradedElement) -> GradedElement:
    """``tau`` on ``T(R) (x) T(R)``: component ``(m, n)`` goes to ``(n, m)``."""
    if y.arity != 2:
        raise ValueError("swap_legs needs a bigraded element")
    dom = [(n, m) for m, n in y.domain]
    comps = {(n, m): block_swap(z, m) for (m, n), z in y.comps.items()}
    return GradedElement(y.ring, 2, dom, comps)


def graded_invert(y: GradedElement) -> GradedElement:
    return GradedElement(y.ring, y.arity, y.domain, {k: invert(y.component(k)) for k in y.domain})


def graded_embed(y: GradedElement, legs, arity: int, domain) -> GradedElement:
    """Place the legs of ``y`` at positions ``legs`` of ``T(R)^{(x)arity}``; unit elsewhere.

    For ``legs = (0, 2)`` and ``arity = 3`` this is ``Y_13``.
    """
    legs = tuple(legs)
    comps, dom = {}, []
    own = set(y.domain)
    for key in domain:
        src = tuple(key[l] for l in legs)
        if src not in own:
            continue
        dom.append(key)
        z = y.comps.get(src)
        if z is None:
            continue
        offsets = [sum(key[:i]) for i in range(arity)]
        slots = [offsets[l] + s for l in legs for s in range(key[l])]
        comps[key] = place(z, slots, sum(key))
    return GradedElement(y.ring, arity, dom, comps)


@dataclass(frozen=True)
class QTStructure:
    """An invertible ``R in R^{(x)2}`` used to define the subalgebra S."""

    ring: RingSpec
    rmat: TensorElement
    rmat_inv: TensorElement = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.rmat.degree != 2:
            raise ValueError("the R-matrix must lie in R^(x)2")
        object.__setattr__(self, "rmat_inv", invert(self.rmat))

    @classmethod
    def trivial(cls, ring):
        return cls(ring, idempotent(ring, 2))


def membership_S(z: TensorElement, qt: QTStructure, i: int) -> bool:
    """Does ``R_{i,i+1} z R_{i,i+1}^{-1} = tau_{i,i+1} z`` hold (1-based pair index)?"""
    n = z.degree
    if not 1 <= i <= n - 1:
        raise ValueError(f"pair index {i} outside 1..{n - 1}")
    r = embed(qt.rmat, i - 1, n - i - 1)
    return mul(r, z) == mul(permute(z, transposition(n, i - 1)), r)


def dump_graded(g: GradedElement) -> str:
    return json.dumps(g.to_dict(), sort_keys=True)

