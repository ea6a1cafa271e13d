"""Structure-constant rings and exact arithmetic in their tensor powers.

A :class:`RingSpec` fixes a basis ``x^0 .. x^{d-1}`` and sparse structure
constants ``x^r x^s = sum_a c^{rs}_a x^a``.  A :class:`TensorElement` lives in
``R^{(x)n}``; its multi-indices are ordered row-major with slot 1 most
significant, which is the order used by every serialized form.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct

from . import linalg
from .rational import ONE, ZERO, q_str, to_q

# Above this many basis tensors the dense linear-solve inverse is refused.
SOLVE_LIMIT = 243
MAX_NEUMANN_STEPS = 64


class RingError(ValueError):
    """Malformed ring data (bad indices, stored zeros, duplicate entries)."""


class UnsupportedError(ArithmeticError):
    pass


class NotInvertibleError(ArithmeticError):
    def __init__(self, message, rank_defect=None):
        super().__init__(message)
        self.rank_defect = rank_defect


@dataclass(frozen=True)
class RingSpec:
    """Finite-dimensional ring over Q given by structure constants.

    ``product`` is a sorted tuple of ``(rho, sigma, alpha, coeff)`` entries;
    absent triples are zero.
    """

    name: str
    dim: int
    unit: int | None
    product: tuple = ()
    table: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise RingError(f"ring dimension must be a positive integer, got {self.dim!r}")
        if self.unit is not None and not (0 <= self.unit < self.dim):
            raise RingError(f"unit index {self.unit} out of range for dim {self.dim}")
        seen = set()
        entries = []
        for entry in self.product:
            if len(entry) != 4:
                raise RingError(f"product entry {entry!r} must have four fields")
            r, s, a, c = entry
            for idx in (r, s, a):
                if not isinstance(idx, int) or not 0 <= idx < self.dim:
                    raise RingError(f"index {idx!r} out of range in product entry {entry!r}")
            c = to_q(c)
            if c == 0:
                raise RingError(f"zero coefficient stored for {(r, s, a)}")
            if (r, s, a) in seen:
                raise RingError(f"duplicate product entry {(r, s, a)}")
            seen.add((r, s, a))
            entries.append((r, s, a, c))
        entries.sort(key=lambda e: e[:3])
        object.__setattr__(self, "product", tuple(entries))
        rows = [[[] for _ in range(self.dim)] for _ in range(self.dim)]
        for r, s, a, c in entries:
            rows[r][s].append((a, c))
        object.__setattr__(self, "table", tuple(tuple(tuple(cell) for cell in row) for row in rows))

    @classmethod
    def from_dict(cls, data: dict) -> "RingSpec":
        try:
            return cls(
                name=str(data.get("name", "")),
                dim=data["dim"],
                unit=data.get("unit"),
                product=tuple(tuple(e) for e in data.get("product", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, RingError):
                raise
            raise RingError(f"malformed ring spec: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "unit": self.unit,
            "product": [[r, s, a, q_str(c)] for r, s, a, c in self.product],
        }

    @classmethod
    def load(cls, path) -> "RingSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def basis_product(self, r: int, s: int) -> dict:
        return {a: c for a, c in self.table[r][s]}


def _vec_mul_right(ring, vec: dict, s: int) -> dict:
    out: dict = {}
    for r, x in vec.items():
        for a, c in ring.table[r][s]:
            out[a] = out.get(a, ZERO) + x * c
    return {k: v for k, v in out.items() if v != 0}


def _vec_mul_left(ring, r: int, vec: dict) -> dict:
    out: dict = {}
    for s, x in vec.items():
        for a, c in ring.table[r][s]:
            out[a] = out.get(a, ZERO) + x * c
    return {k: v for k, v in out.items() if v != 0}


@dataclass
class ValidationReport:
    passed: bool
    witness: tuple | None = None
    message: str = ""

    def to_dict(self):
        return {"passed": self.passed, "witness": list(self.witness) if self.witness else None,
                "message": self.message}


def validate_ring(spec: RingSpec) -> ValidationReport:
    """Exhaustive associativity check plus the unit axioms when a unit is declared."""
    d = spec.dim
    for r, s, t in iproduct(range(d), repeat=3):
        left = _vec_mul_right(spec, spec.basis_product(r, s), t)
        right = _vec_mul_left(spec, r, spec.basis_product(s, t))
        if left != right:
            return ValidationReport(False, (r, s, t),
                                    f"(x{r} x{s}) x{t} != x{r} (x{s} x{t})")
    if spec.unit is not None:
        u = spec.unit
        for r in range(d):
            if spec.basis_product(u, r) != {r: ONE} or spec.basis_product(r, u) != {r: ONE}:
                return ValidationReport(False, (u, r), f"declared unit x{u} fails on x{r}")
    return ValidationReport(True, None, "associative" + (" and unital" if spec.unit is not None else ""))


class TensorElement:
    """Element of ``R^{(x)n}``, stored sparsely as ``{multi-index: mpq}``."""

    __slots__ = ("ring", "degree", "terms", "_trie")

    def __init__(self, ring: RingSpec, degree: int, terms=None, *, _trusted=False):
        self.ring = ring
        self.degree = degree
        self._trie = None
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"multi-index {key} does not have length {degree}")
            if any(not 0 <= i < ring.dim for i in key):
                raise ValueError(f"multi-index {key} out of range for dim {ring.dim}")
            c = to_q(c)
            if c != 0:
                clean[key] = clean.get(key, ZERO) + c
        self.terms = {k: v for k, v in clean.items() if v != 0}

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, ring, degree):
        return cls(ring, degree, {}, _trusted=True)

    @classmethod
    def basis(cls, ring, index, coeff=ONE):
        index = tuple(index)
        return cls(ring, len(index), {index: coeff})

    @classmethod
    def from_dense(cls, ring, degree, coeffs):
        if len(coeffs) != ring.dim ** degree:
            raise ValueError(f"expected {ring.dim ** degree} coefficients, got {len(coeffs)}")
        keys = iproduct(range(ring.dim), repeat=degree)
        return cls(ring, degree, {k: c for k, c in zip(keys, coeffs) if c != 0})

    # views --------------------------------------------------------------
    @property
    def coeffs(self) -> list:
        """Dense row-major coefficient vector of length ``d**n``."""
        return [self.terms.get(k, ZERO) for k in iproduct(range(self.ring.dim), repeat=self.degree)]

    def items(self):
        return sorted(self.terms.items())

    def coefficient(self, index) -> object:
        return self.terms.get(tuple(index), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    # arithmetic ---------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, TensorElement):
            raise TypeError(f"expected TensorElement, got {type(other).__name__}")
        if other.ring != self.ring:
            raise ValueError("tensor elements belong to different rings")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, ZERO) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return TensorElement(self.ring, self.degree, out, _trusted=True)

    def __neg__(self):
        return TensorElement(self.ring, self.degree, {k: -v for k, v in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = to_q(c)
        if c == 0:
            return TensorElement.zero(self.ring, self.degree)
        return TensorElement(self.ring, self.degree, {k: v * c for k, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.ring == other.ring and self.degree == other.degree and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return f"TensorElement(deg={self.degree}, 0)"
        body = " + ".join(f"{c}*{list(k)}" for k, c in self.items()[:8])
        more = " + ..." if len(self.terms) > 8 else ""
        return f"TensorElement(deg={self.degree}, {body}{more})"

    def trie(self):
        """Nested dicts keyed slot by slot; leaves are coefficients."""
        if self._trie is None:
            root: dict = {}
            for key, c in self.terms.items():
                node = root
                for i in key[:-1]:
                    node = node.setdefault(i, {})
                node[key[-1]] = c
            self._trie = root
        return self._trie

    def to_list(self):
        return [[list(k), q_str(c)] for k, c in self.items()]

    @classmethod
    def from_list(cls, ring, degree, data):
        return cls(ring, degree, {tuple(k): to_q(c) for k, c in data})


def mul(a: TensorElement, b: TensorElement) -> TensorElement:
    """Product in ``R^{(x)n}``: slotwise structure-constant multiplication."""
    a._check(b)
    n = a.degree
    if n == 0:
        c = a.terms.get((), ZERO) * b.terms.get((), ZERO)
        return TensorElement(a.ring, 0, {(): c} if c != 0 else {}, _trusted=True)
    if not a.terms or not b.terms:
        return TensorElement.zero(a.ring, n)
    table = a.ring.table
    out: dict = {}
    last = n - 1

    def rec(ta, tb, depth, prefix, coef):
        if depth == last:
            for i, ca in ta.items():
                row = table[i]
                for j, cb in tb.items():
                    cell = row[j]
                    if cell:
                        w = coef * ca * cb
                        for k, c in cell:
                            key = prefix + (k,)
                            out[key] = out.get(key, ZERO) + w * c
            return
        for i, sa in ta.items():
            row = table[i]
            for j, sb in tb.items():
                cell = row[j]
                if cell:
                    for k, c in cell:
                        rec(sa, sb, depth + 1, prefix + (k,), coef * c)

    rec(a.trie(), b.trie(), 0, (), ONE)
    return TensorElement(a.ring, n, {k: v for k, v in out.items() if v != 0}, _trusted=True)


def _require_unit(ring):
    if ring.unit is None:
        raise UnsupportedError(f"ring {ring.name!r} has no unit")
    return ring.unit


def scalar(ring, q) -> TensorElement:
    q = to_q(q)
    return TensorElement(ring, 0, {(): q} if q != 0 else {}, _trusted=True)


def idempotent(ring, n: int) -> TensorElement:
    """``e^n``: the unit of ``R^{(x)n}``; ``e^0`` is the scalar 1."""
    if n == 0:
        return scalar(ring, 1)
    u = _require_unit(ring)
    return TensorElement(ring, n, {(u,) * n: ONE}, _trusted=True)


def tensor(a: TensorElement, b: TensorElement) -> TensorElement:
    """Concatenation ``a (x) b`` in ``R^{(x)(m+n)}``."""
    if a.ring != b.ring:
        raise ValueError("tensor elements belong to different rings")
    out = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            out[ka + kb] = ca * cb
    return TensorElement(a.ring, a.degree + b.degree, out, _trusted=True)


def embed(z: TensorElement, left: int, right: int) -> TensorElement:
    """``e^left (x) z (x) e^right``."""
    if left == 0 and right == 0:
        return z
    u = _require_unit(z.ring)
    pre, post = (u,) * left, (u,) * right
    return TensorElement(z.ring, left + z.degree + right,
                         {pre + k + post: c for k, c in z.terms.items()}, _trusted=True)


def place(z: TensorElement, slots, n: int) -> TensorElement:
    """Put factor ``k`` of ``z`` into slot ``slots[k]`` of ``R^{(x)n}`` (0-based); units elsewhere."""
    slots = tuple(slots)
    if len(slots) != z.degree or len(set(slots)) != len(slots) or any(not 0 <= s < n for s in slots):
        raise ValueError(f"invalid slot assignment {slots} for degree {z.degree} into {n}")
    u = _require_unit(z.ring) if n > z.degree else None
    out = {}
    for key, c in z.terms.items():
        full = [u] * n
        for s, i in zip(slots, key):
            full[s] = i
        out[tuple(full)] = c
    return TensorElement(z.ring, n, out, _trusted=True)


def permute(z: TensorElement, perm) -> TensorElement:
    """Move the factor in slot ``k`` to slot ``perm[k]`` (0-based)."""
    perm = tuple(perm)
    n = z.degree
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} slots")
    out = {}
    for key, c in z.terms.items():
        new = [0] * n
        for k, p in enumerate(perm):
            new[p] = key[k]
        out[tuple(new)] = c
    return TensorElement(z.ring, n, out, _trusted=True)


def transposition(n: int, i: int) -> tuple:
    """Permutation swapping slots ``i`` and ``i+1`` (0-based)."""
    p = list(range(n))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def block_swap_perm(first: int, second: int) -> tuple:
    """Slots ``0..first-1`` move past the following ``second`` slots."""
    return tuple(range(second, second + first)) + tuple(range(second))


def block_swap(z: TensorElement, first: int) -> TensorElement:
    return permute(z, block_swap_perm(first, z.degree - first))


def invert(a: TensorElement) -> TensorElement:
    """Two-sided inverse in ``R^{(x)n}``.

    Unipotent-like elements ``c e^n + u`` with ``u`` nilpotent use the
    terminating Neumann series; otherwise the left-regular linear system is
    solved when ``d**n <= SOLVE_LIMIT``.
    """
    ring, n = a.ring, a.degree
    if n == 0:
        c = a.terms.get((), ZERO)
        if c == 0:
            raise NotInvertibleError("zero scalar", rank_defect=1)
        return scalar(ring, ONE / c)
    u = _require_unit(ring)
    unit_key = (u,) * n
    size = ring.dim ** n
    c = a.terms.get(unit_key, ZERO)
    if c != 0:
        inv_c = ONE / c
        nil = dict(a.terms)
        del nil[unit_key]
        v = TensorElement(ring, n, {k: -x * inv_c for k, x in nil.items()}, _trusted=True)
        total = idempotent(ring, n)
        power = total
        solvable = size <= SOLVE_LIMIT
        budget = min(size, 2 * n + 2) if solvable else MAX_NEUMANN_STEPS
        for _ in range(budget):
            power = mul(power, v)
            if power.is_zero():
                return total.scale(inv_c)
            if solvable and len(power.terms) > size // 2:
                # dense powers rarely die out; the linear solve is cheaper
                break
            total = total + power
    if size > SOLVE_LIMIT:
        raise UnsupportedError(
            f"no terminating Neumann series and R^(x){n} has {size} > {SOLVE_LIMIT} basis tensors")
    return _invert_linear(a)


def left_regular_matrix(a: TensorElement):
    ring, n = a.ring, a.degree
    keys = list(iproduct(range(ring.dim), repeat=n))
    pos = {k: i for i, k in enumerate(keys)}
    cols = []
    for k in keys:
        cols.append(mul(a, TensorElement(ring, n, {k: ONE}, _trusted=True)))
    mat = [[ZERO] * len(keys) for _ in keys]
    for j, col in enumerate(cols):
        for k, c in col.terms.items():
            mat[pos[k]][j] = c
    return mat, keys


def _invert_linear(a: TensorElement) -> TensorElement:
    ring, n = a.ring, a.degree
    mat, keys = left_regular_matrix(a)
    unit_key = (ring.unit,) * n
    rhs = [ONE if k == unit_key else ZERO for k in keys]
    sol, defect = linalg.solve(mat, rhs)
    if sol is None:
        raise NotInvertibleError(f"element of R^(x){n} is singular (rank defect {defect})",
                                 rank_defect=defect)
    inv = TensorElement(ring, n, {k: x for k, x in zip(keys, sol) if x != 0}, _trusted=True)
    if mul(inv, a) != idempotent(ring, n):
        raise NotInvertibleError("right inverse is not a left inverse", rank_defect=0)
    return inv


def invert_linear(a: TensorElement) -> TensorElement:
    """Inverse through the left-regular linear system only (no Neumann path)."""
    if a.degree == 0:
        return invert(a)
    _require_unit(a.ring)
    if a.ring.dim ** a.degree > SOLVE_LIMIT:
        raise UnsupportedError("too many basis tensors for the dense solve")
    return _invert_linear(a)


def parse_tensor(ring, data) -> TensorElement:
    """Read ``{"degree": n, "terms": [[multi-index, "p/q"], ...]}``."""
    if isinstance(data, list):
        if not data:
            raise ValueError("an empty term list does not fix a degree")
        degree = len(data[0][0])
        terms = data
    else:
        degree = int(data["degree"])
        terms = data.get("terms", [])
    return TensorElement.from_list(ring, degree, terms)


def dump_tensor(z: TensorElement) -> dict:
    return {"degree": z.degree, "terms": z.to_list()}
