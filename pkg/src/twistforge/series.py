"""Truncated commutative power series over Q, matrices of them, and BCH.

A :class:`TruncatedPoly` keeps every monomial of total degree ``<= cap``.
Series variables always commute; the noncommutativity of the Lie ring lives
entirely in its structure constants.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct

from . import linalg
from .rational import ONE, ZERO, q_str, to_q
from .tensor_ring import RingError, RingSpec, validate_ring


class TruncatedPoly:
    __slots__ = ("nvars", "cap", "terms")

    def __init__(self, nvars: int, cap: int, terms=None):
        self.nvars = nvars
        self.cap = cap
        out = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            if sum(e) > cap:
                continue
            c = to_q(c)
            if c != 0:
                out[e] = out.get(e, ZERO) + c
        self.terms = {e: c for e, c in out.items() if c != 0}

    @classmethod
    def _raw(cls, nvars, cap, terms):
        p = cls.__new__(cls)
        p.nvars, p.cap, p.terms = nvars, cap, terms
        return p

    @classmethod
    def zero(cls, nvars, cap):
        return cls._raw(nvars, cap, {})

    @classmethod
    def const(cls, nvars, cap, c):
        c = to_q(c)
        return cls._raw(nvars, cap, {(0,) * nvars: c} if c != 0 else {})

    @classmethod
    def var(cls, nvars, cap, i, coeff=ONE):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, cap, {tuple(e): coeff})

    @classmethod
    def variables(cls, nvars, cap):
        return [cls.var(nvars, cap, i) for i in range(nvars)]

    def _like(self, other):
        if self.nvars != other.nvars:
            raise ValueError("series in different variable sets")
        return min(self.cap, other.cap)

    def __add__(self, other):
        if not isinstance(other, TruncatedPoly):
            other = TruncatedPoly.const(self.nvars, self.cap, other)
        cap = self._like(other)
        out = {e: c for e, c in self.terms.items() if sum(e) <= cap}
        for e, c in other.terms.items():
            if sum(e) > cap:
                continue
            s = out.get(e, ZERO) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return TruncatedPoly._raw(self.nvars, cap, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPoly._raw(self.nvars, self.cap, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = to_q(c)
        if c == 0:
            return TruncatedPoly.zero(self.nvars, self.cap)
        return TruncatedPoly._raw(self.nvars, self.cap, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedPoly):
            return self.scale(other)
        cap = self._like(other)
        out: dict = {}
        b_items = [(e, c, sum(e)) for e, c in other.terms.items()]
        for ea, ca in self.terms.items():
            da = sum(ea)
            if da > cap:
                continue
            for eb, cb, db in b_items:
                if da + db > cap:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, ZERO) + ca * cb
        return TruncatedPoly._raw(self.nvars, cap, {e: c for e, c in out.items() if c != 0})

    __rmul__ = scale

    def __pow__(self, k: int):
        result = TruncatedPoly.const(self.nvars, self.cap, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, TruncatedPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return self.terms == TruncatedPoly.const(self.nvars, self.cap, other).terms

    __hash__ = None

    def truncate(self, cap):
        return TruncatedPoly._raw(self.nvars, cap, {e: c for e, c in self.terms.items() if sum(e) <= cap})

    def homogeneous(self, degree):
        return TruncatedPoly._raw(self.nvars, self.cap, {e: c for e, c in self.terms.items() if sum(e) == degree})

    @property
    def constant(self):
        return self.terms.get((0,) * self.nvars, ZERO)

    def coefficient(self, exponent):
        return self.terms.get(tuple(exponent), ZERO)

    def linear_coefficients(self):
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.terms.get(tuple(e), ZERO))
        return out

    def derivative(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return TruncatedPoly._raw(self.nvars, self.cap, out)

    def is_zero(self):
        return not self.terms

    def render(self, names=None) -> str:
        """Sorted monomial list, used for golden comparisons."""
        names = names or [f"t{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            mono = "*".join(f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k)
            parts.append(f"{q_str(self.terms[e])}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"TruncatedPoly({self.render()} ; cap={self.cap})"


def embed_variables(p: TruncatedPoly, nvars: int, offset: int) -> TruncatedPoly:
    """Reinterpret ``p`` inside a bigger variable set, its variables starting at ``offset``."""
    out = {}
    for e, c in p.terms.items():
        full = [0] * nvars
        full[offset:offset + p.nvars] = e
        out[tuple(full)] = c
    return TruncatedPoly._raw(nvars, p.cap, out)


class MatrixSeries:
    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        if self.entries:
            n = self.entries[0][0].nvars
            for row in self.entries:
                for p in row:
                    if p.nvars != n:
                        raise ValueError("matrix entries use different variable sets")

    @property
    def shape(self):
        return len(self.entries), (len(self.entries[0]) if self.entries else 0)

    @property
    def nvars(self):
        return self.entries[0][0].nvars

    @property
    def cap(self):
        return min(p.cap for row in self.entries for p in row)

    @classmethod
    def identity(cls, n, nvars, cap):
        return cls([[TruncatedPoly.const(nvars, cap, 1 if i == j else 0) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols, nvars, cap):
        return cls([[TruncatedPoly.zero(nvars, cap) for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def constant(cls, rows, nvars, cap):
        return cls([[TruncatedPoly.const(nvars, cap, x) for x in row] for row in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other):
        return MatrixSeries([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return MatrixSeries([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return MatrixSeries([[-a for a in row] for row in self.entries])

    def scale(self, c):
        return MatrixSeries([[a.scale(c) for a in row] for row in self.entries])

    def __matmul__(self, other):
        if isinstance(other, MatrixSeries):
            rows, inner = self.shape
            cols = other.shape[1]
            out = []
            for i in range(rows):
                row = []
                for j in range(cols):
                    acc = TruncatedPoly.zero(self.nvars, min(self.cap, other.cap))
                    for k in range(inner):
                        a, b = self.entries[i][k], other.entries[k][j]
                        if a.terms and b.terms:
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return MatrixSeries(out)
        # matrix times vector of series
        return [sum((a * x for a, x in zip(row, other) if a.terms and x.terms),
                    TruncatedPoly.zero(self.nvars, self.cap)) for row in self.entries]

    def __eq__(self, other):
        return isinstance(other, MatrixSeries) and self.entries == other.entries

    __hash__ = None

    def constant_matrix(self):
        return [[p.constant for p in row] for row in self.entries]

    def map(self, fn):
        return MatrixSeries([[fn(p) for p in row] for row in self.entries])

    def transpose(self):
        return MatrixSeries([list(col) for col in zip(*self.entries)])


# --------------------------------------------------------------------------
# univariate coefficient lists


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _reciprocal(coeffs):
    inv = [ONE / coeffs[0]]
    for n in range(1, len(coeffs)):
        s = sum((coeffs[k] * inv[n - k] for k in range(1, n + 1)), ZERO)
        inv.append(-s / coeffs[0])
    return inv


@lru_cache(maxsize=None)
def _named_coefficients(name: str, count: int) -> tuple:
    if name == "exp":
        return tuple(ONE / _factorial(k) for k in range(count))
    if name == "expm1_over_z":
        return tuple(ONE / _factorial(k + 1) for k in range(count))
    if name == "one_minus_exp_neg_over_z":
        # (e^{-z} - 1) / (-z)
        return tuple(to_q((-1) ** k) / _factorial(k + 1) for k in range(count))
    if name == "z_over_expm1":
        return tuple(_reciprocal(list(_named_coefficients("expm1_over_z", count))))
    if name == "log1p":
        return (ZERO,) + tuple(to_q((-1) ** (k + 1)) / k for k in range(1, count))
    raise ValueError(f"unknown series {name!r}")


SERIES_NAMES = ("exp", "expm1_over_z", "one_minus_exp_neg_over_z", "z_over_expm1", "log1p")


def series_coefficients(f, count):
    """First ``count`` Taylor coefficients of a named series or an explicit list."""
    if isinstance(f, str):
        return list(_named_coefficients(f, count))
    coeffs = [to_q(c) for c in f][:count]
    return coeffs + [ZERO] * (count - len(coeffs))


def apply_univariate(f, m: MatrixSeries) -> MatrixSeries:
    """``sum_k f_k M^k`` truncated at the series cap; ``M`` must vanish at the origin."""
    rows, cols = m.shape
    if rows != cols:
        raise ValueError("apply_univariate needs a square matrix")
    if any(p.constant != 0 for row in m.entries for p in row):
        raise ValueError("matrix argument has a nonzero constant term; composition is not truncatable")
    cap, nvars = m.cap, m.nvars
    coeffs = series_coefficients(f, cap + 1)
    power = MatrixSeries.identity(rows, nvars, cap)
    total = power.scale(coeffs[0])
    for k in range(1, cap + 1):
        power = power @ m
        if coeffs[k] != 0:
            total = total + power.scale(coeffs[k])
    return total


def apply_univariate_poly(f, p: TruncatedPoly) -> TruncatedPoly:
    if p.constant != 0:
        raise ValueError("argument has a nonzero constant term")
    return apply_univariate(f, MatrixSeries([[p]]))[0, 0]


# --------------------------------------------------------------------------
# Lie rings


@dataclass(frozen=True)
class LieRingSpec:
    """Associative ring L by structure constants ``H_mu H_nu = B^sigma_{mu nu} H_sigma``.

    ``B`` is a sorted tuple of ``(mu, nu, sigma, coeff)``.  ``dim`` may be zero.
    """

    dim: int
    B: tuple = ()
    name: str = ""
    table: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 0:
            raise RingError(f"Lie ring dimension must be a non-negative integer, got {self.dim!r}")
        entries, seen = [], set()
        for entry in self.B:
            if len(entry) != 4:
                raise RingError(f"structure constant entry {entry!r} must have four fields")
            m, n, s, c = entry
            for idx in (m, n, s):
                if not isinstance(idx, int) or not 0 <= idx < self.dim:
                    raise RingError(f"index {idx!r} out of range in entry {entry!r}")
            c = to_q(c)
            if c == 0:
                raise RingError(f"zero coefficient stored for {(m, n, s)}")
            if (m, n, s) in seen:
                raise RingError(f"duplicate entry {(m, n, s)}")
            seen.add((m, n, s))
            entries.append((m, n, s, c))
        entries.sort(key=lambda e: e[:3])
        object.__setattr__(self, "B", tuple(entries))
        object.__setattr__(self, "table", {(m, n, s): c for m, n, s, c in entries})

    def b(self, sigma, mu, nu):
        """``B^sigma_{mu nu}``."""
        return self.table.get((mu, nu, sigma), ZERO)

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(dim=data["dim"], B=tuple(tuple(e) for e in data["B"]),
                       name=str(data.get("name", "")))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, RingError):
                raise
            raise RingError(f"malformed Lie ring spec: {exc}") from exc

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return {"name": self.name, "dim": self.dim,
                "B": [[m, n, s, q_str(c)] for m, n, s, c in self.B]}

    def as_ring(self) -> RingSpec:
        return RingSpec(self.name or "L", self.dim, None, self.B)

    def validate(self):
        if self.dim == 0:
            from .tensor_ring import ValidationReport
            return ValidationReport(True, None, "zero ring")
        return validate_ring(self.as_ring())

    @property
    def is_commutative(self):
        return all(self.b(s, m, n) == self.b(s, n, m)
                   for m, n, s in iproduct(range(self.dim), repeat=3))

    def bracket_constants(self):
        """``C^sigma_{mu nu} = B^sigma_{mu nu} - B^sigma_{nu mu}`` as a sparse dict."""
        out = {}
        for m, n, s in iproduct(range(self.dim), repeat=3):
            c = self.b(s, m, n) - self.b(s, n, m)
            if c != 0:
                out[(m, n, s)] = c
        return out

    def left_matrix(self, x) -> MatrixSeries:
        """``L(x)^mu_nu = B^mu_{sigma nu} x^sigma`` (row mu, column nu)."""
        return self._regular(x, left=True)

    def right_matrix(self, x) -> MatrixSeries:
        """``R(x)^mu_nu = B^mu_{nu sigma} x^sigma``."""
        return self._regular(x, left=False)

    def _regular(self, x, left):
        v = self.dim
        nvars, cap = x[0].nvars, x[0].cap
        rows = [[TruncatedPoly.zero(nvars, cap) for _ in range(v)] for _ in range(v)]
        for (a, b, s), c in self.table.items():
            # H_a H_b = c H_s
            if left:   # mu = s, sigma = a, nu = b
                rows[s][b] = rows[s][b] + x[a].scale(c)
            else:      # mu = s, nu = a, sigma = b
                rows[s][a] = rows[s][a] + x[b].scale(c)
        return MatrixSeries(rows)

    def product(self, a, b):
        """Ring product of coordinate vectors with commuting series coefficients."""
        nvars, cap = a[0].nvars, min(a[0].cap, b[0].cap)
        out = [TruncatedPoly.zero(nvars, cap) for _ in range(self.dim)]
        for (m, n, s), c in self.table.items():
            if a[m].terms and b[n].terms:
                out[s] = out[s] + (a[m] * b[n]).scale(c)
        return out


def bracket(lie: LieRingSpec, a, b, constants=None):
    """``[a, b]^sigma = (B^sigma_{mu nu} - B^sigma_{nu mu}) a^mu b^nu``."""
    constants = lie.bracket_constants() if constants is None else constants
    nvars, cap = a[0].nvars, min(a[0].cap, b[0].cap)
    out = [TruncatedPoly.zero(nvars, cap) for _ in range(lie.dim)]
    for (m, n, s), c in constants.items():
        if a[m].terms and b[n].terms:
            out[s] = out[s] + (a[m] * b[n]).scale(c)
    return out


def _vadd(a, b):
    return [x + y for x, y in zip(a, b)]


def _vscale(a, c):
    return [x.scale(c) for x in a]


def _compositions(n, parts):
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def bch(lie: LieRingSpec, u, w, cap=None):
    """Coordinates of ``log(e^u e^w)`` in the Lie algebra of ``lie``.

    Homogeneous pieces come from the commutator recursion
    ``(n+1) Z_{n+1} = 1/2 [u - w, Z_n]
    + sum_p B_{2p}/(2p)! sum_{k_1+..+k_{2p}=n} [Z_{k_1}, [.., [Z_{k_{2p}}, u + w]..]]``.
    Inputs must vanish at the origin so that ``Z_n`` starts in degree ``n``.
    """
    if lie.dim == 0:
        return []
    cap = min(p.cap for p in list(u) + list(w)) if cap is None else cap
    u = [p.truncate(cap) for p in u]
    w = [p.truncate(cap) for p in w]
    if any(p.constant != 0 for p in u + w):
        raise ValueError("bch arguments must have zero constant terms")
    consts = lie.bracket_constants()
    bern = series_coefficients("z_over_expm1", cap + 1)
    s = _vadd(u, w)
    d = [x - y for x, y in zip(u, w)]
    z = {1: s}
    for n in range(1, cap):
        acc = _vscale(bracket(lie, d, z[n], consts), to_q("1/2"))
        for p in range(1, n // 2 + 1):
            coeff = bern[2 * p]
            if coeff == 0:
                continue
            for ks in _compositions(n, 2 * p):
                inner = s
                for k in reversed(ks):
                    inner = bracket(lie, z[k], inner, consts)
                acc = _vadd(acc, _vscale(inner, coeff))
        z[n + 1] = _vscale(acc, ONE / (n + 1))
    total = z[1]
    for n in range(2, cap + 1):
        total = _vadd(total, z[n])
    return total


def poly_compose(target: TruncatedPoly, substitution) -> TruncatedPoly:
    """``target(substitution[0], .., substitution[k-1])`` truncated at the substitution cap."""
    substitution = list(substitution)
    if len(substitution) != target.nvars:
        raise ValueError(f"need {target.nvars} substitutions, got {len(substitution)}")
    if any(p.constant != 0 for p in substitution):
        raise ValueError("substituted series must have zero constant terms")
    if not substitution:
        return target
    nvars = substitution[0].nvars
    cap = min(p.cap for p in substitution)
    powers = [[TruncatedPoly.const(nvars, cap, 1)] for _ in substitution]
    out = TruncatedPoly.zero(nvars, cap)
    for e, c in target.terms.items():
        if sum(e) > cap:
            continue
        term = TruncatedPoly.const(nvars, cap, c)
        for i, k in enumerate(e):
            if k:
                while len(powers[i]) <= k:
                    powers[i].append(powers[i][-1] * substitution[i])
                term = term * powers[i][k]
        out = out + term
    return out


def compose_map(maps, substitution):
    return [poly_compose(p, substitution) for p in maps]


def identity_map(nvars, cap):
    return TruncatedPoly.variables(nvars, cap)


def series_inverse(mapping, cap=None):
    """Compositional inverse of a map ``Q^v -> Q^v`` given by series vanishing at 0."""
    mapping = list(mapping)
    v = len(mapping)
    if v == 0:
        return []
    cap = min(p.cap for p in mapping) if cap is None else cap
    if any(p.constant != 0 for p in mapping):
        raise ValueError("map must vanish at the origin")
    lin = [p.linear_coefficients() for p in mapping]
    try:
        inv = linalg.inverse(lin)
    except ZeroDivisionError as exc:
        raise ValueError("linear part of the map is singular") from exc
    ys = TruncatedPoly.variables(v, cap)
    nonlinear = []
    for p, row in zip(mapping, lin):
        lin_part = sum((y.scale(c) for y, c in zip(ys, row)), TruncatedPoly.zero(v, cap))
        nonlinear.append(p.truncate(cap) - lin_part)
    guess = [sum((y.scale(c) for y, c in zip(ys, row)), TruncatedPoly.zero(v, cap)) for row in inv]
    for _ in range(cap):
        nl = compose_map(nonlinear, guess) if any(not p.is_zero() for p in nonlinear) else [
            TruncatedPoly.zero(v, cap)] * v
        rhs = [y - q for y, q in zip(ys, nl)]
        guess = [sum((r.scale(c) for r, c in zip(rhs, row)), TruncatedPoly.zero(v, cap)) for row in inv]
    return guess
