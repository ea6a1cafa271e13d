import itertools
import json
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from twistforge import linalg
from twistforge.data import bundled_lie, spec_path
from twistforge.inhom import build_model
from twistforge.rational import ONE, ZERO, to_q
from twistforge.series import LieRingSpec
from twistforge.tensor_ring import RingSpec, TensorElement, idempotent, invert, NotInvertibleError

settings.register_profile("default", deadline=None, max_examples=30,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

BUNDLED = ("jordanian", "null_plane", "nc2")


@pytest.fixture(scope="session")
def lies():
    return {name: bundled_lie(name) for name in BUNDLED}


@pytest.fixture(scope="session")
def models(lies):
    return {name: build_model(lie, 5, 4) for name, lie in lies.items()}


@pytest.fixture(scope="session")
def jordanian_ring():
    with spec_path("jordanian_ring").open() as fh:
        return RingSpec.from_dict(json.load(fh))


NULL2 = LieRingSpec(2, (), "null2")


# --------------------------------------------------------------------------
# random associative unital rings of dimension <= 3
#
# Each seed algebra is given by 0/1 structure constants in a basis whose
# first element is the unit; a random change of the non-unit basis vectors
# (plus multiples of the unit) gives a ring with unrelated-looking constants.

SEED_ALGEBRAS = {
    "K": (1, []),
    "KxK": (2, [(1, 1, 1, 1)]),                       # e1 idempotent
    "dual": (2, []),                                  # x^2 = 0
    "K[x]/x^3": (3, [(1, 1, 2, 1)]),
    "K^3": (3, [(1, 1, 1, 1), (2, 2, 2, 1)]),
    "upper2": (3, [(1, 1, 1, 1), (1, 2, 2, 1)]),      # E11, E12 with 1 = E11 + E22
    "square-zero2": (3, []),                          # K[x,y]/(x,y)^2
    "KxDual": (3, [(1, 1, 1, 1), (1, 2, 2, 1), (2, 1, 2, 1)]),
}


def _seed_ring(name):
    dim, entries = SEED_ALGEBRAS[name]
    product = [(0, i, i, ONE) for i in range(dim)] + [(i, 0, i, ONE) for i in range(1, dim)]
    return dim, {(r, s): {a: to_q(c)} for r, s, a, c in entries} | {(r, s): {a: c} for r, s, a, c in product}


def transformed_ring(name, matrix, shifts):
    """Ring with basis ``f_0 = 1``, ``f_i = sum_j P_ij a_j + c_i 1``."""
    dim, table = _seed_ring(name)
    n = dim - 1
    # basis change in the full space; column i holds f_i in the old basis
    full = [[ZERO] * dim for _ in range(dim)]
    full[0][0] = ONE
    for i in range(n):
        full[0][i + 1] = to_q(shifts[i])
        for j in range(n):
            full[j + 1][i + 1] = to_q(matrix[i][j])
    inv = linalg.inverse(full)

    def old_product(u, w):
        out = [ZERO] * dim
        for r, s in itertools.product(range(dim), repeat=2):
            if u[r] and w[s]:
                for a, c in table.get((r, s), {}).items():
                    out[a] += u[r] * w[s] * c
        return out

    cols = [[full[k][i] for k in range(dim)] for i in range(dim)]
    product = []
    for r, s in itertools.product(range(dim), repeat=2):
        coords = linalg.matvec(inv, old_product(cols[r], cols[s]))
        product += [(r, s, a, c) for a, c in enumerate(coords) if c != 0]
    return RingSpec(f"{name}*", dim, 0, tuple(product))


small_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def random_rings(draw):
    name = draw(st.sampled_from(sorted(SEED_ALGEBRAS)))
    n = SEED_ALGEBRAS[name][0] - 1
    matrix = [[draw(small_rationals) for _ in range(n)] for _ in range(n)]
    if n and linalg.rank([[to_q(x) for x in row] for row in matrix]) < n:
        matrix = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    shifts = [draw(small_rationals) for _ in range(n)]
    return transformed_ring(name, matrix, shifts)


@st.composite
def tensors(draw, ring, degree, max_terms=4):
    keys = list(itertools.product(range(ring.dim), repeat=degree))
    picked = draw(st.lists(st.sampled_from(keys), max_size=max_terms, unique=True))
    return TensorElement(ring, degree, {k: to_q(draw(small_rationals)) for k in picked})


@st.composite
def invertible_tensors(draw, ring, degree, max_terms=4):
    """Unit multiple plus a small perturbation, kept only when invertible."""
    c = draw(st.sampled_from([1, 2, -1, "1/2", 3]))
    z = idempotent(ring, degree).scale(to_q(c)) + draw(tensors(ring, degree, max_terms))
    try:
        invert(z)
    except NotInvertibleError:
        z = idempotent(ring, degree).scale(to_q(c))
    return z


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
