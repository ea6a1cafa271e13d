import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistforge import linalg
from twistforge.rational import ONE, ZERO, q_str, to_q
from twistforge.tensor_ring import (
    NotInvertibleError,
    RingError,
    RingSpec,
    TensorElement,
    UnsupportedError,
    block_swap,
    dump_tensor,
    embed,
    idempotent,
    invert,
    invert_linear,
    mul,
    parse_tensor,
    permute,
    place,
    tensor,
    transposition,
    validate_ring,
)

from conftest import invertible_tensors, random_rings, tensors

E, H, X = 0, 1, 2


def jordanian_variant(**changes):
    table = {(0, 0): 0, (0, 1): 1, (0, 2): 2, (1, 0): 1, (2, 0): 2, (1, 1): 1, (2, 1): 2}
    for key, val in changes.items():
        pair = tuple("EHX".index(ch) for ch in key)
        if val is None:
            table.pop(pair, None)
        else:
            table[pair] = "EHX".index(val)
    return RingSpec("variant", 3, 0, tuple((r, s, a, 1) for (r, s), a in table.items()))


# -- rationals and linear algebra ---------------------------------------------

def test_to_q_accepts_exact_inputs_only():
    assert to_q("3/6") == to_q(Fraction(1, 2)) == ONE / 2
    assert to_q(4) == 4
    assert q_str("-2/4") == "-1/2"
    with pytest.raises(TypeError):
        to_q(0.5)
    with pytest.raises(TypeError):
        to_q(True)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_is_two_sided(rows):
    a = linalg.as_matrix(rows)
    if linalg.rank(a) < 3:
        with pytest.raises(ZeroDivisionError):
            linalg.inverse(a)
        return
    inv = linalg.inverse(a)
    assert linalg.matmul(a, inv) == linalg.identity(3)
    assert linalg.matmul(inv, a) == linalg.identity(3)


def test_solve_reports_rank_defect():
    x, defect = linalg.solve(linalg.as_matrix([[1, 2], [2, 4]]), [to_q(1), to_q(2)])
    assert x is None and defect == 1


# -- ring specs -----------------------------------------------------------------

def test_jordanian_ring_validates(jordanian_ring):
    assert validate_ring(jordanian_ring).passed


def test_scalar_ring_validates():
    assert validate_ring(RingSpec("K", 1, 0, ((0, 0, 0, 1),))).passed


def test_hx_equals_x_is_still_associative():
    # K[H]/(H^2 - H) acting on X from both sides: a genuine ring, not a counterexample
    assert validate_ring(jordanian_variant(HX="X")).passed


def test_hx_equals_h_gives_a_witness():
    report = validate_ring(jordanian_variant(HX="H"))
    assert not report.passed
    assert report.witness == (H, X, X)


def test_dropping_hh_breaks_associativity():
    report = validate_ring(jordanian_variant(HH=None))
    assert not report.passed
    r, s, t = report.witness
    spec = jordanian_variant(HH=None)
    a = TensorElement.basis(spec, (r,))
    b = TensorElement.basis(spec, (s,))
    c = TensorElement.basis(spec, (t,))
    assert mul(mul(a, b), c) != mul(a, mul(b, c))


def test_declared_unit_is_checked():
    spec = RingSpec("bad-unit", 2, 0, ((0, 0, 0, 1), (1, 1, 1, 1)))
    assert not validate_ring(spec).passed


@pytest.mark.parametrize("entry", [(0, 0, 3, 1), (0, -1, 0, 1), (0, 0, 0, 0)])
def test_malformed_entries_rejected(entry):
    with pytest.raises(RingError):
        RingSpec("bad", 3, 0, (entry,))


def test_duplicate_entries_rejected():
    with pytest.raises(RingError):
        RingSpec("dup", 2, 0, ((0, 0, 0, 1), (0, 0, 0, 2)))


def test_spec_round_trip(jordanian_ring):
    assert RingSpec.from_dict(jordanian_ring.to_dict()) == jordanian_ring


@given(random_rings())
def test_random_rings_are_associative(ring):
    assert validate_ring(ring).passed


# -- tensor elements ------------------------------------------------------------

def test_dense_view_round_trip(jordanian_ring):
    z = TensorElement(jordanian_ring, 2, {(0, 0): ONE, (2, 1): -ONE})
    dense = z.coeffs
    assert len(dense) == 9 and dense[2 * 3 + 1] == -1
    assert TensorElement.from_dense(jordanian_ring, 2, dense) == z


def test_zero_coefficients_are_dropped(jordanian_ring):
    z = TensorElement(jordanian_ring, 1, {(1,): ZERO})
    assert z.is_zero() and z == TensorElement.zero(jordanian_ring, 1)


def test_mixed_degrees_refused(jordanian_ring):
    with pytest.raises(ValueError):
        mul(idempotent(jordanian_ring, 1), idempotent(jordanian_ring, 2))


def test_jordanian_basis_products(jordanian_ring):
    def b(i):
        return TensorElement.basis(jordanian_ring, (i,))
    assert mul(b(H), b(H)) == b(H)
    assert mul(b(X), b(H)) == b(X)
    assert mul(b(H), b(X)).is_zero()
    assert mul(b(X), b(X)).is_zero()


@given(st.data())
def test_mul_is_associative_and_unital(data):
    ring = data.draw(random_rings())
    n = data.draw(st.integers(1, 3))
    a, b, c = (data.draw(tensors(ring, n)) for _ in range(3))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    e = idempotent(ring, n)
    assert mul(e, a) == a == mul(a, e)


@given(st.data())
def test_mul_is_bilinear(data):
    ring = data.draw(random_rings())
    a, b, c = (data.draw(tensors(ring, 2)) for _ in range(3))
    assert mul(a + b, c) == mul(a, c) + mul(b, c)
    assert mul(a.scale(3), c) == mul(a, c).scale(3)


@given(st.data())
def test_tensor_is_multiplicative(data):
    ring = data.draw(random_rings())
    a, b = data.draw(tensors(ring, 1)), data.draw(tensors(ring, 1))
    c, d = data.draw(tensors(ring, 2)), data.draw(tensors(ring, 2))
    assert mul(tensor(a, c), tensor(b, d)) == tensor(mul(a, b), mul(c, d))


def test_embed_and_place(jordanian_ring):
    x = TensorElement.basis(jordanian_ring, (X,))
    assert embed(x, 1, 1) == TensorElement.basis(jordanian_ring, (E, X, E))
    z = TensorElement.basis(jordanian_ring, (X, H))
    assert place(z, (0, 2), 3) == TensorElement.basis(jordanian_ring, (X, E, H))
    assert place(z, (2, 0), 3) == TensorElement.basis(jordanian_ring, (H, E, X))


def test_permutation_convention(jordanian_ring):
    z = TensorElement.basis(jordanian_ring, (X, H, E))
    # the factor in slot k moves to slot perm[k]
    assert permute(z, (2, 0, 1)) == TensorElement.basis(jordanian_ring, (H, E, X))
    assert permute(z, transposition(3, 0)) == TensorElement.basis(jordanian_ring, (H, X, E))
    assert block_swap(z, 1) == TensorElement.basis(jordanian_ring, (H, E, X))


@given(st.data())
def test_permutation_is_a_ring_automorphism(data):
    ring = data.draw(random_rings())
    a, b = data.draw(tensors(ring, 3)), data.draw(tensors(ring, 3))
    perm = data.draw(st.permutations(range(3)))
    assert permute(mul(a, b), perm) == mul(permute(a, perm), permute(b, perm))
    inverse = [0] * 3
    for k, p in enumerate(perm):
        inverse[p] = k
    assert permute(permute(a, perm), inverse) == a


# -- inversion ------------------------------------------------------------------

def test_unipotent_inverse(jordanian_ring):
    e2 = idempotent(jordanian_ring, 2)
    xh = TensorElement.basis(jordanian_ring, (X, H))
    assert invert(e2 - xh) == e2 + xh


@given(st.data())
def test_inverse_paths_agree(data):
    ring = data.draw(random_rings())
    n = data.draw(st.integers(1, 3))
    z = data.draw(invertible_tensors(ring, n))
    inv = invert(z)
    e = idempotent(ring, n)
    assert mul(inv, z) == e == mul(z, inv)
    assert invert_linear(z) == inv


def test_singular_element_reports_defect(jordanian_ring):
    h = TensorElement.basis(jordanian_ring, (H,))
    with pytest.raises(NotInvertibleError) as info:
        invert(h)
    assert info.value.rank_defect == 2


def test_large_non_unipotent_inverse_unsupported(jordanian_ring):
    # 3^6 basis tensors and no unit component: beyond the dense solve
    z = TensorElement.basis(jordanian_ring, (H,) * 6)
    with pytest.raises(UnsupportedError):
        invert(z)


def test_large_unipotent_inverse_still_works(jordanian_ring):
    e = idempotent(jordanian_ring, 6)
    u = TensorElement.basis(jordanian_ring, (X, H, E, E, X, H))
    assert mul(invert(e + u), e + u) == e


def test_tensor_json_round_trip(jordanian_ring):
    z = TensorElement(jordanian_ring, 2, {(0, 0): ONE, (2, 1): to_q("-3/4")})
    assert parse_tensor(jordanian_ring, dump_tensor(z)) == z
    assert dump_tensor(z) == {"degree": 2, "terms": [[[0, 0], "1"], [[2, 1], "-3/4"]]}

