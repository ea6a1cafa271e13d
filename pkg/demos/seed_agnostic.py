"""Any invertible seeds give a solution of the twisting equation.

The ring here is K[x]/(x^3) in the basis 1, x, x^2.  Seeds are arbitrary
invertible tensors; the recursion fills in the rest of the twist.
"""
from twistforge.rational import to_q
from twistforge.tensor_ring import RingSpec, TensorElement, idempotent, validate_ring
from twistforge.twist import build_from_seeds, verify_rrp1, verify_te

ring = RingSpec("K[x]/x^3", 3, 0, (
    (0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1),
    (1, 0, 1, 1), (2, 0, 2, 1), (1, 1, 2, 1),
))
print("ring valid:", validate_ring(ring).passed)

seeds = [
    idempotent(ring, 2).scale(2) + TensorElement(ring, 2, {(1, 2): to_q("1/3"), (2, 1): to_q(-1)}),
    idempotent(ring, 3) + TensorElement(ring, 3, {(1, 1, 0): to_q(5)}),
    idempotent(ring, 4).scale(to_q("1/2")),
]
twist = build_from_seeds(seeds, 4)
print("twisting equation:", verify_te(twist).passed)
print("same seeds, same twist:", build_from_seeds(list(seeds), 4) == twist)
# generic seeds do not give an R-matrix relation; only special ones do
print("first R-matrix relation:", verify_rrp1(twist).passed)
