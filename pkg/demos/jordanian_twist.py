"""Build the Jordanian twist from its first component and inspect it.

Run with ``python demos/jordanian_twist.py``.
"""
from twistforge.bialgebra import QTStructure
from twistforge.data import bundled_lie
from twistforge.inhom import build_model, verify_exponential_form
from twistforge.tensor_ring import dump_tensor
from twistforge.twist import fusion_twist, rmatrix, verify_membership, verify_te, ybe_check

N = 5

model = build_model(bundled_lie("jordanian"), D=5, N=N)
print("basis of R: E=0, H=1, X=2")
print("Phi^{1,1} =", dump_tensor(model.phi11)["terms"])

twist = fusion_twist(model.phi11, N)
for m, k in [(1, 1), (2, 1), (1, 2), (2, 2)]:
    print(f"Phi^{{{m},{k}}} =", dump_tensor(twist.phi(m, k))["terms"])

te = verify_te(twist)
print(f"twisting equation: {len(te.grid)} triples, passed={te.passed}")
print("in S for the trivial R:", verify_membership(twist, QTStructure.trivial(model.ring)).passed)

r = rmatrix(twist)
print("R^{1,1} =", dump_tensor(r.component((1, 1)))["terms"])
print("Yang-Baxter:", ybe_check(model.rtilde))

# the same twist written as exp(-psi(X) (x) H) with psi(X) = -log(1 - X)
print("recursion matches the exponential form:", verify_exponential_form(model, 4).passed)
