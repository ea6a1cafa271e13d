"""Relations of the dual algebra read off from the triangular R-matrix."""
from twistforge.data import bundled_lie
from twistforge.frt import coaction_beta, eta_change_of_basis, extract_rtt, gen_label, verify_frt
from twistforge.inhom import build_model
from twistforge.rational import q_str

for name in ("jordanian", "nc2"):
    model = build_model(bundled_lie(name), D=5, N=4)
    print(f"== {name}")
    for line in extract_rtt(model).render():
        print("  ", line)
    beta = coaction_beta(model)
    for g in sorted(beta):
        if g:
            terms = [f"{q_str(c)}*{''.join(gen_label(model.v, t) for t in a) or '1'}"
                     f"(x){''.join(gen_label(model.v, t) for t in b) or '1'}"
                     for (a, b), c in sorted(beta[g].items())]
            print(f"   beta({gen_label(model.v, g)}) =", " + ".join(terms))
    print("   eta =", [p.render() for p in eta_change_of_basis(model, 4)])
    print("   all dual-side checks pass:", verify_frt(model).passed)
