"""Random instances shared by unit and acceptance tests."""
from equnif import theories as th
from equnif.terms import App, Permutation, Substitution, Var, compose_subst

from conftest import random_term

POOL = ("x", "y", "z", "w")


def composed_instance(rng, tid):
    """(σ, θ, λ) with θ = λσ: σ = πσ0 and λ = λ0π⁻¹ for a random permutation π of the pool.

    Unit theories also get x ↦ f(x, v) with λ0(v) = 0 half of the time.
    """
    s0 = {x: random_term(rng, tid, POOL, 2) for x in POOL[:3] if rng.random() < 0.4}
    l0 = {x: random_term(rng, tid, POOL, 1) for x in POOL if rng.random() < 0.2}
    if "0" in th.signature(tid) and rng.random() < 0.5:
        x = rng.choice(POOL)
        s0[x] = App("f", (Var(x), Var("v")))
        l0["v"] = App("0")
    perm = list(POOL)
    rng.shuffle(perm)
    pi = Permutation.from_dict(dict(zip(POOL, perm)))
    sigma = compose_subst(pi.as_subst(), Substitution(s0))
    lam = compose_subst(Substitution(l0), pi.inverse().as_subst())
    return sigma, compose_subst(lam, sigma), lam
