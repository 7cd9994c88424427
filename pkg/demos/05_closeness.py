"""(e, eps)-closeness: the bridge between learner states and equilibria.

A noisy population differs from an idealized one in two ways: an e fraction
of agents hold different base actions, and everyone explores at rate <= eps.
verify_close checks a concrete witness of that relation; two small theorems
make it useful:

  * the L1 gap between the two distributions is at most 2(e + eps);
  * if e + eps stays under eta/(8K), every eta/2-best reply to the noisy
    distribution is already an eta-best reply to the clean one.
"""

import numpy as np

from anonlearn import (
    CloseWitness,
    ContributionGame,
    MixedAction,
    abr_containment_threshold,
    best_reply_set,
    close_l1_bound,
    l1_distance,
    mixed_profile_distribution,
    pure_profile_distribution,
    verify_close,
)

rng = np.random.default_rng(7)
game = ContributionGame()
k, n = game.k, 100

print("== a witness, by construction ==")
g = np.full(n, 8)
gprime = g.copy()
gprime[rng.choice(n, size=5, replace=False)] = rng.integers(k, size=5)  # e = 0.05
ghat = tuple(MixedAction(int(a), 0.03) for a in gprime)
w = CloseWitness(g=tuple(g), gprime=tuple(gprime), ghat=ghat, e=0.05, eps=0.03)
rho = pure_profile_distribution(w.g, k)
rhohat = mixed_profile_distribution(w.ghat, k)
print(f"verify_close: {verify_close(w, rho, rhohat)}")
gap, bound = l1_distance(rho, rhohat), close_l1_bound(w.e, w.eps)
print(f"l1 gap {gap:.3f} <= 2(e+eps) = {bound:.3f}")

print()
print("== the containment threshold in practice ==")
eta = 40.0
d = abr_containment_threshold(eta, game.lipschitz)
print(f"K = {game.lipschitz:.0f}, eta = {eta}, so d_eta = eta/(8K) = {d:.4f}")

ok = 0
trials = 200
for _ in range(trials):
    e = float(rng.uniform(0, d))
    eps = float(rng.uniform(0, d - e))
    g = rng.integers(k, size=n)
    gp = g.copy()
    flips = rng.choice(n, size=int(e * n), replace=False)
    gp[flips] = rng.integers(k, size=flips.size)
    hat = tuple(MixedAction(int(a), eps) for a in gp)
    r = pure_profile_distribution(g, k)
    rh = mixed_profile_distribution(hat, k)
    if best_reply_set(rh, eta / 2, game) <= best_reply_set(r, eta, game):
        ok += 1
print(f"ABR_eta/2(noisy) within ABR_eta(clean): {ok}/{trials} random pairs")

print()
print("== far past the threshold, containment genuinely breaks ==")
# everyone rebased from 5 to 8: a legal witness with e = 1, way over d_eta
g = tuple([5] * n)
gp = tuple([8] * n)
w2 = CloseWitness(g=g, gprime=gp, ghat=tuple(MixedAction(8) for _ in range(n)), e=1.0, eps=0.0)
r = pure_profile_distribution(w2.g, k)
rh = mixed_profile_distribution(w2.ghat, k)
small = best_reply_set(rh, 0.5, game)
big = best_reply_set(r, 1.0, game)
print(f"verify_close: {verify_close(w2, r, rh)} (closeness itself allows e up to 1)")
print(f"ABR_0.5(all-8) = {sorted(small)}, ABR_1.0(all-5) = {sorted(big)}")
print(f"containment holds: {small <= big} — the d_eta budget is what made it safe")
