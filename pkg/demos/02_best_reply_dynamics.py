"""Best-reply sequences: equilibrium finding by fixed-point iteration.

br_sequence repeatedly replaces the population distribution with a best
reply to it.  A fixed point is an equilibrium; some games cycle instead,
and that comes back as data (converged=False), not an error.
"""

import numpy as np

from anonlearn import (
    ActionDistribution,
    ContributionGame,
    MatrixGame,
    best_reply_set,
    br_sequence,
    is_eta_nash,
    prisoners_dilemma,
)


def show(seq, labels=None):
    for t, rho in enumerate(seq.steps):
        support = ", ".join(
            (labels[a] if labels else str(a)) + f":{rho[a]:.2f}" for a in rho.support()
        )
        print(f"  step {t}: {support}")
    if seq.converged:
        print(f"  fixed point at step {seq.fixed_point_index}")
    else:
        print("  no fixed point (cycle)")


print("== contribution game: uniform start snaps to all-8 ==")
game = ContributionGame()
seq = br_sequence(ActionDistribution.uniform(20), 0.0, game)
show(seq)
fixed = seq.steps[seq.fixed_point_index]
print(f"  is_eta_nash(fixed, eta=0): {is_eta_nash(fixed, 0.0, game)}")

print()
print("== eta widens the best-reply set ==")
delta5 = ActionDistribution.point_mass(5, 20)
for eta in (0.0, 1.0, 5.0):
    print(f"  ABR_{eta}(all-5) = {sorted(best_reply_set(delta5, eta, game))}")

print()
print("== prisoner's dilemma: defect, immediately ==")
show(br_sequence(ActionDistribution.point_mass(0, 2), 0.0, prisoners_dilemma()), labels=["C", "D"])

print()
print("== an anti-coordination game only cycles ==")
anti = MatrixGame([[-1.0, 1.0], [1.0, -1.0]])
show(br_sequence(ActionDistribution.point_mass(0, 2), 0.0, anti, max_steps=6))

print()
print("== the uniform tie rule finds the mixed point instead ==")
coord = MatrixGame([[1.0, 0.0], [0.0, 1.0]])
seq = br_sequence(ActionDistribution.uniform(2), 0.0, coord, rule="uniform")
show(seq)
