"""Tour of the payoff model: anonymous games, channels, utilities.

An anonymous game maps (own action, population distribution) to a payoff
lottery.  Expected utility is all the learning dynamics ever need, but the
channel itself matters in matching mode, where payoffs arrive one noisy
sample at a time.
"""

import numpy as np

from anonlearn import (
    ActionDistribution,
    ContributionGame,
    MixedAction,
    climbing_game,
    contribution_cost,
    estimate_lipschitz,
    prisoners_dilemma,
    utility,
)

game = ContributionGame()
print("== contribution game ==")
print(f"{game.k} contribution levels, cost c(x) kinked at 8:")
print("  x:   ", " ".join(f"{x:>5d}" for x in range(0, 20, 2)))
print("  c(x):", " ".join(f"{contribution_cost(x):>5.0f}" for x in range(0, 20, 2)))

delta8 = ActionDistribution.point_mass(8, 20)
uniform = ActionDistribution.uniform(20)
print(f"u(8, all-8)    = {game.expected_payoff(8, delta8):.1f}")
print(f"u(8, uniform)  = {game.expected_payoff(8, uniform):.1f}")
print(f"u(9, all-8)    = {game.expected_payoff(9, delta8):.1f}   <- the kink bites")
print(f"payoff bounds  = {game.payoff_bounds()}")

# mixed strategies are first-class: a_eps explores off a base action
a_eps = MixedAction(8, 0.05)
print(f"u(8_0.05, all-8) = {utility(a_eps, delta8, game):.2f} (exploration is costly)")

print()
print("== matrix games ==")
pd = prisoners_dilemma("matching")
print("prisoner's dilemma, matching mode: payoff channel at rho = (0.5, 0.5)")
for a in range(2):
    ch = pd.payoff_channel(a, ActionDistribution.uniform(2))
    pairs = ", ".join(f"{v:.0f} w.p. {p:.2f}" for v, p in zip(ch.values, ch.probs))
    print(f"  {pd.action_set.label(a)}: {pairs}  (mean {ch.mean():.1f})")

climb = climbing_game()
print(f"climbing game matrix:\n{climb.payoff_matrix()}")

print()
print("== Lipschitz constants (L1 norm) ==")
for g, name in ((game, "contribution"), (pd, "prisoners dilemma"), (climb, "climbing")):
    est = estimate_lipschitz(g, samples=400)
    print(f"  {name:>18s}: declared K = {g.lipschitz:<7.1f} sampled lower bound {est:.2f}")
