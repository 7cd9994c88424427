"""Stage learning vs payoff-only regret matching on the same game.

Both learners see nothing but their own realized payoffs.  The stage
learner commits to a base for tau rounds and compares clean averages; the
regret matcher re-weights every round from importance-sampled payoff
estimates.  On the contribution game the stage learner converges tightly
while regret matching drifts — its exploration floor keeps re-seeding
spread-out play, which is exactly the gap the comparison is about.
"""

import numpy as np

from anonlearn import RunConfig, run_many

base = dict(game="contribution", explore=0.05, stage_len=250, rounds=3000, n=100)
seeds = range(6)

stage = run_many([RunConfig(learner="stage", seed=s, **base) for s in seeds], threads=4)
regret = run_many([RunConfig(learner="regret", seed=s, **base) for s in seeds], threads=4)

print("per-stage mean distance from all-8 (6 seeds):")
print("stage#  stage-learner  regret-matcher")
sd = np.mean([t.stage_distance for t in stage], axis=0)
rd = np.mean([t.stage_distance for t in regret], axis=0)
for s, (a, b) in enumerate(zip(sd, rd)):
    print(f"{s:>6d} {a:>14.3f} {b:>15.3f}")

print()
print(f"final means: stage {sd[-1]:.3f}, regret {rd[-1]:.3f}")
print("regret matching is payoff-only too, but with 20 actions and a payoff")
print("range of 722 its switching rates stay tiny; it neither locks onto 8")
print("nor escapes its own exploration floor within this horizon.")
