"""Mean-field contribution game: stage learners find the equilibrium fast.

n=100 agents, explore at 5%, stages of 250 rounds.  Distance from the
all-8 equilibrium collapses within a few stages; what remains is mostly
the exploration itself (the floor at ~0.27).  Small populations are
noisier — with two agents the play stays chaotic.
"""

import numpy as np

from anonlearn import RunConfig, run, run_many

base = dict(game="contribution", explore=0.05, stage_len=250, rounds=3000)

print("== one run, stage by stage (n=100, seed 0) ==")
trace = run(RunConfig(n=100, seed=0, **base))
print("stage end_round distance br_fraction")
for s in range(trace.stages):
    print(
        f"{s:>5d} {(s + 1) * 250:>9d} {trace.stage_distance[s]:>8.3f}"
        f" {trace.stage_br_fraction[s]:>11.2f}"
    )
print(f"rounds to distance < 0.5: {trace.rounds_to_threshold(0.5)}")

print()
print("== population size matters (10 seeds each) ==")
for n in (2, 10, 100):
    traces = run_many([RunConfig(n=n, seed=s, **base) for s in range(10)], threads=4)
    finals = [t.final_distance for t in traces]
    print(f"  n={n:>3d}: mean final distance {np.mean(finals):.3f} (min {min(finals):.2f}, max {max(finals):.2f})")

print()
print("exploration floor: even all-8 bases put 0.05 * E|a-8| of mass elsewhere,")
print("so distances around 0.27 are as converged as a 5%-exploring crowd gets.")
