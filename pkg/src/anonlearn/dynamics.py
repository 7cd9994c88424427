"""Best-reply machinery: approximate best-reply sets, sequences, and the
(e, eps)-closeness relation between action distributions."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import (
    ActionDistribution,
    AnonymousGame,
    DimensionError,
    MixedAction,
    NORM_TOL,
    l1_distance,
)

BR_RULES = ("pointmass", "uniform")


def _utilities(rho: ActionDistribution, game: AnonymousGame) -> np.ndarray:
    return np.array([game.expected_payoff(a, rho) for a in range(game.k)])


def best_reply_set(rho: ActionDistribution, eta: float, game: AnonymousGame) -> set[int]:
    """Actions whose utility against rho is within eta of the best.

    Comparison is raw double arithmetic: eta is the intended slack, no extra
    epsilon is layered on.
    """
    if eta < 0:
        raise ValueError(f"eta must be >= 0, got {eta}")
    game._check_rho(rho)
    u = _utilities(rho, game)
    best = u.max()
    return {int(a) for a in np.flatnonzero(u + eta >= best)}


def br_step(
    rho: ActionDistribution, eta: float, game: AnonymousGame, rule: str = "pointmass"
) -> ActionDistribution:
    """One step of the best-reply map: a distribution supported on ABR_eta(rho).

    pointmass puts everything on the lowest-index best reply; uniform spreads
    evenly over the whole set.
    """
    if rule not in BR_RULES:
        raise ValueError(f"rule must be one of {BR_RULES}, got {rule!r}")
    abr = best_reply_set(rho, eta, game)
    if rule == "pointmass":
        return ActionDistribution.point_mass(min(abr), game.k)
    w = np.zeros(game.k)
    w[sorted(abr)] = 1.0 / len(abr)
    return ActionDistribution(w)


@dataclass
class BestReplySequence:
    """Trajectory rho_0, rho_1, ... of the best-reply map."""

    steps: list[ActionDistribution]
    converged: bool
    fixed_point_index: int | None
    eta: float
    rule: str

    def __len__(self):
        return len(self.steps)

    def to_csv(self, path):
        k = self.steps[0].k
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["step"] + [f"rho_{a}" for a in range(k)])
            for t, rho in enumerate(self.steps):
                writer.writerow([t] + [repr(float(w)) for w in rho.weights])


def br_sequence(
    rho0: ActionDistribution,
    eta: float,
    game: AnonymousGame,
    max_steps: int = 100,
    rule: str = "pointmass",
    tol: float = 0.0,
) -> BestReplySequence:
    """Iterate br_step from rho0 until a fixed point or max_steps.

    The step map is deterministic, so convergence is declared on the first
    exact repeat (L1 within tol; default exact).  Non-convergence is data,
    not an error: the truncated trajectory comes back with converged=False.
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    steps = [rho0]
    for _ in range(max_steps):
        nxt = br_step(steps[-1], eta, game, rule)
        steps.append(nxt)
        if l1_distance(nxt, steps[-2]) <= tol:
            return BestReplySequence(steps, True, len(steps) - 2, eta, rule)
    return BestReplySequence(steps, False, None, eta, rule)


def is_eta_nash(rho: ActionDistribution, eta: float, game: AnonymousGame) -> bool:
    """True iff every action rho plays is an eta-best reply to rho itself."""
    abr = best_reply_set(rho, eta, game)
    return all(int(a) in abr for a in rho.support())


def pure_profile_distribution(actions, k: int) -> ActionDistribution:
    """Empirical action distribution of a finite pure-action profile."""
    a = np.asarray(actions, dtype=int)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError("profile must be a nonempty 1-d action vector")
    if (a < 0).any() or (a >= k).any():
        raise ValueError(f"profile actions out of range 0..{k - 1}")
    return ActionDistribution.from_counts(np.bincount(a, minlength=k))


def mixed_profile_distribution(strategies, k: int) -> ActionDistribution:
    """Population distribution induced by per-agent mixed strategies."""
    if len(strategies) == 0:
        raise DimensionError("profile must be nonempty")
    w = np.zeros(k)
    for s in strategies:
        w += s.vector(k)
    return ActionDistribution(w / len(strategies))


@dataclass(frozen=True)
class CloseWitness:
    """Candidate evidence that one distribution is (e, eps)-close to another.

    g and gprime assign a pure action to each agent; ghat assigns a mixed
    action.  Construction checks only shapes; whether the profiles satisfy
    the closeness conditions is verify_close's job.
    """

    g: tuple[int, ...]
    gprime: tuple[int, ...]
    ghat: tuple[MixedAction, ...]
    e: float
    eps: float

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(int(a) for a in self.g))
        object.__setattr__(self, "gprime", tuple(int(a) for a in self.gprime))
        object.__setattr__(self, "ghat", tuple(self.ghat))
        if not (len(self.g) == len(self.gprime) == len(self.ghat) > 0):
            raise DimensionError(
                f"profiles must cover one population: sizes {len(self.g)}, "
                f"{len(self.gprime)}, {len(self.ghat)}"
            )
        if not 0.0 <= self.e <= 1.0:
            raise ValueError(f"e must be in [0, 1], got {self.e}")
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must be in [0, 1], got {self.eps}")

    @property
    def n(self) -> int:
        return len(self.g)


def verify_close(
    witness: CloseWitness, rho: ActionDistribution, rhohat: ActionDistribution
) -> bool:
    """Check the four closeness conditions on a finite population.

    1. g induces rho and ghat induces rhohat;
    2. g assigns plain actions (structural, given the types);
    3. ||rho_g - rho_g'||_1 <= 2e;
    4. ghat explores the gprime actions at one common rate <= eps.

    Empirical frequencies stand in for the infinite-population aggregates,
    and float comparisons get NORM_TOL of slack.  The relation is
    deliberately asymmetric: swap rho and rhohat and it generally fails.
    """
    if rho.k != rhohat.k:
        raise DimensionError(f"dimension mismatch: {rho.k} vs {rhohat.k}")
    k = rho.k
    if max(witness.g) >= k or max(witness.gprime) >= k:
        raise DimensionError(f"witness actions out of range for {k} actions")

    rho_g = pure_profile_distribution(witness.g, k)
    rho_gp = pure_profile_distribution(witness.gprime, k)
    rho_ghat = mixed_profile_distribution(witness.ghat, k)

    if l1_distance(rho_g, rho) > NORM_TOL:
        return False
    if l1_distance(rho_ghat, rhohat) > NORM_TOL:
        return False
    if l1_distance(rho_g, rho_gp) > 2.0 * witness.e + NORM_TOL:
        return False
    explore = witness.ghat[0].explore
    if explore > witness.eps + NORM_TOL:
        return False
    for a, m in zip(witness.gprime, witness.ghat):
        if m.base != a or abs(m.explore - explore) > NORM_TOL:
            return False
    return True


def close_l1_bound(e: float, eps: float) -> float:
    """L1 guarantee for an (e, eps)-close pair: 2(e + eps)."""
    if not 0.0 <= e <= 1.0 or not 0.0 <= eps <= 1.0:
        raise ValueError(f"e and eps must be in [0, 1], got {e}, {eps}")
    return 2.0 * (e + eps)


def abr_containment_threshold(eta: float, K: float) -> float:
    """Closeness budget d_eta = eta/(8K) under which ABR_{eta/2} of the noisy
    distribution stays inside ABR_eta of the clean one."""
    if K <= 0.0:
        raise ValueError(f"need a positive Lipschitz bound, got K={K}")
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    return eta / (8.0 * K)
