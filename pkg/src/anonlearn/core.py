"""Core model for anonymous games.

An anonymous game is described by a finite action set, a finite payoff set,
and a payoff channel mapping (own action, population action distribution) to
a distribution over payoffs.  Everything an agent's payoff depends on is the
fraction of the population on each action, never agent identities.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np

# Distributions must sum to 1 within this tolerance at construction; they are
# renormalized exactly once and immutable afterwards.
NORM_TOL = 1e-9


class DimensionError(ValueError):
    """Action or payoff vectors disagree in size."""


@dataclass(frozen=True)
class ActionSet:
    """Finite set of actions, indexed 0..size-1."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"action set needs size >= 2, got {self.size}")
        if self.labels is not None and len(self.labels) != self.size:
            raise ValueError("labels length must equal action set size")

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)


class ActionDistribution:
    """Point of the simplex over actions.

    Doubles as the population aggregate: weights[a] is the fraction of agents
    choosing action a.  Immutable; the weight vector is renormalized once at
    construction and then frozen.
    """

    __slots__ = ("weights",)

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size < 2:
            raise DimensionError(f"need a 1-d vector of >= 2 weights, got shape {w.shape}")
        if not np.isfinite(w).all():
            raise ValueError("weights must be finite")
        if (w < -NORM_TOL).any():
            raise ValueError(f"negative weight: min={w.min()}")
        w = np.where(w < 0.0, 0.0, w)
        total = w.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"weights sum to {total}, not 1 within {NORM_TOL}")
        w = w / total
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def k(self) -> int:
        return self.weights.size

    @classmethod
    def uniform(cls, k: int) -> "ActionDistribution":
        return cls(np.full(k, 1.0 / k))

    @classmethod
    def point_mass(cls, a: int, k: int) -> "ActionDistribution":
        w = np.zeros(k)
        w[a] = 1.0
        return cls(w)

    @classmethod
    def from_counts(cls, counts) -> "ActionDistribution":
        c = np.asarray(counts, dtype=float)
        total = c.sum()
        if total <= 0:
            raise ValueError("counts must have positive total")
        return cls(c / total)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.weights > 0.0)

    def __getitem__(self, a: int) -> float:
        return float(self.weights[a])

    def __eq__(self, other) -> bool:
        return isinstance(other, ActionDistribution) and np.array_equal(
            self.weights, other.weights
        )

    def __hash__(self):
        return hash(self.weights.tobytes())

    def __repr__(self):
        return f"ActionDistribution({np.array2string(self.weights, precision=4)})"


@dataclass(frozen=True)
class MixedAction:
    """Play `base` with probability 1-explore, otherwise uniform over the rest."""

    base: int
    explore: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.explore < 1.0:
            raise ValueError(f"explore must be in [0, 1), got {self.explore}")
        if self.base < 0:
            raise ValueError("base action must be a nonnegative index")

    def vector(self, k: int) -> np.ndarray:
        if not self.base < k:
            raise DimensionError(f"base action {self.base} out of range for {k} actions")
        w = np.full(k, self.explore / (k - 1))
        w[self.base] = 1.0 - self.explore
        return w

    def distribution(self, k: int) -> ActionDistribution:
        return ActionDistribution(self.vector(k))


@dataclass(frozen=True)
class PayoffSet:
    """Finite set of distinct payoff values."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("payoff set must be nonempty")
        if not all(np.isfinite(self.values)):
            raise ValueError("payoff values must be finite")
        if len(set(self.values)) != len(self.values):
            raise ValueError("payoff values must be distinct")

    def __len__(self):
        return len(self.values)


class PayoffDistribution:
    """Distribution over finitely many payoff values."""

    __slots__ = ("values", "probs")

    def __init__(self, values, probs):
        v = np.asarray(values, dtype=float)
        p = np.asarray(probs, dtype=float)
        if v.shape != p.shape or v.ndim != 1 or v.size == 0:
            raise DimensionError("values and probs must be matching nonempty 1-d vectors")
        if not np.isfinite(v).all():
            raise ValueError("payoff values must be finite")
        if (p < -NORM_TOL).any():
            raise ValueError("probabilities must be nonnegative")
        p = np.where(p < 0.0, 0.0, p)
        total = p.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1 within {NORM_TOL}")
        p = p / total
        v.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "probs", p)

    @classmethod
    def point_mass(cls, value: float) -> "PayoffDistribution":
        return cls(np.array([value]), np.array([1.0]))

    @classmethod
    def from_support(cls, payoff_set: PayoffSet, support, probs) -> "PayoffDistribution":
        idx = np.asarray(support, dtype=int)
        vals = np.asarray(payoff_set.values, dtype=float)[idx]
        return cls(vals, probs)

    def mean(self) -> float:
        return float(self.values @ self.probs)

    def __repr__(self):
        return f"PayoffDistribution(values={self.values}, probs={self.probs})"


class AnonymousGame(abc.ABC):
    """Payoff model of a large anonymous game.

    Subclasses fix the action set and implement `payoff_channel`, which must
    be deterministic in (action, rho).  `lipschitz` documents a bound on how
    fast expected payoffs move in rho (L1 norm); None means callers should
    fall back to `estimate_lipschitz`.
    """

    action_set: ActionSet
    payoff_set: PayoffSet | None = None
    lipschitz: float | None = None

    @property
    def k(self) -> int:
        return self.action_set.size

    @abc.abstractmethod
    def payoff_channel(self, action: int, rho: ActionDistribution) -> PayoffDistribution:
        """Distribution over payoffs for playing `action` against `rho`."""

    def expected_payoff(self, action: int, rho: ActionDistribution) -> float:
        """Mean of the payoff channel; subclasses may override with a closed form."""
        return self.payoff_channel(action, rho).mean()

    @abc.abstractmethod
    def payoff_bounds(self) -> tuple[float, float]:
        """(min, max) payoff the channel can ever emit."""

    def _check_action(self, action: int):
        if not 0 <= action < self.k:
            raise DimensionError(f"action {action} out of range for {self.k} actions")

    def _check_rho(self, rho: ActionDistribution):
        if rho.k != self.k:
            raise DimensionError(f"distribution over {rho.k} actions, game has {self.k}")


def as_strategy_vector(s, k: int) -> np.ndarray:
    """Coerce a strategy (action index, MixedAction, or distribution) to a weight vector."""
    if isinstance(s, MixedAction):
        return s.vector(k)
    if isinstance(s, ActionDistribution):
        if s.k != k:
            raise DimensionError(f"strategy over {s.k} actions, expected {k}")
        return s.weights
    if isinstance(s, (int, np.integer)):
        if not 0 <= s < k:
            raise DimensionError(f"action {s} out of range for {k} actions")
        w = np.zeros(k)
        w[s] = 1.0
        return w
    return ActionDistribution(s).weights


def utility(s, rho: ActionDistribution, game: AnonymousGame) -> float:
    """Expected utility of strategy s against population distribution rho.

    Exact expectation over both the strategy's mixing and the payoff channel;
    nothing is sampled.
    """
    game._check_rho(rho)
    sv = as_strategy_vector(s, game.k)
    total = 0.0
    for a in np.flatnonzero(sv):
        total += sv[a] * game.expected_payoff(int(a), rho)
    return float(total)


def matching_utility(s, rho: ActionDistribution, matrix) -> float:
    """Bilinear expected payoff when matched against one opponent drawn from rho."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"payoff matrix must be square, got shape {m.shape}")
    k = m.shape[0]
    if rho.k != k:
        raise DimensionError(f"distribution over {rho.k} actions, matrix is {k}x{k}")
    sv = as_strategy_vector(s, k)
    return float(sv @ m @ rho.weights)


def l1_distance(rho1: ActionDistribution, rho2: ActionDistribution) -> float:
    """Sum of absolute componentwise differences; in [0, 2] for distributions."""
    if rho1.k != rho2.k:
        raise DimensionError(f"dimension mismatch: {rho1.k} vs {rho2.k}")
    return float(np.abs(rho1.weights - rho2.weights).sum())


def estimate_lipschitz(game: AnonymousGame, samples: int = 200, rng_seed: int = 0) -> float:
    """Sampled lower bound on the game's Lipschitz constant.

    Draws `samples` independent pairs of distributions uniformly from the
    simplex and returns the largest observed |u(a,rho)-u(a,rho')| / L1 ratio.
    Deterministic given the seed.
    """
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    rng = np.random.default_rng(rng_seed)
    alpha = np.ones(game.k)
    best = 0.0
    for _ in range(samples):
        r1 = ActionDistribution(rng.dirichlet(alpha))
        r2 = ActionDistribution(rng.dirichlet(alpha))
        gap = l1_distance(r1, r2)
        if gap < 1e-12:
            continue
        for a in range(game.k):
            diff = abs(game.expected_payoff(a, r1) - game.expected_payoff(a, r2))
            if diff / gap > best:
                best = diff / gap
    return best
