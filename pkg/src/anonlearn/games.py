"""Concrete game library: the 20-action contribution game and matrix games."""

from __future__ import annotations

import importlib.resources

import numpy as np

from .core import (
    ActionDistribution,
    ActionSet,
    AnonymousGame,
    DimensionError,
    PayoffDistribution,
    PayoffSet,
)

CONTRIBUTION_LEVELS = 20

MODES = ("meanfield", "matching")


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def contribution_cost(x: int, penalty_n: int = 20) -> float:
    """Cost of contributing at level x.

    Zero at 0, one at 1, (x-1)^2 through level 8, then x^2 plus a flat
    penalty of 2*penalty_n for over-contribution.
    """
    if not 0 <= x < CONTRIBUTION_LEVELS:
        raise ValueError(f"contribution level {x} out of range 0..{CONTRIBUTION_LEVELS - 1}")
    if penalty_n < 0:
        raise ValueError(f"penalty_n must be nonnegative, got {penalty_n}")
    if x == 0:
        return 0.0
    if x == 1:
        return 1.0
    if x <= 8:
        return float((x - 1) ** 2)
    return float(x * x + 2 * penalty_n)


def contribution_utility(x: int, y: float, penalty_n: int = 20) -> float:
    """Utility 2*x*y - c(x) of contributing x when the others' level is y."""
    if y < 0:
        raise ValueError(f"mean contribution y must be nonnegative, got {y}")
    return 2.0 * x * y - contribution_cost(x, penalty_n)


class ContributionGame(AnonymousGame):
    """Collective-contribution game on levels 0..19.

    An agent contributing x against a population whose mean contribution is y
    earns 2*x*y - c(x).  In mean-field mode the payoff channel is a point mass
    at that exact value, so the globally-finite payoff set is replaced by a
    per-evaluation singleton (payoff_set is None).  `mode` only tags how a
    simulator should realize payoffs; expected utilities are identical in both
    modes.
    """

    def __init__(self, penalty_n: int = 20, mode: str = "meanfield"):
        _check_mode(mode)
        if penalty_n < 0:
            raise ValueError(f"penalty_n must be nonnegative, got {penalty_n}")
        self.penalty_n = penalty_n
        self.mode = mode
        self.action_set = ActionSet(CONTRIBUTION_LEVELS)
        self._levels = np.arange(CONTRIBUTION_LEVELS, dtype=float)
        self._costs = np.array(
            [contribution_cost(x, penalty_n) for x in range(CONTRIBUTION_LEVELS)]
        )
        # |u(a,rho)-u(a,rho')| = 2a|mean(rho)-mean(rho')| and the mean moves by
        # at most (range/2)*L1, so K = 2*19*9.5.
        self.lipschitz = 2.0 * 19.0 * 9.5
        self.payoff_set = None

    def mean_contribution(self, rho: ActionDistribution) -> float:
        self._check_rho(rho)
        return float(rho.weights @ self._levels)

    def expected_payoff(self, action: int, rho: ActionDistribution) -> float:
        self._check_action(action)
        return 2.0 * action * self.mean_contribution(rho) - self._costs[action]

    def payoff_channel(self, action: int, rho: ActionDistribution) -> PayoffDistribution:
        return PayoffDistribution.point_mass(self.expected_payoff(action, rho))

    def payoff_bounds(self) -> tuple[float, float]:
        # Utility is linear in y, so extremes sit at y in {0, 19}.
        lo = min(contribution_utility(x, y, self.penalty_n)
                 for x in range(CONTRIBUTION_LEVELS) for y in (0.0, 19.0))
        hi = max(contribution_utility(x, y, self.penalty_n)
                 for x in range(CONTRIBUTION_LEVELS) for y in (0.0, 19.0))
        return lo, hi

    def payoff_matrix(self) -> np.ndarray:
        """Two-player matrix view p[x][x'] = 2*x*x' - c(x), used for random matching."""
        x = self._levels[:, None]
        xp = self._levels[None, :]
        return 2.0 * x * xp - self._costs[:, None]


class MatrixGame(AnonymousGame):
    """Anonymous game induced by a symmetric two-player payoff matrix.

    matrix[a][a'] is the payoff to an agent playing a whose opponent plays a'.
    In matching mode the channel is the honest partner lottery (payoff
    matrix[a][a'] with probability rho[a']); in mean-field mode it is a point
    mass at the expected payoff.  Expected utilities agree in both modes and
    equal `matching_utility`.
    """

    def __init__(self, matrix, mode: str = "meanfield", labels=None):
        _check_mode(mode)
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"payoff matrix must be square, got shape {m.shape}")
        if not np.isfinite(m).all():
            raise ValueError("payoff matrix entries must be finite")
        m = m.copy()
        m.setflags(write=False)
        self.matrix = m
        self.mode = mode
        self.action_set = ActionSet(m.shape[0], tuple(labels) if labels else None)
        self.lipschitz = float(np.abs(m).max())
        if mode == "matching":
            self.payoff_set = PayoffSet(tuple(np.unique(m)))
        else:
            self.payoff_set = None  # point masses vary with rho

    def expected_payoff(self, action: int, rho: ActionDistribution) -> float:
        self._check_action(action)
        self._check_rho(rho)
        return float(self.matrix[action] @ rho.weights)

    def payoff_channel(self, action: int, rho: ActionDistribution) -> PayoffDistribution:
        self._check_action(action)
        self._check_rho(rho)
        if self.mode == "meanfield":
            return PayoffDistribution.point_mass(self.expected_payoff(action, rho))
        values = np.asarray(self.payoff_set.values)
        idx = np.searchsorted(values, self.matrix[action])
        probs = np.bincount(idx, weights=rho.weights, minlength=values.size)
        keep = probs > 0.0
        return PayoffDistribution(values[keep], probs[keep])

    def payoff_bounds(self) -> tuple[float, float]:
        return float(self.matrix.min()), float(self.matrix.max())

    def payoff_matrix(self) -> np.ndarray:
        return self.matrix


def load_matrix(path) -> np.ndarray:
    """Read a payoff matrix from a plain-text file.

    Format: one row per line, entries whitespace-separated; blank lines and
    lines starting with '#' are ignored.  The matrix must be square.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                rows.append([float(tok) for tok in stripped.split()])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad matrix entry ({exc})") from None
    if not rows:
        raise ValueError(f"{path}: no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"{path}: ragged rows, expected {width} entries per row")
    m = np.array(rows)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{path}: matrix must be square, got {m.shape}")
    return m


def builtin_matrix(name: str) -> np.ndarray:
    """Load one of the bundled matrices: 'prisoners_dilemma' or 'climbing'."""
    resource = importlib.resources.files("anonlearn.data").joinpath(f"{name}.txt")
    if not resource.is_file():
        raise ValueError(f"no bundled matrix named {name!r}")
    with importlib.resources.as_file(resource) as path:
        return load_matrix(path)


def prisoners_dilemma(mode: str = "meanfield") -> MatrixGame:
    """Standard prisoner's dilemma (R=3, S=0, T=5, P=1); actions 0=C, 1=D."""
    return MatrixGame(builtin_matrix("prisoners_dilemma"), mode, labels=("C", "D"))


def climbing_game(mode: str = "meanfield") -> MatrixGame:
    """Three-action climbing game with the literature-standard common payoffs."""
    return MatrixGame(builtin_matrix("climbing"), mode)
