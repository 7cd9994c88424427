"""Experiment config files: flat `section.key = value` text, documented
defaults for every key, unknown keys rejected."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .engine import RunConfig


class ConfigError(ValueError):
    """Malformed config text, unknown key, or bad value."""


def _parse_int(s: str) -> int:
    return int(s, 10)


def _parse_float(s: str) -> float:
    return float(s)


def _parse_str(s: str) -> str:
    return s


def _parse_int_list(s: str) -> list[int]:
    return [int(tok, 10) for tok in s.replace(",", " ").split()]


def _parse_str_list(s: str) -> list[str]:
    return [tok for tok in s.replace(",", " ").split()]


def _optional(parser):
    return lambda s: None if s == "" else parser(s)


# key -> (parser, default, RunConfig field or sweep axis)
CONFIG_KEYS = {
    "game.kind": (_parse_str, "contribution", "game"),
    "game.penalty_n": (_parse_int, 20, "penalty_n"),
    "game.matrix_path": (_optional(_parse_str), None, "matrix_path"),
    "learner.kind": (_parse_str, "stage", "learner"),
    "learner.explore": (_parse_float, 0.05, "explore"),
    "learner.stage_len": (_optional(_parse_int), None, "stage_len"),
    "learner.mu": (_optional(_parse_float), None, "mu"),
    "learner.delta": (_parse_float, 0.05, "delta"),
    "sim.mode": (_parse_str, "meanfield", "mode"),
    "sim.n": (_parse_int, 100, "n"),
    "sim.rounds": (_parse_int, 3000, "rounds"),
    "sim.churn_rate": (_parse_float, 0.0, "churn_rate"),
    "sim.fixed_fraction": (_parse_float, 0.0, "fixed_fraction"),
    "sim.fixed_base": (_parse_int, 0, "fixed_base"),
    "sim.fixed_explore": (_parse_float, 0.0, "fixed_explore"),
    "sim.seed": (_parse_int, 0, "seed"),
    "sim.target": (_parse_int, 8, "target"),
    "sim.metrics_eta": (_parse_float, 1.0, "metrics_eta"),
    "sweep.populations": (_parse_int_list, None, None),
    "sweep.seeds": (_parse_int_list, None, None),
    "sweep.learners": (_parse_str_list, None, None),
}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """key -> parsed value for every key in CONFIG_KEYS, defaults filled in."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown config key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        parser = CONFIG_KEYS[key][0]
        try:
            values[key] = parser(val)
        except (ValueError, TypeError):
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {val!r}") from None
    for key, (_, default, _) in CONFIG_KEYS.items():
        values.setdefault(key, default)
    return values


@dataclass(frozen=True)
class ExperimentSpec:
    """A base run plus the sweep grid (populations x learner kinds x seeds)."""

    base: RunConfig
    populations: tuple[int, ...]
    learners: tuple[str, ...]
    seeds: tuple[int, ...]

    def __post_init__(self):
        if not self.populations or not self.learners or not self.seeds:
            raise ConfigError("sweep axes must be nonempty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("sweep.seeds: seeds must be distinct")

    def runs(self):
        """All (n, learner, seed, RunConfig) cells of the grid, in order."""
        for n in self.populations:
            for kind in self.learners:
                for seed in self.seeds:
                    yield n, kind, seed, replace(self.base, n=n, learner=kind, seed=seed)

    def __len__(self):
        return len(self.populations) * len(self.learners) * len(self.seeds)


def spec_from_values(values: dict) -> ExperimentSpec:
    kwargs = {}
    for key, (_, _, field) in CONFIG_KEYS.items():
        if field is not None:
            kwargs[field] = values[key]
    try:
        base = RunConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    pops = values["sweep.populations"] or [base.n]
    learners = values["sweep.learners"] or [base.learner]
    seeds = values["sweep.seeds"] if values["sweep.seeds"] is not None else [base.seed]
    spec = ExperimentSpec(base, tuple(pops), tuple(learners), tuple(seeds))
    try:
        for _ in spec.runs():  # force construction: every cell must validate
            pass
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return spec


def load_experiment(path) -> ExperimentSpec:
    """Parse a config file into an ExperimentSpec; every cell is validated."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    values = parse_config_text(text, source=str(path))
    return spec_from_values(values)
