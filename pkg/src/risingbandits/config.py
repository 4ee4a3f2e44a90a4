"""Flat key = value experiment configuration.

Grammar (diff-friendly, one assignment per line):

    # comment
    key = value            global settings
    [arm]                  starts the next arm block; keys below it
    key = value            belong to that arm until the next [arm]

Global keys: horizon_trials | horizon_budget, growth, smooth_window,
epsilon, policies (comma list), replications, base_seed, and optional
policy parameters (ucb_coefficient, softmax_temperature, thompson_alpha,
thompson_beta).

Arm keys: kind (exponential | power | tabulated | staircase | hpo) plus the
kind's parameters; curve arms accept cost and noise_amplitude, hpo arms
accept objective, dimension, strategy, mean_cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arms import (
    ArmSpec,
    ConfigurationError,
    CurveArmSpec,
    HpoArmSpec,
    InstanceSpec,
    NoisyCurveArmSpec,
)
from .bandit import BanditConfig
from .curves import ExponentialCurve, PowerCurve, StaircaseCurve, TabulatedCurve
from .policies import POLICY_NAMES, Policy, make_policy


@dataclass
class ExperimentConfig:
    instance: InstanceSpec
    bandit: BanditConfig
    policy_names: list[str]
    replications: int = 1
    base_seed: int = 0
    policy_params: dict[str, float] = field(default_factory=dict)

    def build_policies(self) -> list[Policy]:
        out = []
        for name in self.policy_names:
            params = {}
            if name == "ucb" and "ucb_coefficient" in self.policy_params:
                params["exploration_coefficient"] = self.policy_params["ucb_coefficient"]
            if name == "softmax" and "softmax_temperature" in self.policy_params:
                params["temperature"] = self.policy_params["softmax_temperature"]
            if name == "thompson":
                if "thompson_alpha" in self.policy_params:
                    params["prior_alpha"] = self.policy_params["thompson_alpha"]
                if "thompson_beta" in self.policy_params:
                    params["prior_beta"] = self.policy_params["thompson_beta"]
            if name == "rising_bandit":
                params["growth"] = self.bandit.growth
                params["smooth_window"] = self.bandit.smooth_window
            out.append(make_policy(name, **params))
        return out


def _parse_scalar(key: str, raw: str, kind: type) -> float | int:
    try:
        value = kind(raw)
    except ValueError as exc:
        raise ConfigurationError(f"field {key!r}: cannot parse {raw!r} as {kind.__name__}") from exc
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigurationError(f"field {key!r}: value must be finite, got {raw!r}")
    return value


def _parse_blocks(text: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    global_block: dict[str, str] = {}
    arm_blocks: list[dict[str, str]] = []
    current = global_block
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[arm]":
            current = {}
            arm_blocks.append(current)
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value' or '[arm]', got {line!r}")
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not key or not raw:
            raise ConfigurationError(f"line {lineno}: empty key or value")
        if key in current:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        current[key] = raw
    return global_block, arm_blocks


def _build_arm(block: dict[str, str], index: int) -> ArmSpec:
    block = dict(block)

    def take(key: str, kind: type, default=None):
        if key not in block:
            if default is None:
                raise ConfigurationError(f"arm {index}: missing field {key!r}")
            return default
        return _parse_scalar(f"arm {index}.{key}", block.pop(key), kind)

    kind = block.pop("kind", None)
    if kind is None:
        raise ConfigurationError(f"arm {index}: missing field 'kind'")
    try:
        if kind == "hpo":
            spec: ArmSpec = HpoArmSpec(
                objective=block.pop("objective", "sphere"),
                dimension=int(take("dimension", int, 2)),
                strategy=block.pop("strategy", "random"),
                mean_cost=float(take("mean_cost", float, 1.0)),
            )
            if block:
                raise ConfigurationError(f"arm {index}: unknown fields {sorted(block)}")
            return spec
        if kind == "exponential":
            curve = ExponentialCurve(
                limit=float(take("limit", float)),
                initial=float(take("initial", float)),
                decay=float(take("decay", float)),
            )
        elif kind == "power":
            curve = PowerCurve(
                limit=float(take("limit", float)),
                scale=float(take("scale", float)),
                exponent=float(take("exponent", float)),
            )
        elif kind == "tabulated":
            raw = block.pop("values", None)
            if raw is None:
                raise ConfigurationError(f"arm {index}: missing field 'values'")
            curve = TabulatedCurve([float(v) for v in raw.split(",")])
        elif kind == "staircase":
            curve = StaircaseCurve(
                base=TabulatedCurve([float(take("initial", float)), float(take("limit", float))]),
                plateau_length=int(take("plateau_length", int)),
                jump_fraction=float(take("jump_fraction", float)),
            )
        else:
            raise ConfigurationError(f"arm {index}: unknown kind {kind!r}")
        cost = float(take("cost", float, 1.0))
        noise = float(take("noise_amplitude", float, 0.0))
        if block:
            raise ConfigurationError(f"arm {index}: unknown fields {sorted(block)}")
        if noise > 0.0:
            return NoisyCurveArmSpec(curve, noise_amplitude=noise, cost=cost)
        return CurveArmSpec(curve, cost=cost)
    except ConfigurationError:
        raise
    except ValueError as exc:
        raise ConfigurationError(f"arm {index}: {exc}") from exc


def parse_experiment(text: str) -> ExperimentConfig:
    global_block, arm_blocks = _parse_blocks(text)
    if not arm_blocks:
        raise ConfigurationError("configuration defines no [arm] blocks")

    trials = budget = None
    if "horizon_trials" in global_block:
        trials = int(_parse_scalar("horizon_trials", global_block.pop("horizon_trials"), int))
    if "horizon_budget" in global_block:
        budget = float(_parse_scalar("horizon_budget", global_block.pop("horizon_budget"), float))
    bandit = BanditConfig(
        trials=trials,
        budget=budget,
        growth=global_block.pop("growth", "last"),
        smooth_window=int(_parse_scalar("smooth_window", global_block.pop("smooth_window", "7"), int)),
        epsilon=float(_parse_scalar("epsilon", global_block.pop("epsilon", "1e-12"), float)),
    )

    raw_policies = global_block.pop("policies", "rising_bandit")
    policy_names = [name.strip() for name in raw_policies.split(",") if name.strip()]
    for name in policy_names:
        if name not in POLICY_NAMES:
            raise ConfigurationError(
                f"field 'policies': unknown policy {name!r}, expected one of {POLICY_NAMES}"
            )

    replications = int(_parse_scalar("replications", global_block.pop("replications", "1"), int))
    if replications < 1:
        raise ConfigurationError(f"field 'replications': must be >= 1, got {replications}")
    base_seed = int(_parse_scalar("base_seed", global_block.pop("base_seed", "0"), int))

    policy_params = {}
    for key in ("ucb_coefficient", "softmax_temperature", "thompson_alpha", "thompson_beta"):
        if key in global_block:
            policy_params[key] = float(_parse_scalar(key, global_block.pop(key), float))
    if global_block:
        raise ConfigurationError(f"unknown global fields {sorted(global_block)}")

    instance = InstanceSpec([_build_arm(block, i) for i, block in enumerate(arm_blocks, start=1)])
    return ExperimentConfig(
        instance=instance,
        bandit=bandit,
        policy_names=policy_names,
        replications=replications,
        base_seed=base_seed,
        policy_params=policy_params,
    )


def load_experiment(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_experiment(handle.read())
