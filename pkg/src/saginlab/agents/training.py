"""Episode-per-epoch training loop with deterministic seeding and checkpoints.

Every random stream of epoch e derives from (run seed, e), so runs are
reproducible bit-for-bit, seeds can roll out in parallel, and a resumed run
continues exactly where the checkpoint left off.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..env.config import ScenarioConfig, observation_scaler, state_scaler
from ..env.sagin import SaginEnv, ScheduleAction, state_feature_vector, step_metric_rows
from .baselines import DqnTeam, IqlTeam, MarlTeam, RandomTeam
from .core import EpisodeBatch, TrainingConfig, Transition
from .quantum import QmarlTeam

ALGORITHMS = {
    "qmarl": QmarlTeam,
    "marl": MarlTeam,
    "iql": IqlTeam,
    "dqn": DqnTeam,
    "random": RandomTeam,
}

HISTORY_COLUMNS = ("epoch", "reward", "normalized_reward", "qos", "capacity",
                   "residual_cubesat", "residual_uav")

CHECKPOINT_FORMAT = "saginlab-checkpoint"
CHECKPOINT_VERSION = 1


def observation_dim(scenario: ScenarioConfig) -> int:
    return 4 + 6 * scenario.n_devices


def build_team(algo: str, scenario: ScenarioConfig, config: TrainingConfig,
               rng: np.random.Generator):
    try:
        team_cls = ALGORITHMS[algo]
    except KeyError:
        raise ValueError(f"unknown algorithm {algo!r}; choose from "
                         f"{sorted(ALGORITHMS)}") from None
    state_dim = 1 + 4 * scenario.n_gs + 6 * scenario.n_devices
    return team_cls(scenario.n_gs, scenario.n_devices, observation_dim(scenario),
                    state_dim, config, rng)


def _epoch_streams(seed: int, epoch: int):
    ss = np.random.SeedSequence([seed, epoch + 1])
    env_ss, act_ss, upd_ss = ss.spawn(3)
    return (np.random.default_rng(env_ss), np.random.default_rng(act_ss),
            np.random.default_rng(upd_ss))


def _scaled_obs(observations, oscaler, cfg) -> np.ndarray:
    return np.stack([oscaler.scale(o.feature_vector(cfg), o.presence_mask())
                     for o in observations])


def run_episode(env: SaginEnv, team, scenario: ScenarioConfig, oscaler, sscaler,
                env_rng, act_rng, greedy: bool = False,
                step_rows=None, episode_index: int = 0):
    """Roll one episode; returns (EpisodeBatch, per-epoch metric dict)."""
    state, observations = env.reset(seed=env_rng)
    obs = _scaled_obs(observations, oscaler, scenario)
    state_feats = sscaler.scale(state_feature_vector(state, scenario))
    transitions = []
    team_rewards = []
    qualities = []
    capacity_ratios = []
    residual_c = []
    residual_u = []
    done = False
    while not done:
        action_idx = team.act(obs, act_rng, greedy=greedy)
        actions = [ScheduleAction.from_index(k, scenario.n_devices)
                   for k in action_idx]
        prev_state = state
        state, observations, breakdowns, done = env.step(actions)
        next_obs = _scaled_obs(observations, oscaler, scenario)
        next_state_feats = sscaler.scale(state_feature_vector(state, scenario))
        rewards = np.array([b.reward for b in breakdowns])
        team_reward = float(rewards.sum())
        transitions.append(Transition(
            obs=obs, state=state_feats, actions=np.array(action_idx),
            rewards=rewards, team_reward=team_reward, next_obs=next_obs,
            next_state=next_state_feats, done=done))
        if step_rows is not None:
            step_rows(step_metric_rows(episode_index, prev_state, breakdowns, scenario))

        team_rewards.append(team_reward)
        qualities.extend(link.quality for b in breakdowns for link in b.links)
        delivered = sum(link.capacity for b in breakdowns for link in b.links)
        limit_sum = float(prev_state.gs_capacity_limit.sum())
        capacity_ratios.append(delivered / limit_sum if limit_sum > 0 else 0.0)
        if scenario.n_cubesat:
            caps = np.array([c.energy_cap_j for c in scenario.cubesats])
            residual_c.append(float(np.mean(state.cubesat_energy / caps)))
        if scenario.n_uav:
            caps = np.array([u.energy_cap_j for u in scenario.uavs])
            residual_u.append(float(np.mean(state.uav_energy / caps)))

        obs = next_obs
        state_feats = next_state_feats

    mean_reward = float(np.mean(team_rewards))
    metrics = {
        "reward": mean_reward,
        "normalized_reward": float(np.clip(mean_reward / scenario.reward_scale, 0.0, 1.0)),
        "qos": float(np.mean(qualities)) if qualities else 0.0,
        "capacity": float(np.mean(capacity_ratios)),
        "residual_cubesat": float(np.mean(residual_c)) if residual_c else 0.0,
        "residual_uav": float(np.mean(residual_u)) if residual_u else 0.0,
    }
    return EpisodeBatch.from_transitions(transitions), metrics


def save_checkpoint(path, algo: str, seed: int, epoch: int, team, history) -> None:
    blob = {"format": CHECKPOINT_FORMAT, "version": CHECKPOINT_VERSION,
            "algo": algo, "seed": seed, "epoch": epoch,
            "team": team.state_dict(), "history": history}
    Path(path).write_text(json.dumps(blob), encoding="utf-8")


def load_checkpoint(path) -> dict:
    blob = json.loads(Path(path).read_text(encoding="utf-8"))
    if blob.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"{path} is not a saginlab checkpoint")
    if blob.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {blob.get('version')}")
    return blob


def train(scenario: ScenarioConfig, algo: str, config: TrainingConfig, seed: int,
          *, step_rows=None, checkpoint_path=None, resume_from=None) -> list[dict]:
    """Train one seed; returns one metrics dict per epoch (HISTORY_COLUMNS keys)."""
    if seed < 0:
        raise ValueError("seeds must be non-negative")
    init_rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    team = build_team(algo, scenario, config, init_rng)
    oscaler = observation_scaler(scenario)
    sscaler = state_scaler(scenario)
    env = SaginEnv(scenario)

    history: list[dict] = []
    start_epoch = 0
    if resume_from is not None:
        blob = load_checkpoint(resume_from)
        if blob["algo"] != algo or blob["seed"] != seed:
            raise ValueError("checkpoint algo/seed do not match this run")
        team.load_state_dict(blob["team"])
        start_epoch = blob["epoch"]
        history = list(blob["history"])

    for epoch in range(start_epoch, config.epochs):
        env_rng, act_rng, upd_rng = _epoch_streams(seed, epoch)
        team.begin_epoch(epoch)
        batch, metrics = run_episode(env, team, scenario, oscaler, sscaler,
                                     env_rng, act_rng, step_rows=step_rows,
                                     episode_index=epoch)
        team.update(batch, upd_rng)
        history.append({"epoch": epoch, **metrics})
        if (checkpoint_path is not None and config.checkpoint_every
                and (epoch + 1) % config.checkpoint_every == 0):
            save_checkpoint(checkpoint_path, algo, seed, epoch + 1, team, history)

    if checkpoint_path is not None:
        save_checkpoint(checkpoint_path, algo, seed, config.epochs, team, history)
    return history
