"""Shared training data structures and scalar helpers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TrainingConfig:
    """Hyperparameters; defaults follow the experiment configuration table."""
    gamma: float = 0.98
    batch_size: int = 64
    epsilon_init: float = 0.275
    epsilon_min: float = 1e-2
    epsilon_anneal: float = 5e-5
    actor_lr: float = 1e-3
    critic_lr: float = 2.5e-4
    epochs: int = 10_000
    actor_layers: int = 3
    critic_layers: int = 3
    critic_qubits: int | None = None     # default: one per device slot
    critic_kind: str = "quantum"         # or "classical"
    hidden_width: int = 64               # baseline MLP width (two hidden layers)
    replay_capacity: int = 10_000
    target_sync_epochs: int = 50
    parameter_shift_half_factor: bool = True
    log_prob_clamp: float = 1e-12
    checkpoint_every: int = 0            # 0 disables periodic checkpoints

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("discount factor must be in (0, 1]")
        if self.actor_lr <= 0 or self.critic_lr <= 0:
            raise ValueError("learning rates must be positive")
        if self.epsilon_min > self.epsilon_init:
            raise ValueError("epsilon floor cannot exceed its initial value")


@dataclass(frozen=True)
class Transition:
    """One step of experience, shared by every learner."""
    obs: np.ndarray            # (n_gs, F) scaled per-station observations
    state: np.ndarray          # (Fs,) scaled ground truth
    actions: np.ndarray        # (n_gs,) action indices
    rewards: np.ndarray        # (n_gs,) per-station rewards
    team_reward: float
    next_obs: np.ndarray
    next_state: np.ndarray
    done: bool


@dataclass
class EpisodeBatch:
    """Column-stacked transitions of one episode."""
    obs: np.ndarray            # (T, n_gs, F)
    states: np.ndarray         # (T, Fs)
    actions: np.ndarray        # (T, n_gs)
    rewards: np.ndarray        # (T, n_gs)
    team_rewards: np.ndarray   # (T,)
    next_obs: np.ndarray       # (T, n_gs, F)
    next_states: np.ndarray    # (T, Fs)
    dones: np.ndarray          # (T,) float

    @classmethod
    def from_transitions(cls, transitions: list[Transition]) -> "EpisodeBatch":
        return cls(
            obs=np.stack([t.obs for t in transitions]),
            states=np.stack([t.state for t in transitions]),
            actions=np.stack([t.actions for t in transitions]),
            rewards=np.stack([t.rewards for t in transitions]),
            team_rewards=np.array([t.team_reward for t in transitions]),
            next_obs=np.stack([t.next_obs for t in transitions]),
            next_states=np.stack([t.next_state for t in transitions]),
            dones=np.array([float(t.done) for t in transitions]),
        )

    def __len__(self) -> int:
        return len(self.team_rewards)


def epsilon(step: int, config: TrainingConfig) -> float:
    """Linearly annealed exploration rate (used by the value-based baselines)."""
    if step < 0:
        raise ValueError("step must be non-negative")
    return max(config.epsilon_min, config.epsilon_init - config.epsilon_anneal * step)


def select_action(probabilities: np.ndarray, rng: np.random.Generator,
                  greedy: bool = False) -> int:
    """Sample an action index from a policy distribution (argmax when greedy)."""
    probs = np.asarray(probabilities, dtype=float)
    if greedy:
        return int(np.argmax(probs))
    return int(rng.choice(len(probs), p=probs / probs.sum()))


def td_error(critic, transition: Transition, gamma: float) -> float:
    """One-step temporal-difference residual using the team reward."""
    v_next = 0.0 if transition.done else float(critic.value(transition.next_state))
    return transition.team_reward + gamma * v_next - float(critic.value(transition.state))


def td_errors(critic, batch: EpisodeBatch, gamma: float) -> np.ndarray:
    values = critic.value_batch(batch.states)
    next_values = critic.value_batch(batch.next_states)
    return batch.team_rewards + gamma * next_values * (1.0 - batch.dones) - values
