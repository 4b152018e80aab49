"""Classical benchmark schedulers: MARL, IQL, DQN, and Random."""
from __future__ import annotations

import numpy as np

from .core import EpisodeBatch, TrainingConfig, epsilon, select_action, td_errors
from .nets import Mlp, softmax
from .optim import Adam
from .quantum import ClassicalCritic


class ClassicalActor:
    """Feed-forward policy: two ReLU hidden layers, normalized-exponential output."""

    def __init__(self, obs_dim: int, n_actions: int, hidden: int,
                 rng: np.random.Generator, lr: float, log_prob_clamp: float = 1e-12):
        self.net = Mlp((obs_dim, hidden, hidden, n_actions), rng)
        self.opt = Adam(len(self.net.params), lr)
        self.log_prob_clamp = log_prob_clamp

    def probabilities(self, features: np.ndarray) -> np.ndarray:
        logits, _ = self.net.forward(features)
        return softmax(logits)[0]

    def update(self, obs: np.ndarray, actions: np.ndarray, deltas: np.ndarray) -> None:
        batch = len(actions)
        if batch == 0:
            return
        logits, cache = self.net.forward(obs)
        probs = softmax(logits)
        onehot = np.zeros_like(probs)
        onehot[np.arange(batch), actions] = 1.0
        # descend the negated TD-weighted log-likelihood
        d_logits = -(deltas / batch)[:, None] * (onehot - probs)
        grad = self.net.backward(cache, d_logits)
        self.net.params = self.opt.step(self.net.params, grad)

    def state_dict(self) -> dict:
        return {"sizes": list(self.net.sizes), "params": self.net.params.tolist(),
                "optimizer": self.opt.state_dict()}

    def load_state_dict(self, data: dict) -> None:
        self.net.params = np.array(data["params"])
        self.opt = Adam.from_state_dict(data["optimizer"])


class MarlTeam:
    """Classical actors with the centralized classical critic."""

    algo = "marl"

    def __init__(self, n_gs: int, n_devices: int, obs_dim: int, state_dim: int,
                 config: TrainingConfig, rng: np.random.Generator):
        self.config = config
        n_actions = 2 ** n_devices
        self.actors = [ClassicalActor(obs_dim, n_actions, config.hidden_width, rng,
                                      config.actor_lr, config.log_prob_clamp)
                       for _ in range(n_gs)]
        self.critic = ClassicalCritic(state_dim, config.hidden_width, rng,
                                      config.critic_lr)

    def begin_epoch(self, epoch: int) -> None:
        pass

    def act(self, obs: np.ndarray, rng: np.random.Generator,
            greedy: bool = False) -> list[int]:
        return [select_action(actor.probabilities(obs[i]), rng, greedy)
                for i, actor in enumerate(self.actors)]

    def update(self, batch: EpisodeBatch, rng: np.random.Generator) -> None:
        deltas = td_errors(self.critic, batch, self.config.gamma)
        self.critic.update_from_td(batch.states, deltas)
        for i, actor in enumerate(self.actors):
            actor.update(batch.obs[:, i, :], batch.actions[:, i], deltas)

    def state_dict(self) -> dict:
        return {"actors": [a.state_dict() for a in self.actors],
                "critic": self.critic.state_dict()}

    def load_state_dict(self, data: dict) -> None:
        for actor, blob in zip(self.actors, data["actors"]):
            actor.load_state_dict(blob)
        self.critic.load_state_dict(data["critic"])


class QNetwork:
    """Per-station action-value network for the independent learners."""

    def __init__(self, obs_dim: int, n_actions: int, hidden: int,
                 rng: np.random.Generator, lr: float):
        self.net = Mlp((obs_dim, hidden, hidden, n_actions), rng)
        self.opt = Adam(len(self.net.params), lr)
        self.n_actions = n_actions

    def q_values(self, obs: np.ndarray) -> np.ndarray:
        out, _ = self.net.forward(obs)
        return out

    def update_towards(self, obs: np.ndarray, actions: np.ndarray,
                       targets: np.ndarray) -> None:
        batch = len(actions)
        q, cache = self.net.forward(obs)
        d_out = np.zeros_like(q)
        idx = np.arange(batch)
        d_out[idx, actions] = 2.0 * (q[idx, actions] - targets) / batch
        grad = self.net.backward(cache, d_out)
        self.net.params = self.opt.step(self.net.params, grad)

    def state_dict(self) -> dict:
        return {"sizes": list(self.net.sizes), "params": self.net.params.tolist(),
                "optimizer": self.opt.state_dict()}

    def load_state_dict(self, data: dict) -> None:
        self.net.params = np.array(data["params"])
        self.opt = Adam.from_state_dict(data["optimizer"])


class IqlTeam:
    """Independent Q-learners: each station trains on its own rewards,
    no replay and no target snapshot."""

    algo = "iql"

    def __init__(self, n_gs: int, n_devices: int, obs_dim: int, state_dim: int,
                 config: TrainingConfig, rng: np.random.Generator):
        self.config = config
        self.n_actions = 2 ** n_devices
        self.nets = [QNetwork(obs_dim, self.n_actions, config.hidden_width, rng,
                              config.actor_lr) for _ in range(n_gs)]
        self._epsilon = config.epsilon_init

    def begin_epoch(self, epoch: int) -> None:
        self._epsilon = epsilon(epoch, self.config)

    def act(self, obs: np.ndarray, rng: np.random.Generator,
            greedy: bool = False) -> list[int]:
        actions = []
        for i, net in enumerate(self.nets):
            if not greedy and rng.random() < self._epsilon:
                actions.append(int(rng.integers(0, self.n_actions)))
            else:
                actions.append(int(np.argmax(net.q_values(obs[i])[0])))
        return actions

    def update(self, batch: EpisodeBatch, rng: np.random.Generator) -> None:
        gamma = self.config.gamma
        for i, net in enumerate(self.nets):
            next_q = net.q_values(batch.next_obs[:, i, :]).max(axis=1)
            targets = batch.rewards[:, i] + gamma * next_q * (1.0 - batch.dones)
            net.update_towards(batch.obs[:, i, :], batch.actions[:, i], targets)

    def state_dict(self) -> dict:
        return {"nets": [n.state_dict() for n in self.nets]}

    def load_state_dict(self, data: dict) -> None:
        for net, blob in zip(self.nets, data["nets"]):
            net.load_state_dict(blob)


class DqnTeam:
    """Per-station DQN: replay buffer plus a periodically synced target snapshot."""

    algo = "dqn"

    def __init__(self, n_gs: int, n_devices: int, obs_dim: int, state_dim: int,
                 config: TrainingConfig, rng: np.random.Generator):
        self.config = config
        self.n_gs = n_gs
        self.n_actions = 2 ** n_devices
        self.nets = [QNetwork(obs_dim, self.n_actions, config.hidden_width, rng,
                              config.actor_lr) for _ in range(n_gs)]
        self.target_params = [np.array(n.net.params) for n in self.nets]
        self.replay: list[tuple] = []   # rows: (obs, action, reward, next_obs, done) per gs
        self._epsilon = config.epsilon_init

    def begin_epoch(self, epoch: int) -> None:
        self._epsilon = epsilon(epoch, self.config)
        if epoch % self.config.target_sync_epochs == 0:
            self.target_params = [np.array(n.net.params) for n in self.nets]

    def act(self, obs: np.ndarray, rng: np.random.Generator,
            greedy: bool = False) -> list[int]:
        actions = []
        for i, net in enumerate(self.nets):
            if not greedy and rng.random() < self._epsilon:
                actions.append(int(rng.integers(0, self.n_actions)))
            else:
                actions.append(int(np.argmax(net.q_values(obs[i])[0])))
        return actions

    def _target_q(self, i: int, obs: np.ndarray) -> np.ndarray:
        saved = self.nets[i].net.params
        self.nets[i].net.params = self.target_params[i]
        out = self.nets[i].q_values(obs)
        self.nets[i].net.params = saved
        return out

    def update(self, batch: EpisodeBatch, rng: np.random.Generator) -> None:
        for t in range(len(batch)):
            self.replay.append((batch.obs[t], batch.actions[t], batch.rewards[t],
                                batch.next_obs[t], batch.dones[t]))
        if len(self.replay) > self.config.replay_capacity:
            del self.replay[:len(self.replay) - self.config.replay_capacity]
        size = min(self.config.batch_size, len(self.replay))
        picks = rng.choice(len(self.replay), size=size,
                           replace=len(self.replay) < self.config.batch_size)
        gamma = self.config.gamma
        for i, net in enumerate(self.nets):
            obs = np.stack([self.replay[p][0][i] for p in picks])
            actions = np.array([self.replay[p][1][i] for p in picks])
            rewards = np.array([self.replay[p][2][i] for p in picks])
            next_obs = np.stack([self.replay[p][3][i] for p in picks])
            dones = np.array([self.replay[p][4] for p in picks])
            next_q = self._target_q(i, next_obs).max(axis=1)
            targets = rewards + gamma * next_q * (1.0 - dones)
            net.update_towards(obs, actions, targets)

    def state_dict(self) -> dict:
        return {"nets": [n.state_dict() for n in self.nets],
                "targets": [p.tolist() for p in self.target_params],
                "replay": [[row[0].tolist(), row[1].tolist(), row[2].tolist(),
                            row[3].tolist(), float(row[4])] for row in self.replay]}

    def load_state_dict(self, data: dict) -> None:
        for net, blob in zip(self.nets, data["nets"]):
            net.load_state_dict(blob)
        self.target_params = [np.array(p) for p in data["targets"]]
        self.replay = [(np.array(o), np.array(a), np.array(r), np.array(no), d)
                       for o, a, r, no, d in data["replay"]]


class RandomTeam:
    """Uniform sampling over the joint action space (the no-learning floor)."""

    algo = "random"

    def __init__(self, n_gs: int, n_devices: int, obs_dim: int, state_dim: int,
                 config: TrainingConfig, rng: np.random.Generator):
        self.n_gs = n_gs
        self.n_actions = 2 ** n_devices

    def begin_epoch(self, epoch: int) -> None:
        pass

    def act(self, obs: np.ndarray, rng: np.random.Generator,
            greedy: bool = False) -> list[int]:
        return [int(rng.integers(0, self.n_actions)) for _ in range(self.n_gs)]

    def update(self, batch: EpisodeBatch, rng: np.random.Generator) -> None:
        pass

    def state_dict(self) -> dict:
        return {}

    def load_state_dict(self, data: dict) -> None:
        pass
