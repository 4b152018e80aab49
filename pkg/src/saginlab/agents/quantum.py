"""Quantum actors with projection-valued readout, and the value critics.

Each station's actor runs a parameterized circuit with one qubit per device
slot; the basis-probability readout turns q qubits into all 2^q joint
scheduling probabilities, which is where the logarithmic qubit saving comes
from. Policy-gradient and TD updates differentiate the circuits with the
parameter-shift rule; the classical chain-rule factors (1/p for the log, the
affine readout for the value) are folded into frozen per-sample weights so a
single batched shift pass yields the full gradient.
"""
from __future__ import annotations

import numpy as np

from ..qcircuit import (
    CircuitLayout,
    basis_probabilities,
    forward,
    forward_many,
    layout_to_manifest,
    manifest_to_layout,
    parameter_shift_gradient,
    pauli_z_signs,
    pauli_z_weights,
    standard_layout,
)
from .core import EpisodeBatch, TrainingConfig, select_action, td_errors
from .nets import Mlp
from .optim import Adam


class QuantumActor:
    """PVM policy over 2^q joint actions for one station."""

    def __init__(self, layout: CircuitLayout, rng: np.random.Generator,
                 lr: float, half_factor: bool = True, log_prob_clamp: float = 1e-12):
        self.layout = layout
        self.params = rng.uniform(0.0, 2.0 * np.pi, layout.parameter_count)
        self.opt = Adam(layout.parameter_count, lr)
        self.half_factor = half_factor
        self.log_prob_clamp = log_prob_clamp

    @property
    def n_actions(self) -> int:
        return 2 ** self.layout.qubit_count

    def probabilities(self, features: np.ndarray) -> np.ndarray:
        return basis_probabilities(forward(self.layout, self.params, features))

    def update(self, obs: np.ndarray, actions: np.ndarray, deltas: np.ndarray) -> None:
        """Ascend the TD-weighted log-likelihood of the taken actions."""
        batch = len(actions)
        if batch == 0:
            return
        probs = basis_probabilities(forward(self.layout, self.params, obs))
        taken = np.clip(probs[np.arange(batch), actions], self.log_prob_clamp, None)
        weights = np.zeros_like(probs)
        weights[np.arange(batch), actions] = deltas / (batch * taken)
        grad = parameter_shift_gradient(self.layout, self.params, obs, weights,
                                        include_half_factor=self.half_factor)
        self.params = self.opt.step(self.params, -grad)

    def state_dict(self) -> dict:
        return {"manifest": layout_to_manifest(self.layout, self.params),
                "optimizer": self.opt.state_dict()}

    def load_state_dict(self, data: dict) -> None:
        layout, params = manifest_to_layout(data["manifest"])
        if layout != self.layout:
            raise ValueError("checkpoint circuit does not match this actor's layout")
        self.params = params
        self.opt = Adam.from_state_dict(data["optimizer"])


class QuantumCritic:
    """Centralized value estimator: circuit over the ground-truth state with an
    affine readout of the per-qubit Pauli-Z expectations."""

    def __init__(self, layout: CircuitLayout, rng: np.random.Generator,
                 lr: float, half_factor: bool = True):
        self.layout = layout
        q = layout.qubit_count
        self.params = np.concatenate([
            rng.uniform(0.0, 2.0 * np.pi, layout.parameter_count),
            rng.normal(0.0, 0.1, q),   # readout scales
            [0.0],                     # readout offset
        ])
        self.opt = Adam(len(self.params), lr)
        self.half_factor = half_factor
        self._signs = np.stack([pauli_z_signs(q, k) for k in range(q)])  # (q, 2^q)

    def _split(self):
        p = self.layout.parameter_count
        q = self.layout.qubit_count
        return self.params[:p], self.params[p:p + q], self.params[p + q]

    def value_batch(self, states: np.ndarray) -> np.ndarray:
        theta, coeffs, offset = self._split()
        probs = basis_probabilities(forward(self.layout, theta, states))
        z = probs @ self._signs.T
        return z @ coeffs + offset

    def value(self, state: np.ndarray) -> float:
        return float(self.value_batch(np.atleast_2d(state))[0])

    def update_from_td(self, states: np.ndarray, deltas: np.ndarray) -> None:
        """Descend the mean squared TD error, semi-gradient convention."""
        batch = len(deltas)
        if batch == 0:
            return
        theta, coeffs, _ = self._split()
        probs = basis_probabilities(forward(self.layout, theta, states))
        z = probs @ self._signs.T                       # (B, q)
        # d(mean delta^2)/dV_b = -2*delta_b/B; readout weights are frozen for the shift
        dv = -2.0 * deltas / batch
        weights = dv[:, None] * pauli_z_weights(self.layout.qubit_count, coeffs)[None, :]
        grad_theta = parameter_shift_gradient(self.layout, theta, states, weights,
                                              include_half_factor=self.half_factor)
        grad_coeffs = dv @ z
        grad_offset = dv.sum()
        grad = np.concatenate([grad_theta, grad_coeffs, [grad_offset]])
        self.params = self.opt.step(self.params, grad)

    def state_dict(self) -> dict:
        p = self.layout.parameter_count
        return {"manifest": layout_to_manifest(self.layout, self.params[:p]),
                "readout": self.params[p:].tolist(),
                "optimizer": self.opt.state_dict()}

    def load_state_dict(self, data: dict) -> None:
        layout, theta = manifest_to_layout(data["manifest"])
        if layout != self.layout:
            raise ValueError("checkpoint circuit does not match this critic's layout")
        self.params = np.concatenate([theta, np.array(data["readout"])])
        self.opt = Adam.from_state_dict(data["optimizer"])


class ClassicalCritic:
    """MLP value estimator over the same ground-truth features."""

    def __init__(self, state_dim: int, hidden: int, rng: np.random.Generator, lr: float):
        self.net = Mlp((state_dim, hidden, hidden, 1), rng)
        self.opt = Adam(len(self.net.params), lr)

    def value_batch(self, states: np.ndarray) -> np.ndarray:
        out, _ = self.net.forward(states)
        return out[:, 0]

    def value(self, state: np.ndarray) -> float:
        return float(self.value_batch(np.atleast_2d(state))[0])

    def update_from_td(self, states: np.ndarray, deltas: np.ndarray) -> None:
        batch = len(deltas)
        if batch == 0:
            return
        _, cache = self.net.forward(states)
        d_out = (-2.0 * deltas / batch)[:, None]
        grad = self.net.backward(cache, d_out)
        self.net.params = self.opt.step(self.net.params, grad)

    def state_dict(self) -> dict:
        return {"sizes": list(self.net.sizes), "params": self.net.params.tolist(),
                "optimizer": self.opt.state_dict()}

    def load_state_dict(self, data: dict) -> None:
        self.net.params = np.array(data["params"])
        self.opt = Adam.from_state_dict(data["optimizer"])


def build_critic(kind: str, state_dim: int, qubits: int, config: TrainingConfig,
                 rng: np.random.Generator):
    if kind == "quantum":
        layout = standard_layout(qubits, state_dim, config.critic_layers)
        return QuantumCritic(layout, rng, config.critic_lr,
                             half_factor=config.parameter_shift_half_factor)
    if kind == "classical":
        return ClassicalCritic(state_dim, config.hidden_width, rng, config.critic_lr)
    raise ValueError(f"unknown critic kind {kind!r}")


class QmarlTeam:
    """One quantum actor per station plus a centralized critic."""

    algo = "qmarl"

    def __init__(self, n_gs: int, n_devices: int, obs_dim: int, state_dim: int,
                 config: TrainingConfig, rng: np.random.Generator):
        self.config = config
        layout = standard_layout(n_devices, obs_dim, config.actor_layers)
        self.actors = [QuantumActor(layout, rng, config.actor_lr,
                                    half_factor=config.parameter_shift_half_factor,
                                    log_prob_clamp=config.log_prob_clamp)
                       for _ in range(n_gs)]
        self.critic = build_critic(config.critic_kind, state_dim,
                                   config.critic_qubits or n_devices, config, rng)

    def begin_epoch(self, epoch: int) -> None:
        pass

    def act(self, obs: np.ndarray, rng: np.random.Generator,
            greedy: bool = False) -> list[int]:
        # actors share a layout, so all stations run as one stacked pass
        stacked = forward_many(self.actors[0].layout,
                               np.stack([a.params for a in self.actors]), obs)
        probs = basis_probabilities(stacked)
        return [select_action(probs[i], rng, greedy)
                for i in range(len(self.actors))]

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
