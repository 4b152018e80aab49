"""Minimal ReLU multilayer perceptron with hand-rolled gradients.

Parameters live in one flat vector so a single Adam instance (and the text
checkpoint format) covers the whole network. This is all the baselines need;
the quantum learners never touch it.
"""
from __future__ import annotations

import numpy as np


class Mlp:
    def __init__(self, sizes: tuple[int, ...], rng: np.random.Generator):
        self.sizes = tuple(int(s) for s in sizes)
        chunks = []
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            chunks.append(rng.normal(0.0, np.sqrt(2.0 / fan_in),
                                     size=fan_in * fan_out))
            chunks.append(np.zeros(fan_out))
        self.params = np.concatenate(chunks)

    def _unpack(self, params):
        offset = 0
        weights, biases = [], []
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            weights.append(params[offset:offset + fan_in * fan_out]
                           .reshape(fan_in, fan_out))
            offset += fan_in * fan_out
            biases.append(params[offset:offset + fan_out])
            offset += fan_out
        return weights, biases

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, list]:
        """Returns (output (B, out), cache for backward). ReLU on hidden layers only."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        weights, biases = self._unpack(self.params)
        activations = [x]
        for idx, (w, b) in enumerate(zip(weights, biases)):
            z = activations[-1] @ w + b
            if idx < len(weights) - 1:
                z = np.maximum(z, 0.0)
            activations.append(z)
        return activations[-1], activations

    def backward(self, activations: list, d_out: np.ndarray) -> np.ndarray:
        """Flat gradient of sum(output * d_out) with respect to the parameters."""
        weights, _ = self._unpack(self.params)
        grads_w = [None] * len(weights)
        grads_b = [None] * len(weights)
        delta = np.asarray(d_out, dtype=float)
        for idx in reversed(range(len(weights))):
            grads_w[idx] = activations[idx].T @ delta
            grads_b[idx] = delta.sum(axis=0)
            if idx > 0:
                delta = (delta @ weights[idx].T) * (activations[idx] > 0)
        flat = []
        for gw, gb in zip(grads_w, grads_b):
            flat.append(gw.ravel())
            flat.append(gb)
        return np.concatenate(flat)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)
