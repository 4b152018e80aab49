"""Adaptive-moment (Adam) optimizer over flat parameter vectors."""
from __future__ import annotations

import numpy as np


class Adam:
    """Standard first-moment/second-moment adaptive steps, descent convention."""

    def __init__(self, size: int, lr: float, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        """One descent step; pass the negated gradient to ascend."""
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad ** 2
        m_hat = self.m / (1 - self.beta1 ** self.t)
        v_hat = self.v / (1 - self.beta2 ** self.t)
        return params - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)

    def state_dict(self) -> dict:
        return {"lr": self.lr, "beta1": self.beta1, "beta2": self.beta2,
                "eps": self.eps, "t": self.t,
                "m": self.m.tolist(), "v": self.v.tolist()}

    @classmethod
    def from_state_dict(cls, data: dict) -> "Adam":
        opt = cls(len(data["m"]), lr=data["lr"], beta1=data["beta1"],
                  beta2=data["beta2"], eps=data["eps"])
        opt.t = data["t"]
        opt.m = np.array(data["m"])
        opt.v = np.array(data["v"])
        return opt
