"""Learning agents: quantum actor-critic team and the classical baselines."""
from .baselines import ClassicalActor, DqnTeam, IqlTeam, MarlTeam, QNetwork, RandomTeam
from .core import (
    EpisodeBatch,
    TrainingConfig,
    Transition,
    epsilon,
    select_action,
    td_error,
    td_errors,
)
from .nets import Mlp, softmax
from .optim import Adam
from .quantum import (
    ClassicalCritic,
    QmarlTeam,
    QuantumActor,
    QuantumCritic,
    build_critic,
)
from .training import (
    ALGORITHMS,
    HISTORY_COLUMNS,
    build_team,
    load_checkpoint,
    observation_dim,
    run_episode,
    save_checkpoint,
    train,
)

__all__ = [
    "ClassicalActor", "DqnTeam", "IqlTeam", "MarlTeam", "QNetwork", "RandomTeam",
    "EpisodeBatch", "TrainingConfig", "Transition", "epsilon", "select_action",
    "td_error", "td_errors", "Mlp", "softmax", "Adam", "ClassicalCritic",
    "QmarlTeam", "QuantumActor", "QuantumCritic", "build_critic", "ALGORITHMS",
    "HISTORY_COLUMNS", "build_team", "load_checkpoint", "observation_dim",
    "run_episode", "save_checkpoint", "train",
]
