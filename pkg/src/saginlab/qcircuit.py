"""Dense statevector simulation of angle-encoded, parameterized circuits.

States are numpy complex arrays whose last axis holds the 2^q amplitudes;
leading axes, when present, are independent batch entries and every gate
application broadcasts over them. Qubit j owns bit j of the basis index
(basis index k has qubit j in |1> iff (k >> j) & 1).

Measurement is exact from amplitudes: Pauli-Z expectations, basis
probabilities (the projection-valued readout that turns q qubits into 2^q
action probabilities), and arbitrary diagonal weightings of the basis
probabilities. Gradients of any such readout with respect to rotation
parameters come from the parameter-shift rule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_QUBITS = 24  # dense amplitudes; 2^24 complex doubles is the sanity ceiling

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
ROTATION_GATES = ("rx", "ry", "rz")
CONTROLLED_GATES = ("cx", "cy", "cz")


class UnsupportedGateError(ValueError):
    """A parameter slot is attached to a gate outside the rotation family."""


def rotation_matrix(name: str, angle) -> np.ndarray:
    """R_gamma(theta) = exp(-i*theta/2 * gamma). ``angle`` may be an array (batched)."""
    angle = np.asarray(angle, dtype=float)
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    out = np.empty(angle.shape + (2, 2), dtype=complex)
    if name == "rx":
        out[..., 0, 0] = c
        out[..., 0, 1] = -1j * s
        out[..., 1, 0] = -1j * s
        out[..., 1, 1] = c
    elif name == "ry":
        out[..., 0, 0] = c
        out[..., 0, 1] = -s
        out[..., 1, 0] = s
        out[..., 1, 1] = c
    elif name == "rz":
        out[..., 0, 0] = np.exp(-1j * angle / 2.0)
        out[..., 0, 1] = 0.0
        out[..., 1, 0] = 0.0
        out[..., 1, 1] = np.exp(1j * angle / 2.0)
    else:
        raise UnsupportedGateError(f"unknown rotation gate {name!r}")
    return out


def qubit_count_of(state: np.ndarray) -> int:
    q = int(round(math.log2(state.shape[-1])))
    if 2 ** q != state.shape[-1]:
        raise ValueError(f"state length {state.shape[-1]} is not a power of two")
    return q


def zero_state(qubit_count: int, batch_shape: tuple = ()) -> np.ndarray:
    """|0...0> amplitudes, optionally replicated over leading batch axes."""
    if not 1 <= qubit_count <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {qubit_count}")
    state = np.zeros(batch_shape + (2 ** qubit_count,), dtype=complex)
    state[..., 0] = 1.0
    return state


def _apply_matrix(state: np.ndarray, mat: np.ndarray, qubit: int, q: int) -> np.ndarray:
    """Apply a 2x2 (or per-batch-entry (...,2,2)) matrix to one qubit of ``state``.

    The reshape splitting out the target bit is contiguous, and the update is
    a single broadcast matmul over the (2, trailing-block) view.
    """
    shape = state.shape
    view = state.reshape(shape[:-1] + (2 ** (q - 1 - qubit), 2, 2 ** qubit))
    if mat.ndim != 2:
        # align per-entry matrices with the two qubit axes for broadcasting
        mat = mat.reshape(mat.shape[:-2] + (1,) * (view.ndim - mat.ndim) + (2, 2))
    return np.matmul(mat, view).reshape(shape)


@lru_cache(maxsize=None)
def _cz_signs(q: int, control: int, target: int) -> np.ndarray:
    idx = np.arange(2 ** q)
    both = ((idx >> control) & 1) & ((idx >> target) & 1)
    signs = np.where(both == 1, -1.0, 1.0)
    signs.flags.writeable = False
    return signs


@lru_cache(maxsize=None)
def _controlled_indices(q: int, control: int, target: int):
    idx = np.arange(2 ** q)
    ctrl_set = ((idx >> control) & 1) == 1
    t0 = idx[ctrl_set & (((idx >> target) & 1) == 0)]
    t1 = t0 | (1 << target)
    t0.flags.writeable = False
    t1.flags.writeable = False
    return t0, t1


def _apply_controlled(state: np.ndarray, name: str, control: int, target: int,
                      q: int) -> np.ndarray:
    if name == "cz":
        return state * _cz_signs(q, control, target)
    t0, t1 = _controlled_indices(q, control, target)
    u = _PAULI[name[1]]
    out = state.copy()
    s0 = state[..., t0]
    s1 = state[..., t1]
    out[..., t0] = u[0, 0] * s0 + u[0, 1] * s1
    out[..., t1] = u[1, 0] * s0 + u[1, 1] * s1
    return out


def apply_gate(state: np.ndarray, gate: str, targets, angle: float | None = None) -> np.ndarray:
    """Apply one gate and return the new state (input untouched).

    ``gate`` is one of x, y, z, rx, ry, rz, cx, cy, cz. Controlled gates take
    ``targets = (control, target)``; the rest take a single qubit index.
    """
    q = qubit_count_of(state)
    if isinstance(targets, (int, np.integer)):
        targets = (int(targets),)
    targets = tuple(int(t) for t in targets)
    for t in targets:
        if not 0 <= t < q:
            raise IndexError(f"qubit {t} out of range for {q}-qubit state")
    if len(set(targets)) != len(targets):
        raise IndexError(f"targets must be distinct, got {targets}")

    name = gate.lower()
    if name in _PAULI:
        (target,) = targets
        return _apply_matrix(state, _PAULI[name], target, q)
    if name in ROTATION_GATES:
        if angle is None:
            raise ValueError(f"{name} requires an angle")
        (target,) = targets
        return _apply_matrix(state, rotation_matrix(name, angle), target, q)
    if name in CONTROLLED_GATES:
        control, target = targets
        return _apply_controlled(state, name, control, target, q)
    raise ValueError(f"unknown gate {gate!r}")


# --- circuit layout ---------------------------------------------------------

@dataclass(frozen=True)
class EncoderStep:
    """One feature-driven rotation in the encoding pass."""
    qubit: int
    feature: int
    gate: str = "ry"


@dataclass(frozen=True)
class LayerGate:
    """One gate of a trainable layer: a slotted/fixed rotation or an entangler."""
    gate: str
    targets: tuple[int, ...]
    slot: int | None = None
    angle: float | None = None


@dataclass(frozen=True)
class CircuitLayout:
    """Gate program: encoding plan plus trainable layers.

    Parameter slots must be unique and dense over [0, parameter_count), and
    may only appear on rotation gates.
    """
    qubit_count: int
    feature_count: int
    encoder: tuple[EncoderStep, ...]
    layers: tuple[tuple[LayerGate, ...], ...]

    def __post_init__(self):
        if not 1 <= self.qubit_count <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}]")
        if self.feature_count < 1:
            raise ValueError("feature count must be at least 1")
        for step in self.encoder:
            if step.gate not in ROTATION_GATES:
                raise UnsupportedGateError(f"encoder gate {step.gate!r} is not a rotation")
            if not 0 <= step.qubit < self.qubit_count:
                raise IndexError(f"encoder qubit {step.qubit} out of range")
            if not 0 <= step.feature < self.feature_count:
                raise IndexError(f"encoder feature {step.feature} out of range")
        slots = []
        for layer in self.layers:
            for g in layer:
                for t in g.targets:
                    if not 0 <= t < self.qubit_count:
                        raise IndexError(f"gate target {t} out of range")
                if g.slot is not None:
                    if g.gate not in ROTATION_GATES:
                        raise UnsupportedGateError(
                            f"parameter slot {g.slot} attached to non-rotation gate {g.gate!r}")
                    slots.append(g.slot)
                elif g.gate in ROTATION_GATES and g.angle is None:
                    raise ValueError(f"rotation {g.gate!r} needs a slot or a fixed angle")
        if sorted(slots) != list(range(len(slots))):
            raise ValueError(f"parameter slots must be dense and unique, got {sorted(slots)}")
        object.__setattr__(self, "_parameter_count", len(slots))

    @property
    def parameter_count(self) -> int:
        return self._parameter_count

    @property
    def layer_count(self) -> int:
        return len(self.layers)


def standard_layout(qubit_count: int, feature_count: int, layers: int = 3) -> CircuitLayout:
    """Default architecture: cycled-feature RY encoding, RY+RZ rotations and a
    CZ neighbor ring per layer.

    When the feature count exceeds the qubit count the encoder runs several
    passes, cycling features across qubits in order (feature f lands on qubit
    f mod q during pass f // q).
    """
    encoder = tuple(EncoderStep(qubit=f % qubit_count, feature=f)
                    for f in range(feature_count))
    layer_list = []
    slot = 0
    for _ in range(layers):
        gates = []
        for qb in range(qubit_count):
            gates.append(LayerGate("ry", (qb,), slot=slot)); slot += 1
            gates.append(LayerGate("rz", (qb,), slot=slot)); slot += 1
        for qb in range(qubit_count - 1):
            gates.append(LayerGate("cz", (qb, qb + 1)))
        if qubit_count >= 3:
            gates.append(LayerGate("cz", (qubit_count - 1, 0)))
        layer_list.append(tuple(gates))
    return CircuitLayout(qubit_count=qubit_count, feature_count=feature_count,
                         encoder=encoder, layers=tuple(layer_list))


# --- running circuits -------------------------------------------------------

def encode(layout: CircuitLayout, features) -> np.ndarray:
    """Prepare the encoding state from |0...0> using features as rotation angles.

    ``features`` is (feature_count,) or (batch, feature_count); callers are
    responsible for scaling raw observations into angle range beforehand.
    """
    features = np.asarray(features, dtype=float)
    if features.shape[-1] != layout.feature_count:
        raise ValueError(
            f"expected {layout.feature_count} features, got {features.shape[-1]}")
    state = zero_state(layout.qubit_count, batch_shape=features.shape[:-1])
    for step in layout.encoder:
        mat = rotation_matrix(step.gate, features[..., step.feature])
        state = _apply_matrix(state, mat, step.qubit, layout.qubit_count)
    return state


def _apply_layers(layout: CircuitLayout, params: np.ndarray,
                  state: np.ndarray) -> np.ndarray:
    # params is (P,) for one parameter set, or (R, P) for one set per batch row
    q = layout.qubit_count
    for layer in layout.layers:
        for g in layer:
            if g.gate in ROTATION_GATES:
                angle = params[..., g.slot] if g.slot is not None else g.angle
                state = _apply_matrix(state, rotation_matrix(g.gate, angle),
                                      g.targets[0], q)
            elif g.gate in CONTROLLED_GATES:
                state = _apply_controlled(state, g.gate, g.targets[0], g.targets[1], q)
            else:
                state = _apply_matrix(state, _PAULI[g.gate], g.targets[0], q)
    return state


def forward(layout: CircuitLayout, params, features) -> np.ndarray:
    """Encode then apply every trainable layer in order."""
    params = np.asarray(params, dtype=float)
    if params.shape != (layout.parameter_count,):
        raise ValueError(
            f"expected {layout.parameter_count} parameters, got shape {params.shape}")
    return _apply_layers(layout, params, encode(layout, features))


def forward_many(layout: CircuitLayout, params_rows, features) -> np.ndarray:
    """Run one circuit per row: row r uses params_rows[r] on features[r]."""
    params_rows = np.asarray(params_rows, dtype=float)
    features = np.asarray(features, dtype=float)
    if params_rows.ndim != 2 or params_rows.shape[1] != layout.parameter_count:
        raise ValueError(f"expected (rows, {layout.parameter_count}) parameters, "
                         f"got shape {params_rows.shape}")
    if features.shape != (params_rows.shape[0], layout.feature_count):
        raise ValueError("features must supply one row per parameter row")
    return _apply_layers(layout, params_rows, encode(layout, features))


# --- measurement ------------------------------------------------------------

@dataclass(frozen=True)
class PauliZ:
    """Single-qubit Pauli-Z observable; expectation in [-1, 1]."""
    qubit: int


@dataclass(frozen=True)
class BasisProjector:
    """Projector onto one computational basis state; expectation in [0, 1]."""
    index: int


def basis_probabilities(state: np.ndarray) -> np.ndarray:
    """|amplitude|^2 for every basis index (sums to 1 for a normalized state)."""
    return np.abs(state) ** 2


def pauli_z_signs(qubit_count: int, qubit: int) -> np.ndarray:
    """Diagonal of Z on one qubit: +1 where its bit is 0, -1 where it is 1."""
    bits = (np.arange(2 ** qubit_count) >> qubit) & 1
    return 1.0 - 2.0 * bits


def pauli_z_weights(qubit_count: int, coeffs) -> np.ndarray:
    """Basis-probability weights realizing sum_k coeffs[k] * <Z_k>."""
    coeffs = np.asarray(coeffs, dtype=float)
    weights = np.zeros(2 ** qubit_count)
    for k, c in enumerate(coeffs):
        weights += c * pauli_z_signs(qubit_count, k)
    return weights


def pauli_z_expectation(state: np.ndarray, qubit: int):
    """<psi| Z_qubit |psi> from the bit-parity weighting of basis probabilities."""
    q = qubit_count_of(state)
    if not 0 <= qubit < q:
        raise IndexError(f"qubit {qubit} out of range for {q}-qubit state")
    values = basis_probabilities(state) @ pauli_z_signs(q, qubit)
    return float(values) if np.ndim(values) == 0 else values


def expectation(state: np.ndarray, objective):
    """Evaluate an observable or a basis-probability weighting on ``state``.

    Accepts :class:`PauliZ`, :class:`BasisProjector`, or an array of weights
    (shape (2^q,) shared across batch entries, or one weight row per entry).
    Batched states yield one value per entry.
    """
    if isinstance(objective, PauliZ):
        return pauli_z_expectation(state, objective.qubit)
    probs = basis_probabilities(state)
    if isinstance(objective, BasisProjector):
        values = probs[..., objective.index]
    else:
        weights = np.asarray(objective, dtype=float)
        values = np.sum(probs * weights, axis=-1)
    return float(values) if np.ndim(values) == 0 else values


# --- gradients ---------------------------------------------------------------

def parameter_shift_gradient(layout: CircuitLayout, params, features, objective,
                             include_half_factor: bool = True) -> np.ndarray:
    """Gradient of the objective with respect to every parameter slot.

    Each slot k is evaluated at theta_k +/- pi/2 and the difference is halved,
    which is the exact derivative for the R(theta) = exp(-i*theta/2 * gamma)
    rotation family. ``include_half_factor=False`` reproduces the bare
    two-point difference (a 2x-scaled gradient) for compatibility runs.

    With batched features the objective values are summed over the batch, so
    per-entry weight rows (see :func:`expectation`) let one call produce the
    gradient of any frozen linear combination of per-entry readouts.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (layout.parameter_count,):
        raise ValueError(
            f"expected {layout.parameter_count} parameters, got shape {params.shape}")
    scale = 0.5 if include_half_factor else 1.0
    encoded = encode(layout, features)  # shared by all shifted evaluations
    grad = np.empty(layout.parameter_count)
    for k in range(layout.parameter_count):
        shifted = params.copy()
        shifted[k] = params[k] + math.pi / 2
        plus = np.sum(expectation(_apply_layers(layout, shifted, encoded), objective))
        shifted[k] = params[k] - math.pi / 2
        minus = np.sum(expectation(_apply_layers(layout, shifted, encoded), objective))
        grad[k] = scale * (plus - minus)
    return grad


# --- text manifest ------------------------------------------------------------

def layout_to_manifest(layout: CircuitLayout, params=None) -> str:
    """Serialize a layout (and optionally its parameter values) to text.

    One gate per line as ``<gate> <targets> <slot|angle>``; encoder rotations
    carry ``feat:<index>``, trainable rotations ``slot:<index>``, fixed
    rotations a literal angle, and entanglers nothing.
    """
    lines = ["saginlab-circuit v1",
             f"qubits {layout.qubit_count}",
             f"features {layout.feature_count}",
             "encoder"]
    for step in layout.encoder:
        lines.append(f"{step.gate} {step.qubit} feat:{step.feature}")
    for layer in layout.layers:
        lines.append("layer")
        for g in layer:
            targets = " ".join(str(t) for t in g.targets)
            if g.slot is not None:
                lines.append(f"{g.gate} {targets} slot:{g.slot}")
            elif g.angle is not None:
                lines.append(f"{g.gate} {targets} {g.angle!r}")
            else:
                lines.append(f"{g.gate} {targets}")
    if params is not None:
        lines.append("params")
        lines.extend(repr(float(v)) for v in np.asarray(params, dtype=float))
    lines.append("end")
    return "\n".join(lines) + "\n"


def manifest_to_layout(text: str) -> tuple[CircuitLayout, np.ndarray | None]:
    """Inverse of :func:`layout_to_manifest`; returns (layout, params or None)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "saginlab-circuit v1":
        raise ValueError("not a saginlab circuit manifest")
    qubits = features = None
    encoder: list[EncoderStep] = []
    layers: list[list[LayerGate]] = []
    params: list[float] = []
    section = "header"
    for ln in lines[1:]:
        if ln == "end":
            break
        head, *rest = ln.split()
        if head == "qubits":
            qubits = int(rest[0])
        elif head == "features":
            features = int(rest[0])
        elif head == "encoder":
            section = "encoder"
        elif head == "layer":
            section = "layer"
            layers.append([])
        elif head == "params":
            section = "params"
        elif section == "encoder":
            qubit, feat = int(rest[0]), rest[1]
            if not feat.startswith("feat:"):
                raise ValueError(f"encoder line needs feat:<index>, got {ln!r}")
            encoder.append(EncoderStep(qubit=qubit, feature=int(feat[5:]), gate=head))
        elif section == "layer":
            if rest and rest[-1].startswith("slot:"):
                layers[-1].append(LayerGate(head, tuple(int(t) for t in rest[:-1]),
                                            slot=int(rest[-1][5:])))
            elif head in ROTATION_GATES:
                layers[-1].append(LayerGate(head, tuple(int(t) for t in rest[:-1]),
                                            angle=float(rest[-1])))
            else:
                layers[-1].append(LayerGate(head, tuple(int(t) for t in rest)))
        elif section == "params":
            params.append(float(head))
        else:
            raise ValueError(f"unexpected manifest line {ln!r}")
    if qubits is None or features is None:
        raise ValueError("manifest missing qubits/features header")
    layout = CircuitLayout(qubit_count=qubits, feature_count=features,
                           encoder=tuple(encoder),
                           layers=tuple(tuple(layer) for layer in layers))
    return layout, (np.array(params) if params else None)
