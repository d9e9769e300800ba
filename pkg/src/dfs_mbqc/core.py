"""Dense state-vector / density-matrix primitives.

Qubit ordering: qubit 0 is the most significant bit of a basis-state index,
so ``|q0 q1 ... q_{n-1}>`` has index ``sum(q_k << (n-1-k))``. The left operand
of :func:`tensor` therefore occupies the lower-numbered qubits.

All operations return new :class:`QuantumState` objects; inputs are never
mutated.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_QUBITS = 12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CZ = np.diag([1, 1, 1, -1]).astype(complex)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)
KET_PLUS_Y = np.array([1, 1j], dtype=complex) / np.sqrt(2)


def rz(angle: float) -> np.ndarray:
    """Phase rotation ``diag(1, e^{i angle})``.

    Equal to the Bloch-sphere z-rotation by ``angle`` up to a global phase,
    so the rotation by ``-alpha`` is ``rz(-alpha)``.
    """
    return np.diag([1.0, np.exp(1j * angle)]).astype(complex)


def equatorial_ket(alpha: float, sign: int = +1) -> np.ndarray:
    """``(|0> + sign * e^{i alpha}|1>)/sqrt(2)``."""
    return np.array([1, sign * np.exp(1j * alpha)], dtype=complex) / np.sqrt(2)


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.abs(m.conj().T @ m - np.eye(m.shape[0])).max() < tol


def _num_qubits_for(dim: int) -> int:
    n = int(round(np.log2(dim))) if dim > 0 else -1
    if n < 0 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A pure (vector) or mixed (density matrix) state of ``num_qubits`` qubits."""

    data: np.ndarray
    num_qubits: int

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        if self.num_qubits < 1 or self.num_qubits > MAX_QUBITS:
            raise ValueError(f"register of {self.num_qubits} qubits outside [1, {MAX_QUBITS}]")
        dim = 2**self.num_qubits
        if data.shape not in ((dim,), (dim, dim)):
            raise ValueError(f"array of shape {data.shape} does not describe {self.num_qubits} qubits")

    @classmethod
    def pure(cls, vector) -> "QuantumState":
        vector = np.asarray(vector, dtype=complex).ravel()
        norm = np.linalg.norm(vector)
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"state vector not normalized (norm {norm!r})")
        return cls(vector, _num_qubits_for(vector.size))

    @classmethod
    def mixed(cls, rho) -> "QuantumState":
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got {rho.shape}")
        if abs(np.trace(rho) - 1) > 1e-12:
            raise ValueError(f"density matrix trace {np.trace(rho)!r} != 1")
        return cls(rho, _num_qubits_for(rho.shape[0]))

    @classmethod
    def basis(cls, bits: str) -> "QuantumState":
        vec = np.zeros(2 ** len(bits), dtype=complex)
        vec[int(bits, 2)] = 1
        return cls(vec, len(bits))

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def density_matrix(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data.copy()

    def to_mixed(self) -> "QuantumState":
        return self if not self.is_pure else QuantumState(self.density_matrix(), self.num_qubits)

    def trace(self) -> float:
        if self.is_pure:
            return float(np.vdot(self.data, self.data).real)
        return float(np.trace(self.data).real)

    def validate(self, tol: float = 1e-12, eig_tol: float = 1e-10) -> None:
        """Raise ``ValueError`` if normalization, hermiticity or positivity fail."""
        if abs(self.trace() - 1) > tol:
            raise ValueError(f"trace/norm {self.trace()!r} deviates from 1")
        if not self.is_pure:
            if np.abs(self.data - self.data.conj().T).max() > tol:
                raise ValueError("density matrix is not Hermitian")
            if np.linalg.eigvalsh(self.data).min() < -eig_tol:
                raise ValueError("density matrix has negative eigenvalues")


def tensor(a, b):
    """Kronecker product; ``a`` occupies the more significant qubits."""
    if isinstance(a, QuantumState) and isinstance(b, QuantumState):
        n = a.num_qubits + b.num_qubits
        if a.is_pure and b.is_pure:
            return QuantumState(np.kron(a.data, b.data), n)
        return QuantumState(np.kron(a.density_matrix(), b.density_matrix()), n)
    if isinstance(a, QuantumState) or isinstance(b, QuantumState):
        raise TypeError("cannot tensor a QuantumState with a matrix")
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _check_targets(targets: Sequence[int], num_qubits: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets in {targets}")
    for t in targets:
        if not 0 <= t < num_qubits:
            raise ValueError(f"qubit index {t} outside register of {num_qubits}")
    return targets


def _apply_on_axes(tensor_, op: np.ndarray, axes: list[int]) -> np.ndarray:
    # tensor_ has one length-2 axis per qubit (possibly more axes); contract op over `axes`
    k = len(axes)
    op_t = op.reshape((2,) * (2 * k))
    out = np.tensordot(op_t, tensor_, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def apply_operator(state: QuantumState, op: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Return the raw array of ``op`` (not necessarily unitary) acting on ``targets``.

    For density matrices the result is ``op rho op^dagger``.
    """
    op = np.asarray(op, dtype=complex)
    targets = _check_targets(targets, state.num_qubits)
    if op.shape != (2 ** len(targets),) * 2:
        raise ValueError(f"operator of shape {op.shape} does not match {len(targets)} target(s)")
    n = state.num_qubits
    if state.is_pure:
        psi = state.data.reshape((2,) * n)
        return _apply_on_axes(psi, op, targets).reshape(-1)
    rho = state.data.reshape((2,) * (2 * n))
    rho = _apply_on_axes(rho, op, targets)
    rho = _apply_on_axes(rho, op.conj(), [t + n for t in targets])
    return rho.reshape(2**n, 2**n)


def apply_gate(state: QuantumState, gate: np.ndarray, targets: Sequence[int]) -> QuantumState:
    """Apply ``gate`` to ``targets`` (first target = most significant gate index)."""
    return QuantumState(apply_operator(state, gate, targets), state.num_qubits)


def embed(op: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Full ``2^n x 2^n`` matrix of ``op`` acting on ``targets``."""
    targets = _check_targets(targets, num_qubits)
    dim = 2**num_qubits
    eye = np.eye(dim, dtype=complex).reshape((2,) * num_qubits + (dim,))
    return _apply_on_axes(eye, np.asarray(op, dtype=complex), targets).reshape(dim, dim)


def partial_trace(state: QuantumState, keep: Sequence[int]) -> QuantumState:
    """Reduced density matrix on ``keep`` (in the order given)."""
    if len(keep) == 0:
        raise ValueError("keep list must not be empty")
    keep = _check_targets(keep, state.num_qubits)
    n = state.num_qubits
    rest = [q for q in range(n) if q not in keep]
    dk, dr = 2 ** len(keep), 2 ** len(rest)
    if state.is_pure:
        m = np.transpose(state.data.reshape((2,) * n), keep + rest).reshape(dk, dr)
        rho = m @ m.conj().T
    else:
        t = state.data.reshape((2,) * (2 * n))
        t = np.transpose(t, keep + rest + [q + n for q in keep] + [q + n for q in rest])
        rho = np.einsum("ajbj->ab", t.reshape(dk, dr, dk, dr))
    return QuantumState(rho, len(keep))


def check_projectors(projectors: Sequence[np.ndarray], tol: float = 1e-10) -> None:
    dim = projectors[0].shape[0]
    total = sum(projectors)
    if np.abs(total - np.eye(dim)).max() > tol:
        raise ValueError("projectors do not sum to the identity")
    for i, p in enumerate(projectors):
        for j, q in enumerate(projectors):
            expected = p if i == j else np.zeros_like(p)
            if np.abs(p @ q - expected).max() > tol:
                raise ValueError(f"projectors {i} and {j} are not orthogonal idempotents")


def projective_measure(
    state: QuantumState,
    projectors: Sequence[np.ndarray],
    targets: Sequence[int],
    rng: np.random.Generator | None = None,
    outcome: int | None = None,
) -> tuple[int, float, QuantumState]:
    """Projective measurement on ``targets``.

    Exactly one of ``rng`` (Born-rule sampling) or ``outcome`` (forced branch)
    should be given; with neither, the default generator is used. Returns
    ``(outcome, probability, renormalized post-state)``.
    """
    projectors = [np.asarray(p, dtype=complex) for p in projectors]
    check_projectors(projectors)
    unnormalized = [apply_operator(state, p, targets) for p in projectors]
    if state.is_pure:
        probs = np.array([np.vdot(v, v).real for v in unnormalized])
    else:
        probs = np.array([np.trace(r).real for r in unnormalized])
    probs = np.clip(probs, 0.0, None)
    if outcome is None:
        rng = rng if rng is not None else np.random.default_rng()
        outcome = int(rng.choice(len(probs), p=probs / probs.sum()))
    elif not 0 <= outcome < len(projectors):
        raise ValueError(f"forced outcome {outcome} outside {len(projectors)} outcomes")
    p = float(probs[outcome])
    if p < 1e-12:
        raise ValueError(f"outcome {outcome} has vanishing probability {p:.3e}")
    post = unnormalized[outcome] / (np.sqrt(p) if state.is_pure else p)
    return outcome, p, QuantumState(post, state.num_qubits)


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(a) b sqrt(a)))^2``; ``|<a|b>|^2`` for pure inputs."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("fidelity of states with different dimensions")
    if a.is_pure and b.is_pure:
        f = abs(np.vdot(a.data, b.data)) ** 2
    elif a.is_pure or b.is_pure:
        psi, rho = (a.data, b.data) if a.is_pure else (b.data, a.data)
        f = np.vdot(psi, rho @ psi).real
    else:
        w, v = np.linalg.eigh(a.data)
        sqrt_a = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
        m = sqrt_a @ b.data @ sqrt_a
        f = np.sum(np.sqrt(np.clip(np.linalg.eigvalsh((m + m.conj().T) / 2), 0, None))) ** 2
    return float(np.clip(f, 0.0, 1.0))


def bloch_coordinates(rho) -> tuple[float, float, float]:
    rho = rho.density_matrix() if isinstance(rho, QuantumState) else np.asarray(rho)
    if rho.shape != (2, 2):
        raise ValueError("Bloch coordinates need a single-qubit density matrix")
    return tuple(float(np.trace(rho @ p).real) for p in (X, Y, Z))
