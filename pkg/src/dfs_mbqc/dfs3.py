"""Three-qubit encoding against fully collective noise.

The codewords ``|0_E>``, ``|1_E>`` are the ``J_z = +1/2`` members of the two
total-spin-1/2 irreps of three qubits. A collective rotation ``exp(-i beta.J)``
acts on ``span{|l, m>}`` (``l`` the logical label, ``m = +-1/2`` the gauge) as
``1_logical (x) D(beta)_gauge``: the logical qubit is a noiseless subsystem,
while the two-dimensional span of the codewords alone is only preserved by
``J_z`` rotations. Decoding therefore maps the gauge onto qubit 3, measures
it, and corrects the logical qubit conditionally.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .core import X, QuantumState, apply_gate, fidelity, partial_trace, projective_measure
from .noise import collective_generators, collective_unitary


@dataclass(frozen=True)
class CircuitAngles:
    phi: float
    theta1: float
    theta2: float


# rotation angles of the reference encoding/decoding circuits; kept as
# metadata, the maps themselves are built from the codewords
ENCODE_ANGLES = CircuitAngles(3 * np.pi / 4, -np.arccos(np.sqrt(2 / 3)), -np.pi / 4)
DECODE_ANGLES = CircuitAngles(-3 * np.pi / 4, np.arccos(np.sqrt(2 / 3)), np.pi / 4)


def _ket(bits: str) -> np.ndarray:
    v = np.zeros(8, dtype=complex)
    v[int(bits, 2)] = 1
    return v


def dfs3_codewords() -> tuple[np.ndarray, np.ndarray]:
    """``|0_E> = (|10>-|01>)_12 |0>_3``,
    ``|1_E> = (2/sqrt6)|0>_1(|10>-|01>)_23 + (1/sqrt6)(|10>-|01>)_12|0>_3``."""
    zero = (_ket("100") - _ket("010")) / np.sqrt(2)
    one = 2 / np.sqrt(6) * (_ket("010") - _ket("001")) + 1 / np.sqrt(6) * (_ket("100") - _ket("010"))
    return zero, one


def gauge_partners() -> tuple[np.ndarray, np.ndarray]:
    """``J_- |0_E>`` and ``J_- |1_E>`` (the ``m = -1/2`` members)."""
    jx, jy, _ = collective_generators(3)
    lower = jx - 1j * jy
    return tuple(lower @ c for c in dfs3_codewords())


def code_space_projector() -> np.ndarray:
    return sum(np.outer(c, c.conj()) for c in dfs3_codewords())


def subsystem_projector() -> np.ndarray:
    """Projector onto the two spin-1/2 irreps (both gauge values)."""
    vecs = list(dfs3_codewords()) + list(gauge_partners())
    return sum(np.outer(v, v.conj()) for v in vecs)


def encoder_isometry() -> np.ndarray:
    return np.stack(dfs3_codewords(), axis=1)


def encode3(mu: complex, nu: complex) -> QuantumState:
    if abs(abs(mu) ** 2 + abs(nu) ** 2 - 1) > 1e-12:
        raise ValueError("logical input not normalized")
    zero, one = dfs3_codewords()
    return QuantumState.pure(mu * zero + nu * one)


def encode3_density(rho: np.ndarray) -> QuantumState:
    v = encoder_isometry()
    return QuantumState.mixed(v @ np.asarray(rho, dtype=complex) @ v.conj().T)


def decoder_unitary() -> np.ndarray:
    """Unitary taking the noiseless-subsystem basis to computational states.

    ``|l, +1/2> -> |l>|0>|1>``, ``|l, -1/2> -> X|l>|0>|0>``; the spin-3/2
    states go to ``|.>|1>|.>``.
    """
    zero, one = dfs3_codewords()
    zero_m, one_m = gauge_partners()
    quartet = [
        _ket("000"),
        (_ket("001") + _ket("010") + _ket("100")) / np.sqrt(3),
        (_ket("011") + _ket("101") + _ket("110")) / np.sqrt(3),
        _ket("111"),
    ]
    pairs = [
        ("001", zero), ("101", one),
        ("100", zero_m), ("000", one_m),
        ("010", quartet[0]), ("011", quartet[1]), ("110", quartet[2]), ("111", quartet[3]),
    ]
    return sum(np.outer(_ket(target), src.conj()) for target, src in pairs)


def decode3(
    state: QuantumState, rng: np.random.Generator | None = None, outcome: int | None = None
) -> tuple[np.ndarray, int]:
    """Recover the logical qubit: un-map, read qubit 3, fix qubit 1 if it read ``0``.

    Returns the logical density matrix (qubit 1 after discarding 2 and 3) and
    the qubit-3 outcome.
    """
    if state.num_qubits != 3:
        raise ValueError("decode3 needs a three-qubit state")
    state = QuantumState(
        decoder_unitary() @ state.data if state.is_pure else decoder_unitary() @ state.data @ decoder_unitary().conj().T,
        3,
    )
    proj = [np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex)]
    bit, _, state = projective_measure(state, proj, [2], rng=rng, outcome=outcome)
    if bit == 0:
        state = apply_gate(state, X, [0])
    return partial_trace(state, [0]).density_matrix(), bit


def _random_logical(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def verify_collective_invariance(
    betas: Iterable,
    n_states: int = 10,
    rng: np.random.Generator | None = None,
    noise: Callable[[np.ndarray], np.ndarray] | None = None,
) -> float:
    """Worst logical infidelity of encode -> noise(beta) -> decode.

    Every decode branch with non-negligible probability is checked. ``noise``
    maps a beta sample to an 8x8 unitary (default: the collective rotation).
    """
    rng = rng if rng is not None else np.random.default_rng()
    noise = noise if noise is not None else (lambda b: collective_unitary(b, 3))
    betas = list(betas)
    if not betas:
        raise ValueError("need at least one beta sample")
    logicals = [_random_logical(rng) for _ in range(n_states)]
    worst = 0.0
    for beta in betas:
        u = noise(np.asarray(beta, dtype=float))
        for psi in logicals:
            noisy = QuantumState(u @ encode3(*psi).data, 3)
            for branch in (0, 1):
                try:
                    rho, _ = decode3(noisy, outcome=branch)
                except ValueError:  # branch of vanishing probability
                    continue
                worst = max(worst, 1 - fidelity(QuantumState(psi, 1), QuantumState(rho, 1)))
    return worst
