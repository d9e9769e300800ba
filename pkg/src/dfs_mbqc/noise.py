"""Dephasing and collective-noise channels on physical qubits.

Conventions:

* independent phase damping of strength ``gamma_t`` multiplies every
  single-qubit coherence by ``exp(-gamma_t / 2)``;
* collective dephasing of a pair is Gaussian phase diffusion through
  ``exp(-i theta J_z)``, i.e. coherences between ``J_z`` eigenvalues ``m`` and
  ``n`` decay by ``exp(-gamma_t (m - n)^2 / 2)``;
* full collective noise is a sampled unitary ``exp(-i beta . J)`` on a block.

The identity part of the system-bath coupling only contributes a global
phase and is not modeled.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .cluster import LatticeSpec
from .core import I2, X, Y, Z, QuantumState, apply_gate, embed

NOISE_KINDS = ("none", "independent_dephasing", "collective_dephasing", "collective_unitary")


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "none"
    gamma_t: float = 0.0
    targets: tuple[int, ...] | None = None
    beta: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not np.isfinite(self.gamma_t) or self.gamma_t < 0:
            raise ValueError(f"gamma_t must be a finite nonnegative number, got {self.gamma_t!r}")
        if self.beta is not None:
            beta = tuple(float(b) for b in self.beta)
            if len(beta) != 3 or not all(np.isfinite(beta)):
                raise ValueError("beta must be a finite 3-vector")
            object.__setattr__(self, "beta", beta)
        if self.kind == "collective_unitary" and self.beta is None:
            raise ValueError("collective_unitary noise needs beta")
        if self.targets is not None:
            object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseSpec":
        unknown = set(d) - {"kind", "gamma_t", "targets", "beta"}
        if unknown:
            raise ValueError(f"unknown noise fields {sorted(unknown)}")
        return cls(d.get("kind", "none"), float(d.get("gamma_t", 0.0)), d.get("targets"), d.get("beta"))

    @classmethod
    def loads(cls, text: str) -> "NoiseSpec":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "NoiseSpec":
        return cls.loads(Path(path).read_text())

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "gamma_t": self.gamma_t}
        if self.targets is not None:
            d["targets"] = list(self.targets)
        if self.beta is not None:
            d["beta"] = list(self.beta)
        return d


def _check_gamma(gamma_t: float) -> None:
    if not gamma_t >= 0:
        raise ValueError(f"gamma_t must be nonnegative, got {gamma_t!r}")


def collective_generators(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``J_l = (1/2) sum_i sigma_{l,i}`` on a block of ``n`` qubits."""
    return tuple(sum(embed(p, [i], n) for i in range(n)) / 2 for p in (X, Y, Z))


def coherence_factor(gamma_t: float) -> float:
    return float(np.exp(-gamma_t / 2))


def dephasing_kraus(gamma_t: float) -> list[np.ndarray]:
    """``{sqrt(p) 1, sqrt(1-p) Z}`` with ``p = (1 + exp(-gamma_t/2)) / 2``."""
    _check_gamma(gamma_t)
    p = (1 + coherence_factor(gamma_t)) / 2
    return [np.sqrt(p) * I2, np.sqrt(1 - p) * Z]


def _scale_coherences(rho: np.ndarray, n: int, qubits: list[int], weights) -> np.ndarray:
    """Multiply ``rho[i, j]`` by ``weights(m_i, m_j)`` where ``m`` is the J_z value on ``qubits``."""
    idx = np.arange(2**n)
    bits = [(idx >> (n - 1 - q)) & 1 for q in qubits]
    m = sum(0.5 - b for b in bits)
    return rho * weights(m[:, None], m[None, :])


def apply_independent_dephasing(state: QuantumState, qubit: int, gamma_t: float) -> QuantumState:
    _check_gamma(gamma_t)
    if not 0 <= qubit < state.num_qubits:
        raise ValueError(f"qubit {qubit} outside register")
    f = coherence_factor(gamma_t)
    rho = _scale_coherences(
        state.density_matrix(), state.num_qubits, [qubit], lambda a, b: np.where(a == b, 1.0, f)
    )
    return QuantumState(rho, state.num_qubits)


def apply_collective_dephasing(state: QuantumState, block, gamma_t: float) -> QuantumState:
    _check_gamma(gamma_t)
    block = [int(q) for q in block]
    if len(block) != 2 or len(set(block)) != 2:
        raise ValueError("collective dephasing acts on a block of exactly two qubits")
    if not all(0 <= q < state.num_qubits for q in block):
        raise ValueError(f"block {block} outside register")
    rho = _scale_coherences(
        state.density_matrix(), state.num_qubits, block, lambda a, b: np.exp(-gamma_t * (a - b) ** 2 / 2)
    )
    return QuantumState(rho, state.num_qubits)


def collective_unitary(beta, n: int) -> np.ndarray:
    """``exp(-i (beta_x J_x + beta_y J_y + beta_z J_z))`` on ``n`` qubits."""
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (3,) or not np.all(np.isfinite(beta)):
        raise ValueError("beta must be a finite 3-vector")
    gen = sum(b * j for b, j in zip(beta, collective_generators(n)))
    return scipy.linalg.expm(-1j * gen)


def apply_collective_unitary(state: QuantumState, block, beta) -> QuantumState:
    block = [int(q) for q in block]
    if len(block) not in (2, 3):
        raise ValueError("collective unitaries act on blocks of two or three qubits")
    return apply_gate(state, collective_unitary(beta, len(block)), block)


def _blocks(lattice: LatticeSpec) -> list[tuple[int, ...]]:
    return list(lattice.physical_map)


def dephase_register(state: QuantumState, lattice: LatticeSpec, gamma_t: float, mode: str) -> QuantumState:
    """Equal-strength dephasing on every physical qubit or every encoded pair."""
    _check_gamma(gamma_t)
    if state.num_qubits != lattice.num_physical:
        raise ValueError("state does not match lattice")
    if mode == "independent":
        for q in range(lattice.num_physical):
            state = apply_independent_dephasing(state, q, gamma_t)
        return state
    if mode == "collective":
        if lattice.encoding != "dual-rail":
            raise ValueError(f"collective pair dephasing needs a dual-rail lattice, got {lattice.encoding!r}")
        for block in _blocks(lattice):
            state = apply_collective_dephasing(state, block, gamma_t)
        return state
    raise ValueError(f"unknown dephasing mode {mode!r}")


def apply_noise(state: QuantumState, lattice: LatticeSpec, noise: NoiseSpec) -> QuantumState:
    """Apply ``noise`` to the register described by ``lattice``.

    ``noise.targets`` restricts the channel to the listed physical qubits
    (independent) or effective qubits (block channels).
    """
    if noise.kind == "none":
        return state
    if noise.kind == "independent_dephasing":
        qubits = noise.targets if noise.targets is not None else range(lattice.num_physical)
        for q in qubits:
            state = apply_independent_dephasing(state, q, noise.gamma_t)
        return state
    if lattice.encoding == "standard":
        raise ValueError(f"{noise.kind} noise needs an encoded lattice")
    blocks = _blocks(lattice)
    if noise.targets is not None:
        blocks = [blocks[k] for k in noise.targets]
    for block in blocks:
        if noise.kind == "collective_dephasing":
            state = apply_collective_dephasing(state, block, noise.gamma_t)
        else:
            state = apply_collective_unitary(state, block, noise.beta)
    return state


def choi_matrix(channel, n_qubits: int = 1) -> np.ndarray:
    """``sum_ij |i><j| (x) channel(|i><j|)`` for a linear map on ``n_qubits``."""
    d = 2**n_qubits
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            out[i * d:(i + 1) * d, j * d:(j + 1) * d] = channel(e)
    return out


def kraus_from_choi(choi: np.ndarray, tol: float = 1e-12) -> list[np.ndarray]:
    d = int(round(np.sqrt(choi.shape[0])))
    w, v = np.linalg.eigh(choi)
    return [np.sqrt(wi) * v[:, i].reshape(d, d).T for i, wi in enumerate(w) if wi > tol]


def collective_dephasing_kraus(gamma_t: float) -> list[np.ndarray]:
    """A Kraus set for pair dephasing, from the channel's Choi matrix."""
    _check_gamma(gamma_t)
    m = np.array([1.0, 0.0, 0.0, -1.0])
    decay = np.exp(-gamma_t * (m[:, None] - m[None, :]) ** 2 / 2)
    return kraus_from_choi(choi_matrix(lambda e: e * decay, 2))


def no_click_probability_bounds(eta_prime: float, n_photons: float) -> tuple[float, float]:
    """Bounds on the probability that an ``|h1>`` atom yields no detector click.

    Returns ``(exp(-(1 + eta/2) eta N), (1 + 2 eta/3) exp(-eta N))``. The upper
    bound is not clamped to 1.
    """
    if not 0 <= eta_prime <= 1:
        raise ValueError(f"detection efficiency {eta_prime!r} outside [0, 1]")
    if not n_photons >= 0 or not np.isfinite(n_photons):
        raise ValueError(f"photon number {n_photons!r} must be finite and nonnegative")
    lower = float(np.exp(-(1 + eta_prime / 2) * eta_prime * n_photons))
    upper = float((1 + 2 * eta_prime / 3) * np.exp(-eta_prime * n_photons))
    return lower, upper
