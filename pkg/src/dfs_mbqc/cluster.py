"""Standard and dual-rail encoded cluster states, plus their stabilizers.

Dual-rail encoding of an effective qubit on a physical pair (top, bottom)::

    |0_E> = |01>,   |1_E> = -|10>

The minus sign lives in the encoding map; measurement bases use the plain
``|01>, |10>`` amplitudes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import CZ, H, I2, KET_MINUS, KET_PLUS, X, Z, QuantumState, apply_gate, apply_operator

ENCODINGS = ("standard", "dual-rail", "dfs3")
_BLOCK = {"standard": 1, "dual-rail": 2, "dfs3": 3}
MAX_EFFECTIVE = 5

DUAL_RAIL_ZERO = np.array([0, 1, 0, 0], dtype=complex)
DUAL_RAIL_ONE = np.array([0, 0, -1, 0], dtype=complex)
# columns map logical amplitudes into the pair's 4-dim space
DUAL_RAIL_ISOMETRY = np.stack([DUAL_RAIL_ZERO, DUAL_RAIL_ONE], axis=1)

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class LatticeSpec:
    """Effective-qubit graph and its physical layout.

    Effective qubit ``k`` occupies physical qubits ``k*b .. k*b + b-1`` where
    ``b`` is the block size of the encoding; the first of them is the top-layer
    qubit that takes part in the entangling sweep.
    """

    effective: int
    edges: tuple[tuple[int, int], ...] = ()
    encoding: str = "dual-rail"
    physical_map: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        if self.encoding not in ENCODINGS:
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if not 1 <= self.effective <= MAX_EFFECTIVE:
            raise ValueError(f"lattices of 1..{MAX_EFFECTIVE} effective qubits supported, got {self.effective}")
        edges = []
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j or not (0 <= i < self.effective and 0 <= j < self.effective):
                raise ValueError(f"invalid edge ({i}, {j})")
            edges.append((min(i, j), max(i, j)))
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", tuple(edges))
        b = _BLOCK[self.encoding]
        object.__setattr__(
            self, "physical_map", tuple(tuple(range(k * b, k * b + b)) for k in range(self.effective))
        )

    @classmethod
    def chain(cls, n: int, encoding: str = "dual-rail") -> "LatticeSpec":
        return cls(n, tuple((k, k + 1) for k in range(n - 1)), encoding)

    @classmethod
    def grid(cls, rows: int, cols: int, encoding: str = "dual-rail") -> "LatticeSpec":
        idx = lambda r, c: r * cols + c  # noqa: E731
        edges = [(idx(r, c), idx(r, c + 1)) for r in range(rows) for c in range(cols - 1)]
        edges += [(idx(r, c), idx(r + 1, c)) for r in range(rows - 1) for c in range(cols)]
        return cls(rows * cols, tuple(edges), encoding)

    @classmethod
    def from_dict(cls, d: dict) -> "LatticeSpec":
        return cls(int(d["effective"]), tuple(tuple(e) for e in d.get("edges", [])), d.get("encoding", "dual-rail"))

    @classmethod
    def load(cls, path) -> "LatticeSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {"effective": self.effective, "encoding": self.encoding, "edges": [list(e) for e in self.edges]}

    @property
    def num_physical(self) -> int:
        return self.effective * _BLOCK[self.encoding]

    def top(self, k: int) -> int:
        return self.physical_map[k][0]

    def neighbors(self, k: int) -> list[int]:
        if not 0 <= k < self.effective:
            raise ValueError(f"effective qubit {k} not in lattice")
        return sorted({j for i, j in self.edges if i == k} | {i for i, j in self.edges if j == k})


def encode_dual_rail(mu: complex, nu: complex) -> np.ndarray:
    """Pair amplitudes of ``mu|0_E> + nu|1_E>``."""
    return mu * DUAL_RAIL_ZERO + nu * DUAL_RAIL_ONE


def decode_dual_rail(pair: QuantumState) -> tuple[np.ndarray, float]:
    """Logical 2x2 block of a pair state and the weight outside the code space.

    The logical block is renormalized; the returned leakage is the trace lost.
    """
    rho = pair.density_matrix()
    if rho.shape != (4, 4):
        raise ValueError("dual-rail decoding needs a two-qubit state")
    block = DUAL_RAIL_ISOMETRY.conj().T @ rho @ DUAL_RAIL_ISOMETRY
    weight = float(np.trace(block).real)
    if weight < 1e-12:
        raise ValueError("pair has no support on the dual-rail code space")
    return block / weight, max(0.0, 1.0 - weight)


def minus_minus_register(n_pairs: int) -> QuantumState:
    """``|-,->`` on every (top, bottom) pair."""
    vec = np.array([1.0 + 0j])
    for _ in range(2 * n_pairs):
        vec = np.kron(vec, KET_MINUS)
    return QuantumState.pure(vec)


def build_singlet_column(state: QuantumState) -> QuantumState:
    """Apply CZ between each (2k, 2k+1) pair, then H on each bottom qubit.

    Starting from :func:`minus_minus_register` this yields a product of
    singlets ``(|01> - |10>)/sqrt(2)``; no check is made on the input.
    """
    if state.num_qubits % 2:
        raise ValueError("singlet column needs an even number of qubits")
    for a in range(0, state.num_qubits, 2):
        state = apply_gate(state, CZ, [a, a + 1])
        state = apply_gate(state, H, [a + 1])
    return state


def build_encoded_cluster(
    lattice: LatticeSpec, logical_input: tuple[complex, complex] | None = None
) -> tuple[QuantumState, dict[int, int]]:
    """Dual-rail encoded cluster on ``lattice`` and its eigenvalue set (all zero).

    ``logical_input`` replaces the first pair's singlet by ``mu|0_E> + nu|1_E>``
    before the top-layer sweep.
    """
    if lattice.encoding != "dual-rail":
        raise ValueError(f"encoded cluster construction needs dual-rail encoding, got {lattice.encoding!r}")
    if logical_input is None:
        state = build_singlet_column(minus_minus_register(lattice.effective))
    else:
        mu, nu = logical_input
        if abs(abs(mu) ** 2 + abs(nu) ** 2 - 1) > 1e-12:
            raise ValueError("logical input not normalized")
        # the column is a product of singlets, so the first factor is swapped directly
        vec = encode_dual_rail(mu, nu)
        if lattice.effective > 1:
            vec = np.kron(vec, build_singlet_column(minus_minus_register(lattice.effective - 1)).data)
        state = QuantumState.pure(vec)
    for a, c in lattice.edges:
        state = apply_gate(state, CZ, [lattice.top(a), lattice.top(c)])
    return state, {k: 0 for k in range(lattice.effective)}


def build_standard_cluster(
    n: int, logical_input: tuple[complex, complex] | None = None, edges=None
) -> QuantumState:
    """Unencoded cluster: ``|+>`` everywhere (input on qubit 0), CZ along ``edges``.

    ``edges`` defaults to the linear chain.
    """
    if n < 1:
        raise ValueError("cluster needs at least one qubit")
    first = KET_PLUS if logical_input is None else np.asarray(logical_input, dtype=complex)
    vec = first
    for _ in range(n - 1):
        vec = np.kron(vec, KET_PLUS)
    state = QuantumState.pure(vec)
    edges = [(k, k + 1) for k in range(n - 1)] if edges is None else edges
    for a, c in edges:
        state = apply_gate(state, CZ, [a, c])
    return state


@dataclass(frozen=True)
class StabilizerOperator:
    """``G = X_a (x) prod_{c in nghb(a)} Z_c`` as a list of single-qubit factors."""

    effective: int
    factors: tuple[tuple[int, np.ndarray], ...]
    num_qubits: int

    def apply(self, state: QuantumState) -> np.ndarray:
        out = state
        for q, m in self.factors:
            out = QuantumState(apply_operator(out, m, [q]), out.num_qubits)
        return out.data

    def matrix(self) -> np.ndarray:
        ops = [I2] * self.num_qubits
        for q, m in self.factors:
            ops[q] = m
        out = np.array([[1.0 + 0j]])
        for m in ops:
            out = np.kron(out, m)
        return out


def stabilizer(lattice: LatticeSpec, a: int) -> StabilizerOperator:
    """Correlation operator of effective qubit ``a``.

    Dual-rail: ``X_a = (ZX) (x) (ZX)`` on the pair, ``Z_c = Z (x) 1`` on each
    neighbor pair. Standard encoding reduces to the usual ``X_a prod Z_c``.
    """
    nb = lattice.neighbors(a)
    if lattice.encoding == "dual-rail":
        zx = Z @ X
        factors = [(q, zx) for q in lattice.physical_map[a]]
    elif lattice.encoding == "standard":
        factors = [(lattice.top(a), X)]
    else:
        raise ValueError("stabilizers are defined for standard and dual-rail lattices only")
    factors += [(lattice.top(c), Z) for c in nb]
    return StabilizerOperator(a, tuple(factors), lattice.num_physical)


def verify_stabilizers(state: QuantumState, lattice: LatticeSpec, kappa: dict[int, int]) -> float:
    """Max over effective qubits of ``|| G|phi> - (-1)^kappa |phi> ||``."""
    if state.num_qubits != lattice.num_physical:
        raise ValueError("state does not match lattice size")
    if not state.is_pure:
        raise ValueError("stabilizer residuals are defined for pure states")
    worst = 0.0
    for a in range(lattice.effective):
        g_phi = stabilizer(lattice, a).apply(state)
        sign = (-1) ** kappa.get(a, 0)
        worst = max(worst, float(np.linalg.norm(g_phi - sign * state.data)))
    return worst
