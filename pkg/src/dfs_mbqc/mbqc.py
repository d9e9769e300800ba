"""Measurement patterns on standard and dual-rail cluster states.

Every transfer step through a site measured at angle ``alpha`` implements the
logical map ``X^b H Rz(-alpha)`` on the wire, with ``b`` fixed by the outcome:

================  ===========================  ==================
strategy          outcomes                     ``b``
================  ===========================  ==================
standard single   ``s``                        ``s``
joint pair        ``s`` (``|psi^{+-alpha}>``)  ``s ^ 1``
paired singles    ``s1, s2``                   ``s1 ^ s2 ^ 1``
================  ===========================  ==================

:class:`ByproductFrame` accumulates these Pauli byproducts and adapts later
angles so that the frame-corrected output equals ``prod H Rz(-alpha)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .cluster import (
    LatticeSpec,
    build_encoded_cluster,
    build_standard_cluster,
    decode_dual_rail,
)
from .core import (
    CZ,
    H,
    I2,
    X,
    Z,
    QuantumState,
    apply_gate,
    equatorial_ket,
    fidelity,
    partial_trace,
    projective_measure,
    rz,
)
from .noise import NoiseSpec, apply_noise

BASIS_KINDS = ("joint_pair", "single_equatorial", "computational")


class LeakageError(RuntimeError):
    """A pair measurement found the pair outside the dual-rail code space."""

    def __init__(self, probability: float, state: QuantumState):
        super().__init__(f"leakage outcome observed (probability {probability:.3e})")
        self.probability = probability
        self.state = state


@dataclass(frozen=True)
class MeasurementBasis:
    kind: str
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if not np.isfinite(self.alpha):
            raise ValueError("basis angle must be finite")

    def kets(self) -> list[np.ndarray]:
        if self.kind == "single_equatorial":
            return [equatorial_ket(self.alpha, +1), equatorial_ket(self.alpha, -1)]
        if self.kind == "computational":
            return [np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)]
        phase = np.exp(1j * self.alpha)
        return [np.array([0, 1, sign * phase, 0], dtype=complex) / np.sqrt(2) for sign in (+1, -1)]

    def projectors(self) -> list[np.ndarray]:
        """Outcome projectors; ``joint_pair`` adds the leakage projector last."""
        ps = [np.outer(k, k.conj()) for k in self.kets()]
        if self.kind == "joint_pair":
            ps.append(np.diag([1, 0, 0, 1]).astype(complex))
        return ps


@dataclass(frozen=True)
class ByproductFrame:
    """Pending Pauli ``X^x Z^z`` on one logical wire (state = frame * ideal)."""

    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.x not in (0, 1) or self.z not in (0, 1):
            raise ValueError("byproduct powers are bits")

    def __mul__(self, other: "ByproductFrame") -> "ByproductFrame":
        return ByproductFrame(self.x ^ other.x, self.z ^ other.z)

    def adapt(self, alpha: float) -> float:
        """Angle to measure so the corrected wire sees ``Rz(-alpha)``."""
        return -alpha if self.x else alpha

    def after_step(self, b: int) -> "ByproductFrame":
        # X^b H Rz(-a') X^x Z^z  ==  X^(b^z) Z^x H Rz(-a)   (a' = adapt(a), up to phase)
        return ByproductFrame(b ^ self.z, self.x)

    def operator(self) -> np.ndarray:
        return np.linalg.matrix_power(X, self.x) @ np.linalg.matrix_power(Z, self.z)

    def correct(self, rho: np.ndarray) -> np.ndarray:
        p = self.operator()
        return p.conj().T @ rho @ p


class StepResult(NamedTuple):
    outcome: int | tuple[int, int]
    state: QuantumState
    frame: ByproductFrame
    probability: float
    byproduct: np.ndarray
    logical_map: np.ndarray | None


def simulated_map(b: int, alpha: float) -> np.ndarray:
    """``X^b H Rz(-alpha)``."""
    return np.linalg.matrix_power(X, b) @ H @ rz(-alpha)


def _pair(lattice: LatticeSpec, effective: int) -> list[int]:
    if lattice.encoding != "dual-rail":
        raise ValueError("pair measurements need a dual-rail lattice")
    if not 0 <= effective < lattice.effective:
        raise ValueError(f"effective qubit {effective} not in lattice")
    return list(lattice.physical_map[effective])


def measure_joint(
    state: QuantumState,
    lattice: LatticeSpec,
    effective: int,
    alpha: float,
    frame: ByproductFrame = ByproductFrame(),
    rng: np.random.Generator | None = None,
    outcome: int | None = None,
) -> StepResult:
    """Joint measurement of a pair in ``{|psi^{+a}>, |psi^{-a}>}`` with ``a = frame.adapt(alpha)``.

    Raises :class:`LeakageError` if the completing projector onto
    ``span{|00>, |11>}`` fires.
    """
    pair = _pair(lattice, effective)
    measured = frame.adapt(alpha)
    basis = MeasurementBasis("joint_pair", measured)
    s, p, post = projective_measure(state, basis.projectors(), pair, rng=rng, outcome=outcome)
    if s == 2:
        raise LeakageError(p, post)
    b = s ^ 1
    return StepResult(s, post, frame.after_step(b), p, np.linalg.matrix_power(X, b), simulated_map(b, measured))


def measure_pair_singles(
    state: QuantumState,
    lattice: LatticeSpec,
    effective: int,
    alpha: float,
    frame: ByproductFrame = ByproductFrame(),
    rng: np.random.Generator | None = None,
    outcome: tuple[int, int] | None = None,
) -> StepResult:
    """Top qubit in ``{|+a>, |-a>}``, bottom qubit in ``{|+>, |->}``."""
    top, bottom = _pair(lattice, effective)
    measured = frame.adapt(alpha)
    forced = (None, None) if outcome is None else outcome
    s1, p1, state = projective_measure(
        state, MeasurementBasis("single_equatorial", measured).projectors(), [top], rng=rng, outcome=forced[0]
    )
    s2, p2, state = projective_measure(
        state, MeasurementBasis("single_equatorial", 0.0).projectors(), [bottom], rng=rng, outcome=forced[1]
    )
    b = s1 ^ s2 ^ 1
    return StepResult(
        (s1, s2), state, frame.after_step(b), p1 * p2, np.linalg.matrix_power(X, b), simulated_map(b, measured)
    )


def measure_computational_pair(
    state: QuantumState,
    lattice: LatticeSpec,
    effective: int,
    apply_hadamards: bool = True,
    frame: ByproductFrame = ByproductFrame(),
    rng: np.random.Generator | None = None,
    outcome: tuple[int, int] | None = None,
) -> StepResult:
    """Fluorescence-style readout of both qubits of a pair.

    With ``apply_hadamards`` this is an ``X`` measurement of both qubits:
    outcomes ``00, 11`` give ``U = X``, ``01, 10`` give ``U = 1`` and the
    logical map ``U H``. Without it, the pair's logical ``Z`` is read out
    (``01`` -> 0, ``10`` -> 1), removing the site and leaving ``Z^bit`` on its
    neighbors; ``00`` or ``11`` then signal leakage.
    """
    top, bottom = _pair(lattice, effective)
    if apply_hadamards:
        state = apply_gate(apply_gate(state, H, [top]), H, [bottom])
    comp = MeasurementBasis("computational").projectors()
    forced = (None, None) if outcome is None else outcome
    c1, p1, state = projective_measure(state, comp, [top], rng=rng, outcome=forced[0])
    c2, p2, state = projective_measure(state, comp, [bottom], rng=rng, outcome=forced[1])
    p = p1 * p2
    if apply_hadamards:
        b = c1 ^ c2 ^ 1
        u = np.linalg.matrix_power(X, b)
        return StepResult((c1, c2), state, frame.after_step(b), p, u, u @ H)
    if c1 == c2:
        raise LeakageError(p, state)
    return StepResult((c1, c2), state, frame, p, Z if c1 else I2, None)


def apply_effective_cz(state: QuantumState, lattice: LatticeSpec, edge: tuple[int, int]) -> QuantumState:
    """CZ between the top-layer qubits of two dual-rail pairs (logical CZ)."""
    a, c = edge
    _pair(lattice, a), _pair(lattice, c)
    if a == c:
        raise ValueError("effective CZ needs two distinct effective qubits")
    return apply_gate(state, CZ, [lattice.top(a), lattice.top(c)])


def logical_pair_state(state: QuantumState, lattice: LatticeSpec, effective: int) -> tuple[np.ndarray, float]:
    """Logical 2x2 density matrix of one dual-rail pair and its leakage weight."""
    return decode_dual_rail(partial_trace(state, _pair(lattice, effective)))


def input_amplitudes(theta: float, phi: float) -> tuple[complex, complex]:
    """``cos(theta)|0> + e^{i phi} sin(theta)|1>``."""
    return complex(np.cos(theta)), complex(np.exp(1j * phi) * np.sin(theta))


@dataclass
class ExperimentRecord:
    encoding: str
    input_state: np.ndarray
    noise: NoiseSpec
    outcomes: list[tuple[int, str, tuple[int, ...]]]
    byproduct: ByproductFrame
    logical_output: QuantumState
    raw_output: QuantumState
    fidelity_vs_ideal: float
    probability: float
    leakage: float = 0.0
    alphas: tuple[float, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        from .jsonio import matrix_to_json

        return {
            "encoding": self.encoding,
            "input": [[float(a.real), float(a.imag)] for a in self.input_state],
            "noise": self.noise.to_dict(),
            "alphas": list(self.alphas),
            "outcomes": [{"site": s, "basis": k, "bits": list(b)} for s, k, b in self.outcomes],
            "byproduct": {"x": self.byproduct.x, "z": self.byproduct.z},
            "probability": self.probability,
            "leakage": self.leakage,
            "logical_output": matrix_to_json(self.logical_output.density_matrix()),
            "raw_output": matrix_to_json(self.raw_output.density_matrix()),
            "fidelity_vs_ideal": self.fidelity_vs_ideal,
        }


def _forced(outcomes, k: int, pair: bool):
    if outcomes == "random":
        return None
    if outcomes == "forced-zero":
        return (0, 0) if pair else 0
    return outcomes[k]


def run_chain(
    logical_input: tuple[complex, complex],
    noise: NoiseSpec = NoiseSpec(),
    encoding: str = "standard",
    n_effective: int = 3,
    outcomes="forced-zero",
    alphas: Sequence[float] | None = None,
    strategy: str = "joint",
    rng: np.random.Generator | None = None,
) -> ExperimentRecord:
    """Transfer ``logical_input`` along a linear chain of ``n_effective`` sites.

    Noise is applied once, after the cluster is built and before any
    measurement. Sites ``0 .. n-2`` are measured (adapting angles to the
    running byproduct frame); the logical state of the last site is returned
    both raw and frame-corrected.

    ``outcomes`` is ``"forced-zero"``, ``"random"`` or a per-site sequence
    (ints, or pairs for ``strategy="singles"``). ``encoding`` is ``"standard"``
    or ``"dfs"``.
    """
    if n_effective < 2:
        raise ValueError("a transfer chain needs at least two sites")
    mu, nu = logical_input
    psi = np.array([mu, nu], dtype=complex)
    if abs(np.linalg.norm(psi) - 1) > 1e-12:
        raise ValueError("logical input not normalized")
    alphas = tuple(float(a) for a in (alphas if alphas is not None else [0.0] * (n_effective - 1)))
    if len(alphas) != n_effective - 1:
        raise ValueError(f"need {n_effective - 1} measurement angles, got {len(alphas)}")
    if rng is None and outcomes == "random":
        rng = np.random.default_rng()

    frame = ByproductFrame()
    records = []
    probability = 1.0
    if encoding == "standard":
        lattice = LatticeSpec.chain(n_effective, "standard")
        state = apply_noise(build_standard_cluster(n_effective, (mu, nu)), lattice, noise)
        for k, alpha in enumerate(alphas):
            basis = MeasurementBasis("single_equatorial", frame.adapt(alpha))
            s, p, state = projective_measure(state, basis.projectors(), [k], rng=rng, outcome=_forced(outcomes, k, False))
            frame = frame.after_step(s)
            probability *= p
            records.append((k, basis.kind, (s,)))
        raw = partial_trace(state, [n_effective - 1]).density_matrix()
        leakage = 0.0
    elif encoding == "dfs":
        lattice = LatticeSpec.chain(n_effective, "dual-rail")
        state, _ = build_encoded_cluster(lattice, (mu, nu))
        state = apply_noise(state, lattice, noise)
        if strategy not in ("joint", "singles"):
            raise ValueError(f"unknown measurement strategy {strategy!r}")
        step = measure_joint if strategy == "joint" else measure_pair_singles
        kind = "joint_pair" if strategy == "joint" else "single_equatorial"
        for k, alpha in enumerate(alphas):
            res = step(state, lattice, k, alpha, frame, rng=rng, outcome=_forced(outcomes, k, strategy == "singles"))
            state, frame = res.state, res.frame
            probability *= res.probability
            bits = res.outcome if isinstance(res.outcome, tuple) else (res.outcome,)
            records.append((k, kind, bits))
        raw, leakage = logical_pair_state(state, lattice, n_effective - 1)
    else:
        raise ValueError(f"unknown encoding {encoding!r}")

    target = psi
    for alpha in alphas:
        target = H @ rz(-alpha) @ target
    corrected = frame.correct(raw)
    out = QuantumState(corrected, 1)
    return ExperimentRecord(
        encoding=encoding,
        input_state=psi,
        noise=noise,
        outcomes=records,
        byproduct=frame,
        logical_output=out,
        raw_output=QuantumState(raw, 1),
        fidelity_vs_ideal=fidelity(out, QuantumState(target, 1)),
        probability=probability,
        leakage=leakage,
        alphas=alphas,
    )


def run_transfer_chain(
    theta: float,
    phi: float,
    noise: NoiseSpec = NoiseSpec(),
    encoding: str = "standard",
    n_effective: int = 3,
    outcomes="forced-zero",
    rng: np.random.Generator | None = None,
    **kwargs,
) -> ExperimentRecord:
    """:func:`run_chain` on the input ``cos(theta)|0> + e^{i phi} sin(theta)|1>``."""
    return run_chain(input_amplitudes(theta, phi), noise, encoding, n_effective, outcomes, rng=rng, **kwargs)


def chain_channel(noise: NoiseSpec, encoding: str = "standard", n_effective: int = 3, **kwargs):
    """The frame-corrected transfer chain as a map on 2x2 density matrices.

    Mixed inputs are decomposed into eigenvectors and the pure-input outputs
    are mixed with the same weights.
    """

    def channel(rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
        out = np.zeros((2, 2), dtype=complex)
        for wi, vi in zip(w, v.T):
            if abs(wi) < 1e-15:
                continue
            vi = vi / np.linalg.norm(vi)
            rec = run_chain((vi[0], vi[1]), noise, encoding, n_effective, **kwargs)
            out += wi * rec.logical_output.density_matrix()
        return out

    return channel


def analytic_standard_output(theta: float, phi: float, gamma_t: float) -> np.ndarray:
    """Closed-form output of the noisy three-site standard chain (outcomes 0, 0).

    Bloch vector ``(e^{-g} sin2t cos p, e^{-3g/2} sin2t sin p, e^{-g/2} cos2t)``
    with ``g = gamma_t``.
    """
    off = np.exp(-1.5 * gamma_t) / 2 * (np.exp(gamma_t / 2) * np.cos(phi) - 1j * np.sin(phi)) * np.sin(2 * theta)
    rho = I2 / 2 + np.exp(-gamma_t / 2) * np.cos(2 * theta) / 2 * Z
    rho[0, 1] += off
    rho[1, 0] += np.conj(off)
    return rho
