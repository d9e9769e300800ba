"""Self-check suites shared by the CLI and the test-suite."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cluster import LatticeSpec, build_encoded_cluster, verify_stabilizers
from .core import I2, X, H, QuantumState, embed, fidelity
from .dfs3 import verify_collective_invariance
from .mbqc import measure_computational_pair


@dataclass
class CheckResult:
    suite: str
    name: str
    residual: float
    threshold: float
    expect_fail: bool = False

    @property
    def passed(self) -> bool:
        ok = self.residual < self.threshold
        return not ok if self.expect_fail else ok

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tag = " (expected-fail control)" if self.expect_fail else ""
        return f"[{status}] {self.suite}: {self.name}{tag} residual={self.residual:.3e} threshold={self.threshold:.0e}"

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "residual": self.residual,
            "threshold": self.threshold,
            "expect_fail": self.expect_fail,
            "passed": self.passed,
        }


DEFAULT_LATTICES = (
    LatticeSpec.chain(2),
    LatticeSpec.chain(3),
    LatticeSpec.chain(4),
    LatticeSpec.grid(2, 2),
)


def stabilizer_suite(lattices=DEFAULT_LATTICES, flip_kappa: bool = False, tol: float = 1e-10) -> list[CheckResult]:
    """Eigenvalue equations of every built encoded cluster.

    ``flip_kappa`` checks against a corrupted eigenvalue set (residual 2).
    """
    out = []
    for lat in lattices:
        state, kappa = build_encoded_cluster(lat)
        if flip_kappa:
            kappa = {**kappa, 0: 1}
        name = f"{lat.effective} effective, edges={list(lat.edges)}"
        out.append(CheckResult("stabilizer", name, verify_stabilizers(state, lat, kappa), tol))
    return out


def dfs3_suite(samples: int = 100, states: int = 10, seed: int = 0, tol: float = 1e-9) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    betas = rng.uniform(-np.pi, np.pi, size=(samples, 3))
    worst = verify_collective_invariance(betas, states, rng)
    local = verify_collective_invariance(betas[:1], states, rng, noise=lambda b: embed(X, [0], 3))
    return [
        CheckResult("dfs3", f"collective noise, {samples} betas x {states} states", worst, tol),
        CheckResult("dfs3", "local X on qubit 1 (negative control)", local, 1e-3, expect_fail=True),
    ]


def readout_table_expected(mu: complex, nu: complex) -> dict[tuple[int, int], tuple[np.ndarray, np.ndarray]]:
    """Pair-2' state (on |00>,|01>,|10>,|11>) and byproduct for each readout of pair 1'."""
    r = 1 / np.sqrt(2)
    v = lambda a01, a10: np.array([0, a01, a10, 0], dtype=complex)  # noqa: E731
    return {
        (0, 0): (r * v(mu - nu, -(mu + nu)), X),
        (0, 1): (-r * v(mu + nu, -(mu - nu)), I2),
        (1, 0): (r * v(mu + nu, -(mu - nu)), I2),
        (1, 1): (-r * v(mu - nu, -(mu + nu)), X),
    }


def readout_table_suite(mu: complex = 0.6, nu: complex = 0.8j, tol: float = 1e-10) -> list[CheckResult]:
    """Readout of pair 1' after H on both qubits, against the tabulated rows."""
    lat = LatticeSpec.chain(2)
    state, _ = build_encoded_cluster(lat, (mu, nu))
    psi = np.array([mu, nu])
    out = []
    for bits, (expected, u_expected) in readout_table_expected(mu, nu).items():
        res = measure_computational_pair(state, lat, 0, outcome=bits)
        pair2 = res.state.data.reshape(4, 4)[2 * bits[0] + bits[1]]
        amp_err = float(np.abs(pair2 - expected).max())
        logical = np.array([pair2[1], -pair2[2]])
        target = res.byproduct @ H @ psi
        infid = 1 - fidelity(QuantumState(logical, 1), QuantumState(target, 1))
        u_err = float(np.abs(res.byproduct - u_expected).max())
        out.append(CheckResult("readout", f"outcome {bits[0]}{bits[1]}", max(amp_err, infid, u_err), tol))
    return out
