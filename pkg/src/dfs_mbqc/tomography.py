"""Single-qubit process tomography in the unnormalized Pauli basis.

A channel is probed on ``|0>, |1>, |+>, |+y>``; its action on the off-diagonal
matrix units follows from the linear identity

    E(|0><1|) = E(|+><+|) + i E(|+y><+y|) - (1 + i)/2 [E(|0><0|) + E(|1><1|)],

and the process matrix ``chi`` (``E(rho) = sum chi_mn P_m rho P_n^dag``) is the
solution of the 16x16 system ``lambda = beta chi``. Kraus operators come from
the eigendecomposition of ``chi``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .core import I2, KET_0, KET_1, KET_PLUS, KET_PLUS_Y, X, Y, Z

PAULIS = (I2, X, Y, Z)
PROBE_KETS = (KET_0, KET_1, KET_PLUS, KET_PLUS_Y)

Channel = Callable[[np.ndarray], np.ndarray]


class ChannelError(ValueError):
    pass


def _unit(j: int) -> np.ndarray:
    e = np.zeros((2, 2), dtype=complex)
    e.flat[j] = 1
    return e


MATRIX_UNITS = tuple(_unit(j) for j in range(4))  # |0><0|, |0><1|, |1><0|, |1><1|


def apply_kraus(kraus: Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in kraus)


def kraus_channel(kraus: Sequence[np.ndarray]) -> Channel:
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    return lambda rho: apply_kraus(kraus, rho)


def kraus_completeness_error(kraus: Sequence[np.ndarray]) -> float:
    return float(np.abs(sum(k.conj().T @ k for k in kraus) - I2).max())


def probe_channel(channel: Channel, tol: float = 1e-10) -> tuple[np.ndarray, ...]:
    """``E(|0><0|), E(|1><1|), E(|+><+|), E(|+y><+y|)``.

    Raises :class:`ChannelError` if any output trace deviates from 1 by more
    than ``tol``.
    """
    outs = tuple(np.asarray(channel(np.outer(k, k.conj())), dtype=complex) for k in PROBE_KETS)
    for k, out in zip(("0", "1", "+", "+y"), outs):
        if abs(np.trace(out) - 1) > tol:
            raise ChannelError(f"channel is not trace preserving on |{k}> (trace {np.trace(out):.12g})")
    return outs


def reconstruct_offdiagonal(probes: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """``E(|0><1|)`` from the probe outputs, and ``E(|1><0|)`` as its adjoint."""
    e00, e11, e_plus, e_plus_y = probes
    e01 = e_plus + 1j * e_plus_y - (1 + 1j) / 2 * (e00 + e11)
    return e01, e01.conj().T


@lru_cache(maxsize=None)
def _beta() -> np.ndarray:
    beta = np.empty((4, 4, 4, 4), dtype=complex)
    for m, pm in enumerate(PAULIS):
        for n, pn in enumerate(PAULIS):
            for j, rho in enumerate(MATRIX_UNITS):
                beta[m, n, j] = (pm @ rho @ pn.conj().T).reshape(4)
    beta.setflags(write=False)
    return beta


def beta_tensor() -> np.ndarray:
    """``beta[m, n, j, k]`` with ``P_m rho_j P_n^dag = sum_k beta[m, n, j, k] rho_k``."""
    return _beta()


def lambda_matrix(outputs: Sequence[np.ndarray]) -> np.ndarray:
    """``lambda[j, k]``: coefficient of ``rho_k`` in ``E(rho_j)``."""
    return np.array([np.asarray(o, dtype=complex).reshape(4) for o in outputs])


def chi_from_lambda(outputs: Sequence[np.ndarray], tol: float = 1e-10) -> np.ndarray:
    """Solve ``lambda = beta chi`` given ``E`` on the four matrix units (in order)."""
    lam = lambda_matrix(outputs).reshape(16)
    if not np.all(np.isfinite(lam)):
        raise ChannelError("channel outputs contain non-finite entries")
    # rows (j, k), columns (m, n)
    system = beta_tensor().transpose(2, 3, 0, 1).reshape(16, 16)
    chi = np.linalg.solve(system, lam)
    residual = np.abs(system @ chi - lam).max()
    if residual > tol:
        raise ChannelError(f"chi solve residual {residual:.3e}")
    return chi.reshape(4, 4)


def chi_from_channel(channel: Channel) -> np.ndarray:
    probes = probe_channel(channel)
    e01, e10 = reconstruct_offdiagonal(probes)
    return chi_from_lambda([probes[0], e01, e10, probes[1]])


def chi_from_kraus(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Direct expansion ``chi_mn = sum_i e_im e_in^*`` with ``e_im = Tr(P_m K_i) / 2``."""
    e = np.array([[np.trace(p.conj().T @ k) / 2 for p in PAULIS] for k in kraus])
    return e.T @ e.conj()


def kraus_from_chi(chi: np.ndarray, neg_tol: float = 1e-8, herm_tol: float = 1e-10, drop: float = 1e-12):
    """``K_i = sqrt(D_i) sum_j U[j, i] P_j`` from ``chi = U D U^dag``.

    Eigenvalues in ``[-neg_tol, 0)`` are clamped to zero (with a warning when
    below ``-1e-12``); anything more negative means the map is not completely
    positive.
    """
    chi = np.asarray(chi, dtype=complex)
    herm = np.abs(chi - chi.conj().T).max()
    if herm > herm_tol:
        raise ChannelError(f"chi is not Hermitian (residual {herm:.3e})")
    d, u = np.linalg.eigh((chi + chi.conj().T) / 2)
    if d.min() < -neg_tol:
        raise ChannelError(f"chi has eigenvalue {d.min():.3e}; channel is not completely positive")
    if d.min() < -1e-12:
        warnings.warn(f"clamping chi eigenvalue {d.min():.3e} to zero", RuntimeWarning, stacklevel=2)
    kraus = []
    for i in np.argsort(d)[::-1]:
        if d[i] < drop:
            continue
        kraus.append(np.sqrt(d[i]) * sum(u[j, i] * PAULIS[j] for j in range(4)))
    return kraus


def trace_preservation_error(chi: np.ndarray) -> float:
    total = sum(chi[m, n] * PAULIS[n].conj().T @ PAULIS[m] for m in range(4) for n in range(4))
    return float(np.abs(total - I2).max())


def entanglement_fidelity(channel: Channel) -> float:
    """``<b| (1 (x) E)(|b><b|) |b>`` with ``|b> = (|00> + |11>)/sqrt(2)``.

    ``E`` is only evaluated on density matrices; the off-diagonal blocks
    use :func:`reconstruct_offdiagonal`.
    """
    probes = probe_channel(channel)
    e01, e10 = reconstruct_offdiagonal(probes)
    blocks = {(0, 0): probes[0], (0, 1): e01, (1, 0): e10, (1, 1): probes[1]}
    out = np.zeros((4, 4), dtype=complex)
    for (i, j), blk in blocks.items():
        out[2 * i:2 * i + 2, 2 * j:2 * j + 2] = blk / 2
    b = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return float(np.clip(np.vdot(b, out @ b).real, 0.0, 1.0))


def average_fidelity(f_e: float) -> float:
    if not -1e-12 <= f_e <= 1 + 1e-12:
        raise ValueError(f"entanglement fidelity {f_e!r} outside [0, 1]")
    return (2 * f_e + 1) / 3


def haar_state(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def monte_carlo_average_fidelity(channel: Channel, n_samples: int, rng: np.random.Generator):
    """Mean and standard error of ``F(E(psi), psi)`` over Haar-random ``psi``.

    With a pure reference the fidelity is ``<psi|E(psi)|psi>``.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples for a standard error")
    v = rng.normal(size=(n_samples, 2)) + 1j * rng.normal(size=(n_samples, 2))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    vals = np.empty(n_samples)
    for i, psi in enumerate(v):
        vals[i] = np.vdot(psi, channel(np.outer(psi, psi.conj())) @ psi).real
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_samples))


def analytic_transfer_kraus(tau: float) -> list[np.ndarray]:
    """Logical Kraus set of the three-site standard chain under phase damping ``tau``."""
    a = tau / 4
    pre = np.exp(-3 * tau / 8)
    return [
        pre * np.sqrt(np.sinh(a) * np.cosh(tau / 2)) * X,
        pre * np.sqrt(np.cosh(a) * np.cosh(tau / 2)) * I2,
        pre * np.cosh(a) * np.sqrt(2 * np.sinh(a)) * Z,
        -1j * pre * np.sinh(a) * np.sqrt(2 * np.cosh(a)) * Y,
    ]


def channel_distance(a: Channel, b: Channel) -> float:
    """Max entrywise difference of two channels on the four probe states."""
    return float(max(np.abs(a(np.outer(k, k.conj())) - b(np.outer(k, k.conj()))).max() for k in PROBE_KETS))


@dataclass
class TomographyResult:
    chi: np.ndarray
    kraus: list[np.ndarray]
    entanglement_fidelity: float
    average_fidelity: float

    def to_dict(self) -> dict:
        from .jsonio import chi_to_json, kraus_to_json

        return {
            **chi_to_json(self.chi),
            **kraus_to_json(self.kraus),
            "completeness_error": kraus_completeness_error(self.kraus),
            "entanglement_fidelity": self.entanglement_fidelity,
            "average_fidelity": self.average_fidelity,
        }


def process_tomography(channel: Channel) -> TomographyResult:
    chi = chi_from_channel(channel)
    kraus = kraus_from_chi(chi)
    f_e = entanglement_fidelity(channel)
    return TomographyResult(chi, kraus, f_e, average_fidelity(f_e))
