import itertools

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20061015)


def random_ket(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def random_density(rng, n, rank=None):
    d = 2**n
    rank = rank or d
    a = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_unitary(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_kraus(rng, n_ops=None, d=2):
    """Kraus set from the blocks of a random isometry."""
    n_ops = n_ops or rng.integers(1, 5)
    v = random_unitary(rng, d * n_ops)[:, :d]
    return [v[k * d:(k + 1) * d] for k in range(n_ops)]


def brute_embed(gate, targets, n):
    """Full matrix of ``gate`` on ``targets`` by explicit basis enumeration (qubit 0 = MSB)."""
    dim = 2**n
    k = len(targets)
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_in = int("".join(str(bits[t]) for t in targets), 2)
        for sub_out in range(2**k):
            new = list(bits)
            for pos, t in enumerate(targets):
                new[t] = (sub_out >> (k - 1 - pos)) & 1
            row = int("".join(map(str, new)), 2)
            out[row, col] += gate[sub_out, sub_in]
    return out


def brute_partial_trace(rho, keep, n):
    """Reduced density matrix by summing over traced-out bit strings."""
    rest = [q for q in range(n) if q not in keep]
    dk = 2 ** len(keep)
    out = np.zeros((dk, dk), dtype=complex)

    def index(kbits, rbits):
        bits = [0] * n
        for q, b in zip(keep, kbits):
            bits[q] = b
        for q, b in zip(rest, rbits):
            bits[q] = b
        return int("".join(map(str, bits)), 2)

    for rbits in itertools.product((0, 1), repeat=len(rest)):
        for i, kb_i in enumerate(itertools.product((0, 1), repeat=len(keep))):
            for j, kb_j in enumerate(itertools.product((0, 1), repeat=len(keep))):
                out[i, j] += rho[index(kb_i, rbits), index(kb_j, rbits)]
    return out


def same_up_to_phase(a, b, tol=1e-10):
    return abs(abs(np.vdot(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) < tol


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
