"""Process tomography of the simulated transfer chain across noise strengths."""
import argparse

import numpy as np

from dfs_mbqc.mbqc import chain_channel
from dfs_mbqc.noise import NoiseSpec
from dfs_mbqc.tomography import analytic_transfer_kraus, channel_distance, kraus_channel, process_tomography


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tau", type=float, nargs="+", default=[0.15, 0.5, 1.0, 5.0])
    args = ap.parse_args()

    print(f"{'tau':>6} {'chi_II':>8} {'chi_XX':>8} {'chi_YY':>8} {'chi_ZZ':>8} {'F_e':>8} {'F_avg':>8} {'dist':>9} {'dfs F_avg':>10}")
    for tau in args.tau:
        std = process_tomography(chain_channel(NoiseSpec("independent_dephasing", tau)))
        dfs = process_tomography(chain_channel(NoiseSpec("collective_dephasing", tau), "dfs"))
        dist = channel_distance(kraus_channel(std.kraus), kraus_channel(analytic_transfer_kraus(tau)))
        diag = np.diag(std.chi).real
        print(
            f"{tau:6.2f} " + " ".join(f"{d:8.5f}" for d in diag)
            + f" {std.entanglement_fidelity:8.5f} {std.average_fidelity:8.5f} {dist:9.1e} {dfs.average_fidelity:10.6f}"
        )


if __name__ == "__main__":
    main()
