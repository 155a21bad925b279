"""Fidelity of chirped (RAP) and pulse-area Bell preparation under amplitude/chirp jitter."""
import argparse

import numpy as np

from coupledqubits.protocols import preset, run_protocol


def fidelities(name, jitter, seeds):
    return np.array([run_protocol(preset(name, {"jitter": jitter}, seed=s), samples=50).final_fidelity
                     for s in seeds])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--jitters", default="0,0.1,0.2,0.3")
    parser.add_argument("--draws", type=int, default=10)
    args = parser.parse_args()

    seeds = range(args.draws)
    print("jitter,protocol,min_fidelity,mean_fidelity")
    for j in (float(x) for x in args.jitters.split(",")):
        for name in ("bell_rap", "bell_singlet_pi_half"):
            f = fidelities(name, j, seeds)
            print(f"{j:g},{name},{f.min():.4f},{f.mean():.4f}")


if __name__ == "__main__":
    main()
