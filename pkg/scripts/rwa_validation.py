"""Compare the lab-frame and effective two-qubit dynamics over drive strength and coupling.

Prints one row per (omega0/Omega, lambda/omega0) pair with the maximal
final-population deviation.
"""
import argparse

from coupledqubits.model import QubitSystem
from coupledqubits.protocols import preset, run_rwa_validation


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ratios", default="25,50,100", help="omega0/Omega values")
    parser.add_argument("--couplings", default="0.05,0.2,0.5", help="lambda/omega0 values")
    parser.add_argument("--omega0", type=float, default=100.0)
    args = parser.parse_args()

    spec = preset("bell_singlet_pi_half")
    print("omega0/Omega,lambda/omega0,max_deviation")
    for ratio in (float(x) for x in args.ratios.split(",")):
        for c in (float(x) for x in args.couplings.split(",")):
            system = QubitSystem(2, c * args.omega0, args.omega0, (1.0, 0.3))
            rep = run_rwa_validation(spec, ratio, system, samples=50)
            print(f"{ratio:g},{c:g},{rep.max_deviation:.3e}")


if __name__ == "__main__":
    main()
