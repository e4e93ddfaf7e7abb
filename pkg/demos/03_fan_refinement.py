"""Refinement ladder for the rarefaction-side gain.

The only term that can grow the plain L1 norm of the difference is the
rarefaction-side gain, and that term is capped linearly by the fan
increment h.  This script halves h a few times and prints the measured
gain, the trace-level chain bound, and the a priori cap so the linear
collapse is visible.
"""

from wavetrack import FrontTrackingRun, Profile, burgers_flux, refinement_study

FLUX = burgers_flux()


def make_pair(h):
    run_I = FrontTrackingRun(FLUX, Profile([0.0], [-1.0, 1.0]), h)
    run_II = FrontTrackingRun(FLUX, Profile.constant(0.53), h)
    run_I.evolve(2.0)
    run_II.evolve(2.0)
    return run_I, run_II


def main():
    h_list = [0.4, 0.2, 0.1, 0.05]
    rows = refinement_study(make_pair, h_list, 1.0, 0.0, 2.0)

    print("fan crossing a constant state, horizon t=2")
    print()
    print(f"{'h':>6} {'gain_rs':>12} {'rs_chain':>12} {'rs_cap':>12}"
          f" {'chain/prev':>10} {'ok':>4}")
    prev = None
    for row in rows:
        cap = row["cap"]
        ratio = "" if prev is None else f"{row['rs_chain'] / prev:10.4f}"
        print(f"{row['h']:6.2f} {row['gain_rs']:12.6f}"
              f" {row['rs_chain']:12.6f} {cap.rs_cap:12.6f}"
              f" {ratio:>10} {str(row['passed']):>4}")
        prev = row["rs_chain"]

    last = rows[-1]["cap"]
    print()
    print("chain holds:", last.chain_link_ok,
          " cap holds:", last.cap_ok,
          " slack in the integrated bound:", round(last.bound_slack, 6))
    print()
    print("Halving h halves the chain bound; the measured gain itself")
    print("decays quadratically here because both difference traces at a")
    print("fan member are already O(h).")


if __name__ == "__main__":
    main()
