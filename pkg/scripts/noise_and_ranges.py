#!/usr/bin/env python3
"""Print the background-photon tables and the maximum secure ranges.

Covers both the 1 nm and 0.1 pm receiver filters for every operating
condition (uplink/downlink, day/night, clear/cloudy).
"""

import argparse
from dataclasses import replace

from satlink import Scenario
from satlink.beam import ReceiverParams
from satlink.noise import NoiseEnvironment, nbar_background

CONDITIONS = ["night-up", "night-down", "day-up", "day-down-clear", "day-down-cloudy"]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--skip-tight", action="store_true",
                        help="skip the bisection for the tight maximum ranges")
    args = parser.parse_args()

    print("background photons per mode (receiver: a_R=40cm, fov=1e-10 sr, dt=10 ns)")
    print(f"{'condition':18s} {'1 nm filter':>14s} {'0.1 pm filter':>14s}")
    wide = ReceiverParams(aperture=0.4, efficiency=0.4)
    narrow = replace(wide, filter_width=1e-13)
    for name in CONDITIONS:
        env = NoiseEnvironment.from_name(name)
        print(f"{name:18s} {nbar_background(env, wide):14.3g} {nbar_background(env, narrow):14.3g}")

    if args.skip_tight:
        return 0

    print("\nmaximum secure slant range, zenith geometry (setup 1)")
    print(f"{'condition':18s} {'1 nm filter':>14s} {'0.1 pm filter':>14s}")
    for name in CONDITIONS:
        env = NoiseEnvironment.from_name(name)
        row = [name]
        for filt in (1e-9, 1e-13):
            scn = Scenario.build(env.direction, env.period, sky=env.sky, setup=1)
            scn = replace(scn, receiver=replace(scn.receiver, filter_width=filt))
            res = scn.max_range("tight")
            row.append(f"{res.z_max / 1e3:11.0f} km")
        print(f"{row[0]:18s} {row[1]:>14s} {row[2]:>14s}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
