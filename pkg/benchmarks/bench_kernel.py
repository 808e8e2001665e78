"""Time the compiled trial kernel against the numpy fallback.

    python benchmarks/bench_kernel.py --trials 20000
"""
import argparse
import time

import numpy as np

from leodist import ObservationPoint, SimulationConfig, montecarlo, preset

CASES = [
    ("fig3-circle", "earth"),
    ("fig4", "shell:2"),
    ("spacex", "earth"),
]


def bench(backend, spec, obs, sim, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = montecarlo.simulate_distances(spec, obs, sim, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=20_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = montecarlo.available_backends()
    sim = SimulationConfig(args.trials, args.seed)
    print(f"{'case':<22}{'points':>10}" + "".join(f"{b + ' [s]':>16}" for b in backends)
          + f"{'ns/point':>12}{'speedup':>10}")
    for name, obs_text in CASES:
        spec, obs = preset(name), ObservationPoint.parse(obs_text)
        points = sum(spec.counts) * args.trials
        times, outs = {}, {}
        for b in backends:
            times[b], outs[b] = bench(b, spec, obs, sim, args.repeat)
        fastest = min(times.values())
        speedup = times["python"] / times["compiled"] if "compiled" in times else 1.0
        line = f"{name + ' ' + obs_text:<22}{points:>10.2e}" + "".join(f"{times[b]:>16.3f}" for b in backends)
        print(line + f"{1e9 * fastest / points:>12.1f}{speedup:>10.1f}")
        if len(outs) > 1:
            a, b = outs.values()
            assert np.allclose(a, b, rtol=1e-12, atol=0), "backends disagree"


if __name__ == "__main__":
    main()
