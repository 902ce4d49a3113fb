"""Compare the compiled and numpy secular-equation kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

For each graph the script times a full grid of secular gaps, a grid of
eigenphase sums and a batch of golden-section refinements with every
available backend, and checks that the backends agree.
"""

import argparse
import time

import numpy as np

from qgraph_entropy.ensemble import sample_lengths
from qgraph_entropy.evolution import default_grid_step, evolution_family
from qgraph_entropy.graph import complete_metric_graph, star_metric_graph
from qgraph_entropy.kernels import available_backends
from qgraph_entropy.scattering import build_conditions, star_conditions


def cases():
    for E in (4, 12, 30):
        g = star_metric_graph(E, sample_lengths(E, E))
        yield f"equi star E={E}", g, star_conditions(g, "equitransmitting")
    g = complete_metric_graph(5, sample_lengths(10, 5))
    yield "K5 equi", g, build_conditions(g, "equitransmitting")


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--roots", type=int, default=40, help="window length in mean level spacings")
    args = parser.parse_args(argv)

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':<18} {'B':>4} {'grid':>6} {'kernel':<8} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for name, g, conds in cases():
        fam = evolution_family(g, conds)
        step = default_grid_step(g.total_length)
        kappas = np.arange(0.1, 0.1 + args.roots * np.pi / g.total_length, step)
        brackets = [(k, k + 2 * step) for k in kappas[::16]]

        timings = {"gaps": {}, "phases": {}, "golden": {}}
        results = {"gaps": {}, "phases": {}, "golden": {}}
        for bname, mod in backends.items():
            t, out = best_of(lambda: mod.secular_gaps(fam.core, fam.left, fam.right, kappas), args.repeat)
            timings["gaps"][bname], results["gaps"][bname] = t, out
            t, out = best_of(lambda: mod.phase_sums(fam.core, fam.left, fam.right, kappas), args.repeat)
            timings["phases"][bname], results["phases"][bname] = t, out
            t, out = best_of(lambda: [mod.golden_minimize(fam.core, fam.left, fam.right, a, b, 1e-10)[0]
                                      for a, b in brackets], args.repeat)
            timings["golden"][bname], results["golden"][bname] = t, np.array(out)

        for kernel in ("gaps", "phases", "golden"):
            row = timings[kernel]
            cols = " ".join(f"{row[b] * 1e3:>8.2f}ms" for b in backends)
            speed = f"{row['python'] / row['cython']:8.1f}x" if "cython" in row else "       -"
            size = len(brackets) if kernel == "golden" else len(kappas)
            print(f"{name:<18} {g.B:>4} {size:>6} {kernel:<8} {cols} {speed}")
            if "cython" in row:
                diff = np.max(np.abs(results[kernel]["cython"] - results[kernel]["python"]))
                assert diff < 1e-8, f"backends disagree on {name} {kernel}: {diff}"


if __name__ == "__main__":
    main()
