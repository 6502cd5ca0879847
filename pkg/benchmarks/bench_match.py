"""Compare the compiled and pure-Python morphism kernels.

    python benchmarks/bench_match.py [--repeat N]
"""
from __future__ import annotations

import argparse
import random
import time

from grammod import _match, _vf2_py
from grammod.graph import Graph
from grammod.smiles import parse_smiles

try:
    from grammod import _vf2
except ImportError:
    _vf2 = None


def random_graph(rng: random.Random, n: int, p: float, labels="AB") -> Graph:
    adj = [{} for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u][v] = adj[v][u] = "-"
    return Graph([rng.choice(labels) for _ in range(n)], adj)


def cases():
    rng = random.Random(7)
    methyl = parse_smiles("[CH3]")
    sugar = parse_smiles("OCC(O)C(O)C(O)C(O)C=O")
    yield "CH3 in CC(C)CO (all maps)", methyl, parse_smiles("CC(C)CO")
    yield "C-C-O in hexose (all maps)", parse_smiles("[C][C][O]"), sugar
    yield "path5 in G(14, .35)", Graph(["A"] * 5, [{1: "-"}, {0: "-", 2: "-"}, {1: "-", 3: "-"},
                                                   {2: "-", 4: "-"}, {3: "-"}]), \
        Graph(["A"] * 14, random_graph(rng, 14, 0.35, "A").adjacency)
    yield "G(6, .5) in G(16, .4)", random_graph(rng, 6, 0.5), random_graph(rng, 16, 0.4)


def timed(search, pattern, host, repeat: int) -> tuple[float, int]:
    best = float("inf")
    n = 0
    for _ in range(repeat):
        t = time.perf_counter()
        n = _match.count(pattern, host, -1, search=search)
        best = min(best, time.perf_counter() - t)
    return best, n


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    kernels = [("python", _vf2_py.search)]
    if _vf2 is not None:
        kernels.insert(0, ("cython", _vf2.search))
    else:
        print("compiled kernel not built; timing the Python fallback only")
    print(f"{'case':32} {'maps':>8} " + " ".join(f"{k:>12}" for k, _ in kernels) + "  speedup")
    for name, pat, host in cases():
        times = []
        counts = set()
        for _, search in kernels:
            t, n = timed(search, pat, host, args.repeat)
            times.append(t)
            counts.add(n)
        assert len(counts) == 1, f"kernels disagree on {name}: {counts}"
        speed = f"{times[-1] / times[0]:7.1f}x" if len(times) > 1 else ""
        print(f"{name:32} {counts.pop():>8} " + " ".join(f"{t * 1e3:10.2f}ms" for t in times)
              + f"  {speed}")


if __name__ == "__main__":
    main()
