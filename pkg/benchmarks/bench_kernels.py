"""Compare the compiled and pure-Python grid kernels on random masks.

    python3 benchmarks/bench_kernels.py --size 64 --repeat 20
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from tilescape._kernels import compiled_backend, python_backend


def random_mask(size: int, density: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.random((size, size)) < density


def bench(backend, mask, repeat: int) -> dict[str, float]:
    h, w = mask.shape
    start, goal = (0, 0), (w - 1, h - 1)
    mask = mask.copy()
    mask[0, 0] = mask[h - 1, w - 1] = True
    cases = {
        "label4": lambda: backend.label4(mask),
        "bfs_distances": lambda: backend.bfs_distances(mask, start),
        "shortest_path": lambda: backend.shortest_path(mask, start, goal),
    }
    return {name: min(timeit.repeat(fn, number=1, repeat=repeat)) for name, fn in cases.items()}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=64, help="mask side length")
    parser.add_argument("--density", type=float, default=0.7, help="fraction of walkable cells")
    parser.add_argument("--repeat", type=int, default=20, help="timing repeats (best is reported)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    mask = random_mask(args.size, args.density, args.seed)
    py = bench(python_backend, mask, args.repeat)
    print(f"{args.size}x{args.size} mask, density {args.density}, best of {args.repeat}")
    if compiled_backend is None:
        print("compiled backend not built; python only")
        for name, t in py.items():
            print(f"{name:<14} python {t * 1e3:9.3f} ms")
        return
    c = bench(compiled_backend, mask, args.repeat)
    print(f"{'kernel':<14} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for name in py:
        print(f"{name:<14} {py[name] * 1e3:10.3f} {c[name] * 1e3:12.3f} {py[name] / c[name]:7.1f}x")


if __name__ == "__main__":
    main()
