"""Compare the compiled and pure-Python row-reduction kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Reports raw kernel timings on random dense matrices and end-to-end
``decompose`` timings with each backend swapped in.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

from jkpencil import _backend, _pykernels
from jkpencil.canonical import decompose
from jkpencil.exactalg import GF, Q
from jkpencil.harness import InstanceSpec, generate, random_blocks

try:
    from jkpencil import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def modp_rows(n, p, seed):
    rng = random.Random(seed)
    return [[rng.randrange(p) for _ in range(n)] for _ in range(n)]


def fraction_rows(n, seed):
    rng = random.Random(seed)
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]


def kernel_table(repeat):
    out = []
    for n in (25, 50, 100, 200):
        rows = modp_rows(n, 65521, n)
        row = {"kernel": "rref_modp", "n": n}
        for name, mod in BACKENDS.items():
            row[name] = best_of(lambda: mod.rref_modp([r[:] for r in rows], n, 65521), repeat)
        out.append(row)
    for n in (25, 50, 100):
        a, b = modp_rows(n, 65521, n), modp_rows(n, 65521, n + 1)
        row = {"kernel": "matmul_modp", "n": n}
        for name, mod in BACKENDS.items():
            row[name] = best_of(lambda: mod.matmul_modp(a, b, 65521), repeat)
        out.append(row)
    for n in (10, 20, 40):
        a, b = fraction_rows(n, n), fraction_rows(n, n + 1)
        row = {"kernel": "matmul_fraction", "n": n}
        for name, mod in BACKENDS.items():
            row[name] = best_of(lambda: mod.matmul_fraction(a, b), repeat)
        out.append(row)
    for n in (10, 20, 30):
        rows = fraction_rows(n, n)
        row = {"kernel": "rref_fraction", "n": n}
        for name, mod in BACKENDS.items():
            row[name] = best_of(lambda: mod.rref_fraction([r[:] for r in rows], n), repeat)
        out.append(row)
    return out


def decompose_table(repeat):
    cases = []
    for field, max_n, count in ((GF(101), 24, 10), (Q, 12, 10)):
        rng = random.Random(5)
        insts = []
        for seed in range(count):
            blocks = random_blocks(rng, field, max_n)
            A, B, _ = generate(InstanceSpec(field, tuple(blocks), seed))
            insts.append((A, B))
        cases.append((str(field), insts))
    out = []
    names = ("rref_fraction", "rref_modp", "matmul_fraction", "matmul_modp")
    saved = {nm: getattr(_backend, nm) for nm in names}
    try:
        for label, insts in cases:
            row = {"kernel": f"decompose x{len(insts)}", "n": f"<= {max(A.rows for A, _ in insts)} over {label}"}
            for name, mod in BACKENDS.items():
                for nm in names:
                    setattr(_backend, nm, getattr(mod, nm))
                row[name] = best_of(lambda: [decompose(A, B) for A, B in insts], repeat)
            out.append(row)
    finally:
        for nm, fn in saved.items():
            setattr(_backend, nm, fn)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write the table as JSON")
    args = ap.parse_args(argv)
    if "cython" not in BACKENDS:
        print("compiled kernels not built; only the Python backend is timed", file=sys.stderr)
    rows = kernel_table(args.repeat) + decompose_table(args.repeat)
    names = list(BACKENDS)
    header = f"{'kernel':<16} {'n':<16} " + " ".join(f"{nm + ' s':>11}" for nm in names)
    if "cython" in names:
        header += f" {'speedup':>8}"
    print(header)
    for r in rows:
        line = f"{r['kernel']:<16} {str(r['n']):<16} " + " ".join(f"{r[nm]:>11.4f}" for nm in names)
        if "cython" in names:
            line += f" {r['python'] / r['cython']:>7.1f}x"
        print(line)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
