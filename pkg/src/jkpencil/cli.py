"""Command-line interface.

Exit codes: 0 success, 1 parse/validation error, 2 characteristic polynomial
does not split (partial result written), 3 verification failure, 4 not
enough sample points in the field, 5 failed round-trip trial.
Diagnostics on stderr are single-line JSON objects.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .canonical import (
    Decomposition,
    VerifyReport,
    check_congruence,
    decompose,
    verify,
    verify_partial,
)
from .errors import NotEnoughSamplePoints, ParseError, PencilError, SplitFailure
from .exactalg import Field
from .harness import InstanceSpec, cross_check, generate, invariants, random_blocks
from .matlin import Mat
from .pencil import (
    INTERLEAVED,
    SPLIT,
    BasisOrdering,
    JordanFinite,
    JordanInfinite,
    Kronecker,
    Pencil,
    assemble,
    basis_labels,
    block_from_json,
    block_to_json,
    canonical_sort,
    validate_pencil,
)

EXIT_OK, EXIT_INPUT, EXIT_SPLIT, EXIT_VERIFY, EXIT_SAMPLES, EXIT_TRIAL = 0, 1, 2, 3, 4, 5


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def field_from_json(obj) -> Field:
    if obj == "Q":
        return Field()
    if isinstance(obj, dict) and set(obj) == {"Fp"} and isinstance(obj["Fp"], int):
        return Field(obj["Fp"])
    raise ParseError(f"unknown field {obj!r}")


def field_to_json(field: Field):
    return "Q" if field.p is None else {"Fp": field.p}


def parse_field_flag(text: str) -> Field:
    if text == "Q":
        return Field()
    if text.startswith("Fp:"):
        try:
            return Field(int(text[3:]))
        except ValueError:
            pass
    raise ParseError(f"bad field {text!r}; expected Q or Fp:<prime>")


def _parse_matrix(field: Field, rows, name: str) -> Mat:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{name} must be an array of arrays")
    n = len(rows)
    out = []
    for i, r in enumerate(rows):
        if len(r) != n:
            raise ParseError(f"{name} row {i} has {len(r)} entries, expected {n}", row=i)
        row = []
        for j, x in enumerate(r):
            if not isinstance(x, str):
                raise ParseError(f"{name}[{i}][{j}] must be a string scalar", row=i, col=j)
            try:
                row.append(field.parse(x))
            except ParseError as exc:
                raise ParseError(f"{name}[{i}][{j}]: {exc}", row=i, col=j) from None
        out.append(row)
    return Mat._raw(field, out, n, n)


def load_pencil(path) -> Pencil:
    obj = _load_json(path)
    if not isinstance(obj, dict) or not {"field", "A", "B"} <= set(obj):
        raise ParseError("pencil file needs keys 'field', 'A' and 'B'")
    field = field_from_json(obj["field"])
    return validate_pencil(_parse_matrix(field, obj["A"], "A"), _parse_matrix(field, obj["B"], "B"))


def pencil_to_json(p: Pencil) -> dict:
    return {"field": field_to_json(p.field), "A": p.A.tolist(), "B": p.B.tolist()}


def _load_json(path):
    try:
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _dump(obj, path=None):
    text = json.dumps(obj, indent=2) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _error(kind: str, detail) -> None:
    sys.stderr.write(json.dumps({"error": {"kind": kind, "detail": detail}}) + "\n")


def _columns(T: Mat) -> list[list[str]]:
    return [[T.field.fmt(x) for x in c] for c in T.columns()]


def _reorder(d: Decomposition, ordering: BasisOrdering) -> Mat:
    if ordering is SPLIT:
        return d.T
    cols = d.T.columns()
    out = []
    for b, (lo, hi) in zip(d.blocks, d.ranges):
        pos = {lab: lo + i for i, lab in enumerate(basis_labels(b, SPLIT))}
        out += [cols[pos[lab]] for lab in basis_labels(b, INTERLEAVED)]
    return Mat.from_columns(d.field, out, d.n)


def _check_ordering(p: Pencil, T: Mat, blocks, ordering: BasisOrdering) -> VerifyReport:
    return check_congruence(p.A, p.B, T, assemble(blocks, ordering, p.field))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_decompose(args) -> int:
    p = load_pencil(args.input)
    ordering = BasisOrdering(args.ordering)
    try:
        d = decompose(p.A, p.B)
    except SplitFailure as exc:
        rep = verify_partial(p.A, p.B, exc)
        result = {
            "field": field_to_json(p.field),
            "ordering": SPLIT.value,
            "blocks": [block_to_json(b) for b in exc.blocks],
            "basis": _columns(exc.basis),
            "residual": pencil_to_json(exc.residual),
            "verified": rep.ok,
            "error": {"kind": exc.kind, "detail": exc.detail()},
        }
        _dump(result, args.output)
        _error(exc.kind, exc.detail())
        return EXIT_SPLIT
    T = _reorder(d, ordering)
    ok = _check_ordering(p, T, d.blocks, ordering).ok
    result = {
        "field": field_to_json(p.field),
        "ordering": ordering.value,
        "blocks": [block_to_json(b) for b in d.blocks],
        "basis": _columns(T),
        "verified": ok,
    }
    if args.trace:
        result["trace"] = [tr.render(p.field) for tr in d.traces]
    _dump(result, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = load_pencil(args.pencil)
    res = _load_json(args.result)
    if not isinstance(res, dict) or "blocks" not in res or "basis" not in res:
        raise ParseError("result file needs 'blocks' and 'basis'")
    if "field" in res and field_from_json(res["field"]) != p.field:
        raise ParseError("result file field differs from pencil field")
    ordering = BasisOrdering(res.get("ordering", "split"))
    blocks = canonical_sort(block_from_json(b, p.field) for b in res["blocks"])
    cols = res["basis"]
    if not isinstance(cols, list) or any(not isinstance(c, list) or len(c) != p.n for c in cols):
        raise ParseError("basis must be a list of columns of length n")
    T = Mat.from_columns(p.field, [[p.field.parse(x) for x in c] for c in cols], p.n)
    if sum(b.size for b in blocks) != p.n:
        _dump({"ok": False, "message": "block sizes do not sum to n", "location": None})
        _error("VerificationFailed", "block sizes do not sum to n")
        return EXIT_VERIFY
    report = _check_ordering(p, T, blocks, ordering).to_json()
    _dump(report)
    if not report["ok"]:
        _error("VerificationFailed", report)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_invariants(args) -> int:
    p = load_pencil(args.input)
    try:
        rep = invariants(p)
    except NotEnoughSamplePoints as exc:
        _error(exc.kind, exc.detail())
        return EXIT_SAMPLES
    _dump(rep.to_json(p.field))
    return EXIT_OK


def parse_block_spec(text: str, field: Field) -> list:
    """Parse ``"kron:1,jinf:2,jordan:3/2:1"``."""
    blocks = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        parts = item.split(":")
        try:
            if parts[0] == "kron" and len(parts) == 2:
                blocks.append(Kronecker(int(parts[1])))
            elif parts[0] == "jinf" and len(parts) == 2:
                blocks.append(JordanInfinite(int(parts[1])))
            elif parts[0] == "jordan" and len(parts) == 3:
                blocks.append(JordanFinite(field.scalar(field.parse(parts[1])), int(parts[2])))
            else:
                raise ValueError
        except ValueError:
            raise ParseError(f"bad block spec {item!r}") from None
    return blocks


def _seed(text: str):
    if text == "identity":
        return None
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"seed must be an integer or 'identity', got {text!r}") from None


def cmd_generate(args) -> int:
    if args.spec:
        obj = _load_json(args.spec)
        field = field_from_json(obj.get("field", "Q"))
        blocks = [block_from_json(b, field) for b in obj.get("blocks", [])]
        seed = obj.get("seed", 0)
        seed = _seed(seed) if isinstance(seed, str) else seed
        bound = obj.get("entry_bound", 3)
    else:
        field = parse_field_flag(args.field)
        blocks = parse_block_spec(args.blocks or "", field)
        seed = _seed(args.seed)
        bound = args.entry_bound
    A, B, truth = generate(InstanceSpec(field, tuple(blocks), seed, bound))
    _dump(pencil_to_json(Pencil(A, B)), args.output)
    truth_path = args.truth
    if truth_path is None and args.output not in (None, "-"):
        truth_path = str(args.output) + ".truth.json"
    if truth_path:
        _dump({"field": field_to_json(field), "blocks": [block_to_json(b) for b in truth]}, truth_path)
    return EXIT_OK


def _bits(M: Mat) -> int:
    if M.field.p is not None:
        return 0
    return max((abs(x.numerator).bit_length() for row in M.data for x in row), default=0)


def run_trial(seed: int, max_n: int, field: Field) -> dict:
    """One generate -> decompose -> verify -> cross_check round trip."""
    import random

    rng = random.Random(seed)
    blocks = random_blocks(rng, field, max_n)
    A, B, truth = generate(InstanceSpec(field, tuple(blocks), seed))
    out = {"seed": seed, "n": A.rows, "ok": False, "bits": max(_bits(A), _bits(B))}
    try:
        d = decompose(A, B)
    except PencilError as exc:
        out["error"] = exc.kind
        return out
    out["bits"] = max(out["bits"], _bits(d.T))
    checks = {
        "blocks": d.blocks == truth,
        "verify": verify(A, B, d).ok,
        "cross_check": cross_check(Pencil(A, B), d, seed).ok,
    }
    out["ok"] = all(checks.values())
    if not out["ok"]:
        out["failed"] = [k for k, v in checks.items() if not v]
    return out


def cmd_roundtrip(args) -> int:
    if args.trials < 1 or args.max_n < 1:
        raise ParseError("--trials and --max-n must be positive")
    field = parse_field_flag(args.field)
    seeds = [args.seed + t for t in range(args.trials)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(run_trial, seeds, [args.max_n] * len(seeds), [field] * len(seeds)))
    else:
        results = [run_trial(s, args.max_n, field) for s in seeds]
    failures = [r for r in results if not r["ok"]]
    _dump({
        "trials": len(results),
        "failures": len(failures),
        "max_numerator_bits": max(r["bits"] for r in results),
        "failing_seeds": [r["seed"] for r in failures],
    })
    if failures:
        _error("TrialFailed", failures)
        return EXIT_TRIAL
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jkpencil", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="canonical form of a pencil file")
    d.add_argument("input")
    d.add_argument("--ordering", choices=["split", "interleaved"], default="split")
    d.add_argument("--trace", action="store_true")
    d.add_argument("--output", "-o")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check a result file against a pencil file")
    v.add_argument("pencil")
    v.add_argument("result")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("invariants", help="rank-based congruence invariants")
    i.add_argument("input")
    i.set_defaults(func=cmd_invariants)

    g = sub.add_parser("generate", help="random pencil with known canonical form")
    g.add_argument("spec", nargs="?")
    g.add_argument("--blocks")
    g.add_argument("--seed", default="0")
    g.add_argument("--field", default="Q")
    g.add_argument("--entry-bound", type=int, default=3)
    g.add_argument("--output", "-o")
    g.add_argument("--truth")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("roundtrip", help="seeded generate/decompose/verify trials")
    r.add_argument("--trials", type=int, default=100)
    r.add_argument("--max-n", type=int, default=12)
    r.add_argument("--seed", type=int, default=1)
    r.add_argument("--field", default="Q")
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=cmd_roundtrip)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PencilError as exc:
        _error(exc.kind, exc.detail())
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
