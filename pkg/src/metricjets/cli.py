"""Command-line front end.

Exit status is 0 on success, 1 on a domain error (bad document, order too
small, ...) and 2 on a usage error.  ``--json`` switches every command to a
machine-readable report whose layout is pinned by ``REPORT_SCHEMA``.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Sequence, TextIO

import mpmath

from . import io as jetio
from .errors import JetError
from .jet import JetScalar, grlex_key
from .metric import MetricJet, curvature_data, gauss_curvature, pullback, unit_frame
from .normal_form import dim_moduli, dim_normal, dim_normal_bruteforce, normal_tensors, normalize
from .sampling import random_diffeo
from .strata import (
    InvariantVector,
    census,
    h_equivalent,
    h_jet,
    invariants,
    preset_h,
    stabilizer,
    type_of_jet,
    y_membership,
)

REPORT_SCHEMA = "metricjets.report"
REPORT_VERSION = 1


class Reporter:
    """Formats exact values; ``decimal`` only changes the text rendering."""

    def __init__(self, decimal: int | None):
        self.decimal = decimal

    def q(self, value: Fraction) -> str:
        if self.decimal is None:
            return str(value)
        return mpmath.nstr(mpmath.mpf(value.numerator) / value.denominator, self.decimal)

    def series(self, s: JetScalar) -> str:
        if self.decimal is None:
            return str(s)
        parts = [f"{self.q(c)}*[{','.join(map(str, a))}]" for a, c in s.terms()]
        return " + ".join(parts) or "0"


def _series_json(s: JetScalar) -> dict[str, str]:
    return {",".join(map(str, a)): str(c) for a, c in sorted(s.coeffs.items(), key=lambda t: grlex_key(t[0]))}


def _load_metric(path: str) -> tuple[MetricJet, bool]:
    doc = jetio.load(path)
    if doc.kind != "metric":
        raise JetError(f"{path}: expected a metric document, got {doc.kind}")
    g, frame = unit_frame(doc.value)
    return g, frame is not None


# commands ---------------------------------------------------------------------------


def cmd_normalize(args, rep: Reporter) -> tuple[dict, list[str]]:
    g, reframed = _load_metric(args.file)
    gN = normalize(g)
    doc = jetio.JetDocument.from_metric(gN, source=args.file)
    if args.output:
        jetio.save(doc, args.output)
    lines = [f"normal form of {args.file} (dim {gN.dim}, order {gN.order})"]
    if reframed:
        lines.append("g(0) was brought to the identity by an exact linear frame change")
    lines += [f"  g{i + 1}{j + 1} = {rep.series(v)}" for (i, j), v in gN.items()]
    if args.output:
        lines.append(f"written to {args.output}")
    return {"file": args.file, "reframed": reframed, "metric": jetio.to_dict(doc)}, lines


def cmd_tensors(args, rep: Reporter) -> tuple[dict, list[str]]:
    g, _ = _load_metric(args.file)
    tensors = normal_tensors(normalize(g))
    result = []
    lines = [f"normal tensors of {args.file} (dim {g.dim}, order {g.order})"]
    for t in tensors:
        comps = {
            f"{i + 1},{j + 1};{','.join(str(k + 1) for k in ks)}": v
            for (i, j, ks), v in sorted(t.components.items())
        }
        ok = t.satisfies_identities()
        result.append({"order": t.order, "identities": ok, "components": {k: str(v) for k, v in comps.items()}})
        lines.append(f"  order {t.order}: {len(comps)} independent stored components, cyclic identities {'ok' if ok else 'FAIL'}")
        lines += [f"    T[{k}] = {rep.q(v)}" for k, v in comps.items()]
    return {"file": args.file, "tensors": result}, lines


def cmd_curvature(args, rep: Reporter) -> tuple[dict, list[str]]:
    g, _ = _load_metric(args.file)
    if g.dim != 2:
        raise JetError("curvature reports are available in dimension 2 only")
    gN = normalize(g)
    k = gauss_curvature(gN)
    level = min(gN.order, 4)
    data = curvature_data(gN, order=level)
    out: dict[str, Any] = {"file": args.file, "K": _series_json(k), "K0": str(data.K0)}
    lines = [f"Gaussian curvature of {args.file} (order {k.order} jet)", f"  K = {rep.series(k)}", f"  K(0) = {rep.q(data.K0)}"]
    if data.grad is not None:
        out["grad"] = [str(v) for v in data.grad]
        lines.append(f"  grad K(0) = ({', '.join(rep.q(v) for v in data.grad)})")
    if data.hess is not None:
        out["hess"] = [[str(v) for v in row] for row in data.hess]
        lines.append("  Hess K(0) = [" + "; ".join(" ".join(rep.q(v) for v in row) for row in data.hess) + "]")
    return out, lines


def cmd_invariants(args, rep: Reporter) -> tuple[dict, list[str]]:
    g, _ = _load_metric(args.file)
    v: InvariantVector = invariants(g, args.order)
    out: dict[str, Any] = {"file": args.file, "order": v.order, "values": [str(x) for x in v.values]}
    lines = [f"order-{v.order} invariants of {args.file}"]
    lines += [f"  p{i + 1} = {rep.q(x)}" for i, x in enumerate(v.values)]
    if v.order == 4:
        out["in_Y"] = y_membership(v)
        lines.append(f"  inequalities of Y: {'satisfied' if out['in_Y'] else 'VIOLATED'}")
    return out, lines


def _classify_one(path: str) -> str:
    doc = jetio.load(path)
    if doc.kind == "hpoly":
        return str(stabilizer(doc.value))
    g, _ = unit_frame(doc.value)
    return str(type_of_jet(g))


def cmd_classify(args, rep: Reporter) -> tuple[dict, list[str]]:
    if args.jobs > 1 and len(args.files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            types = list(pool.map(_classify_one, args.files))
    else:
        types = [_classify_one(p) for p in args.files]
    out = {"results": [{"file": f, "type": t} for f, t in zip(args.files, types)]}
    return out, [f"{f}: {t}" for f, t in zip(args.files, types)]


def cmd_equiv(args, rep: Reporter) -> tuple[dict, list[str]]:
    g1, _ = _load_metric(args.a)
    g2, _ = _load_metric(args.b)
    if g1.dim != 2 or g2.dim != 2:
        raise JetError("orbit equivalence is decided in dimension 2 only")
    if g1.order != g2.order:
        raise JetError(f"jets of orders {g1.order} and {g2.order} cannot be compared")
    res = h_equivalent(h_jet(g1), h_jet(g2))
    out: dict[str, Any] = {"a": args.a, "b": args.b, "equivalent": res.equivalent}
    line = res.describe()
    if res.equivalent:
        w = res.solution.witness()
        out["witness"] = {
            "kind": res.kind,
            "g": res.solution.g,
            "w": [str(res.solution.w.re), str(res.solution.w.im)],
            "numeric": [mpmath.nstr(w.real, 25), mpmath.nstr(w.imag, 25)],
        }
        line += f" (numeric representative {mpmath.nstr(w, 20)})"
    return out, [line]


def cmd_dim(args, rep: Reporter) -> tuple[dict, list[str]]:
    n, r = args.n, args.r
    if n < 1 or r < 0:
        raise JetError("need --n >= 1 and --r >= 0")
    dims = {s: dim_normal(n, s) for s in range(2, r + 1)}
    out: dict[str, Any] = {"n": n, "r": r, "moduli_dimension": dim_moduli(n, r),
                           "normal_tensor_dimensions": {str(s): d for s, d in dims.items()}}
    lines = [f"dim M(n={n}, r={r}) = {out['moduli_dimension']}"]
    lines += [f"  dim N_{s} = {d}" for s, d in dims.items()]
    if args.verify:
        brute = {s: dim_normal_bruteforce(n, s) for s in dims}
        agree = brute == dims
        out["bruteforce_agrees"] = agree
        lines.append(f"  brute-force kernel dimensions {'agree' if agree else 'DISAGREE'}")
    return out, lines


def cmd_census(args, rep: Reporter) -> tuple[dict, list[str]]:
    types = census(args.r)
    out = {"r": args.r, "count": len(types), "strata": [str(t) for t in types]}
    return out, [f"strata for r={args.r}: {', '.join(out['strata'])}", f"count: {len(types)}"]


def cmd_make(args, rep: Reporter) -> tuple[dict, list[str]]:
    g = preset_h(args.preset, args.m, args.r)
    meta = {"label": f"{args.preset} m={args.m} r={args.r}"}
    if args.seed is not None:
        # disguise the normal form by a reproducible diffeomorphism jet
        g = pullback(random_diffeo(random.Random(args.seed), 2, args.r + 1), g)
        meta["seed"] = args.seed
    doc = jetio.JetDocument.from_metric(g, **meta)
    if args.output:
        jetio.save(doc, args.output)
        return {"preset": args.preset, "m": args.m, "r": args.r, "output": args.output}, [f"written to {args.output}"]
    return jetio.to_dict(doc), jetio.dumps(doc).rstrip("\n").splitlines()


COMMANDS: dict[str, Callable] = {
    "normalize": cmd_normalize,
    "tensors": cmd_tensors,
    "curvature": cmd_curvature,
    "invariants": cmd_invariants,
    "classify": cmd_classify,
    "equiv": cmd_equiv,
    "dim": cmd_dim,
    "census": cmd_census,
    "make": cmd_make,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--decimal", type=int, metavar="N", help="print rationals as N-digit decimals")

    parser = argparse.ArgumentParser(prog="metricjets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common], help="bring a metric jet to normal coordinates")
    p.add_argument("file")
    p.add_argument("-o", "--output")

    p = sub.add_parser("tensors", parents=[common], help="list normal tensors")
    p.add_argument("file")

    p = sub.add_parser("curvature", parents=[common], help="Gaussian curvature jet and its derivatives (n=2)")
    p.add_argument("file")

    p = sub.add_parser("invariants", parents=[common], help="curvature invariants for r = 2, 3, 4 (n=2)")
    p.add_argument("file")
    p.add_argument("--order", type=int, choices=(2, 3, 4), required=True)

    p = sub.add_parser("classify", parents=[common], help="automorphism type of each jet (n=2)")
    p.add_argument("files", nargs="+")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("equiv", parents=[common], help="decide orbit equivalence of two jets (n=2)")
    p.add_argument("-a", required=True)
    p.add_argument("-b", required=True)

    p = sub.add_parser("dim", parents=[common], help="moduli and normal-tensor dimensions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="cross-check by brute-force kernel dimensions")

    p = sub.add_parser("census", parents=[common], help="strata of the moduli space of 2-d r-jets")
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("make", parents=[common], help="write a preset metric jet")
    p.add_argument("--preset", required=True, choices=("zero", "pm", "qm", "pmq", "xxy"))
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    return parser


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = Reporter(args.decimal)
    try:
        result, lines = COMMANDS[args.command](args, rep)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    if args.json:
        report = {"schema": REPORT_SCHEMA, "version": REPORT_VERSION, "command": args.command, "result": result}
        print(json.dumps(report, indent=2, sort_keys=True), file=stdout)
    else:
        print("\n".join(lines), file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
