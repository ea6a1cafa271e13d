"""Command line front end.

    twistforge validate SPEC
    twistforge model LIE_SPEC [--N k] [--D k] [--checks a,b] [--format text|json]
    twistforge twist RING_SPEC (--fusion FILE | --seeds FILE) [--qt FILE] [--N k]

Exit status: 0 when every selected check passes, 1 on a verification
failure, 2 on bad input or configuration.  ``TWISTFORGE_THREADS`` caps the
number of worker processes used by ``model``; output does not depend on it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .bialgebra import QTStructure
from .frt import verify_frt
from .inhom import (
    build_model,
    canonical_cocycle,
    verify_group_cocycle,
    verify_hopf_structure,
    verify_quasitriangularity,
    verify_exponential_form,
    verify_cocycle_twist,
)
from .report import Report
from .series import LieRingSpec
from .tensor_ring import NotInvertibleError, RingError, RingSpec, UnsupportedError, parse_tensor, validate_ring
from .twist import (
    SeedError,
    build_from_seeds,
    check_split1,
    check_split2,
    fusion_seeds,
    fusion_twist,
    rmatrix,
    verify_membership,
    verify_te,
    verify_triangularity,
    ybe_check,
)

MODEL_CHECKS = ("exp_form", "hopf", "cocycle", "cocycle_twist", "quasitriangular", "te", "split", "ybe", "frt")


class ConfigError(ValueError):
    """Bad command line values or input files (exit status 2)."""


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _threads():
    raw = os.environ.get("TWISTFORGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"TWISTFORGE_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError("TWISTFORGE_THREADS must be at least 1")
    return n


def _flag(name, ok, labels=None):
    rep = Report(name, labels=dict(labels or {}))
    rep.grid.append(name)
    if not ok:
        rep.fail(case=name)
    return rep


def run_model_check(lie_data: dict, name: str, N: int, D: int) -> dict:
    """One named check on a freshly built model; a top-level function so workers can pickle it."""
    lie = LieRingSpec.from_dict(lie_data)
    model = build_model(lie, D, N)
    labels = {"N": N, "D": D}
    if name == "exp_form":
        rep = verify_exponential_form(model, N)
    elif name == "hopf":
        rep = verify_hopf_structure(model, D, N)
    elif name == "cocycle":
        rep = verify_group_cocycle(model, D)
    elif name == "cocycle_twist":
        rep = verify_cocycle_twist(lie, canonical_cocycle(lie, D), max(D, N), N)
    elif name == "quasitriangular":
        rep = verify_quasitriangularity(model, N)
    elif name == "te":
        twist = fusion_twist(model.phi11, N)
        rep = Report("fusion_twist", labels=labels)
        rep.children.append(verify_te(twist))
        rep.children.append(verify_triangularity(rmatrix(twist)))
    elif name == "split":
        qt = QTStructure.trivial(model.ring)
        rep = Report("split", labels=labels)
        rep.children.append(_flag("split2", check_split2(model.phi11, qt)))
        rep.children.append(_flag("split1", check_split1(model.phi11, qt)))
        rep.children.append(verify_membership(fusion_twist(model.phi11, N), qt))
    elif name == "ybe":
        rep = _flag("ybe", ybe_check(model.rtilde))
    elif name == "frt":
        rep = verify_frt(model, D)
    else:
        raise ConfigError(f"unknown check {name!r}")
    return rep.to_dict()


def _report_from_dict(d) -> Report:
    rep = Report(d["check"], d.get("grid", []), d.get("failures", []), d.get("labels", {}),
                 d.get("notes", []), [_report_from_dict(c) for c in d.get("children", [])])
    return rep


def model_report(lie: LieRingSpec, N: int, D: int, checks, threads: int = 1) -> Report:
    top = Report("model", labels={"ring": lie.name, "N": N, "D": D})
    data = lie.to_dict()
    if threads > 1 and len(checks) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(checks))) as pool:
            futures = [pool.submit(run_model_check, data, c, N, D) for c in checks]
            results = [f.result() for f in futures]
    else:
        results = [run_model_check(data, c, N, D) for c in checks]
    top.children.extend(_report_from_dict(r) for r in results)
    return top


def _emit(rep: Report, fmt: str):
    if fmt == "json":
        print(json.dumps(rep.to_dict(), sort_keys=True, indent=2))
    else:
        print("\n".join(rep.summary_lines()))


def cmd_validate(args) -> int:
    data = _load_json(args.spec)
    try:
        if isinstance(data, dict) and "product" in data:
            spec = RingSpec.from_dict(data)
            result = validate_ring(spec)
        elif isinstance(data, dict) and "B" in data:
            spec = LieRingSpec.from_dict(data)
            result = spec.validate()
        else:
            raise ConfigError("spec needs either a 'product' (ring) or a 'B' (Lie ring) field")
    except RingError as exc:
        raise ConfigError(str(exc)) from exc
    rep = Report("validate", labels={"ring": spec.name})
    rep.grid.append("associativity and unit")
    if not result.passed:
        rep.fail(**result.to_dict())
    _emit(rep, args.format)
    return 0 if rep.passed else 1


def _check_cutoffs(N, D):
    if N < 2:
        raise ConfigError(f"--N must be at least 2, got {N}")
    if D < 2:
        raise ConfigError(f"--D must be at least 2, got {D}")


def cmd_model(args) -> int:
    _check_cutoffs(args.N, args.D)
    checks = list(MODEL_CHECKS) if args.checks is None else [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = [c for c in checks if c not in MODEL_CHECKS]
    if unknown or not checks:
        raise ConfigError(f"unknown checks {unknown}; choose from {', '.join(MODEL_CHECKS)}")
    try:
        lie = LieRingSpec.from_dict(_load_json(args.spec))
        build_model(lie, 2, 2)
    except (RingError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    rep = model_report(lie, args.N, args.D, checks, _threads())
    _emit(rep, args.format)
    return 0 if rep.passed else 1


def cmd_twist(args) -> int:
    if args.N < 2:
        raise ConfigError(f"--N must be at least 2, got {args.N}")
    try:
        ring = RingSpec.from_dict(_load_json(args.spec))
        if args.fusion:
            phi11 = parse_tensor(ring, _load_json(args.fusion))
            seeds = fusion_seeds(phi11, args.N)
        else:
            data = _load_json(args.seeds)
            raw = data["seeds"] if isinstance(data, dict) else data
            if isinstance(raw, dict):
                seeds = {int(k): parse_tensor(ring, v) for k, v in raw.items()}
            else:
                seeds = [parse_tensor(ring, v) for v in raw]
        twist = build_from_seeds(seeds, args.N)
        qt = QTStructure(ring, parse_tensor(ring, _load_json(args.qt))) if args.qt else None
    except (RingError, SeedError, NotInvertibleError, UnsupportedError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    rep = Report("twist", labels={"ring": ring.name, "N": args.N})
    rep.children.append(verify_te(twist))
    if qt is not None:
        rep.children.append(verify_membership(twist, qt))
        if args.fusion:
            rep.children.append(_flag("split2", check_split2(phi11, qt)))
            rep.children.append(_flag("split1", check_split1(phi11, qt)))
    _emit(rep, args.format)
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistforge", description="Exact twisting cocycles in tensor bialgebras.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check associativity and unit of a ring or Lie ring spec")
    v.add_argument("spec")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_validate)

    m = sub.add_parser("model", help="build the quantized model of a Lie ring and verify it")
    m.add_argument("spec")
    m.add_argument("--N", type=int, default=4, help="truncation degree (default 4)")
    m.add_argument("--D", type=int, default=5, help="series degree (default 5)")
    m.add_argument("--checks", default=None, help=f"comma separated subset of {','.join(MODEL_CHECKS)}")
    m.add_argument("--format", choices=("text", "json"), default="text")
    m.set_defaults(func=cmd_model)

    t = sub.add_parser("twist", help="build a twist from seeds and check the twisting equation")
    t.add_argument("spec")
    src = t.add_mutually_exclusive_group(required=True)
    src.add_argument("--fusion", help="JSON tensor Phi^{1,1}; seeds are its fusion products")
    src.add_argument("--seeds", help="JSON list (or k-keyed object) of seeds Phi^{1,k}")
    t.add_argument("--qt", help="JSON tensor R in R(x)R for the membership check")
    t.add_argument("--N", type=int, default=4)
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.set_defaults(func=cmd_twist)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"twistforge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
