"""Command line interface.

Every subcommand prints one JSON report to stdout:

    {"command": ..., "params": {...}, "seed": ..., "results": {...},
     "elapsedMs": ..., "version": ...}

The results payload is deterministic for identical arguments and seed;
only elapsedMs varies.  --format text / dot (where offered) print a
human rendering instead of the report and are not schema-stable.

Exit codes: 0 success, 1 usage or parse error, 2 contract violation,
3 internal numeric failure.  The EQUIMAP_TOL environment variable
overrides the default positivity tolerance of 1e-9.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__, serialize
from .detection import (
    STATE_GRAMMAR,
    detect,
    family_block_minima,
    parse_state_spec,
    sampled_detector,
    sn_certificate,
)
from .diagram import render_dot, render_text, verify_wiring, wiring
from .equivariant import (
    build_equivariant,
    check_ab_equivariance,
    decompose_equivariant,
)
from .errors import CapacityError, ContractViolation, EquimapError, ParameterError, ShapeError
from .linalg import check_seed
from .perms import Permutation, enumerate_sym
from .positivity import k_positivity, k_positivity_falsify, positivity_profile
from .zoo import MAP_GRAMMAR, parse_map_spec, positivity_scan


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def default_tol() -> float:
    raw = os.environ.get("EQUIMAP_TOL", "")
    if raw:
        try:
            value = float(raw)
        except ValueError:
            raise _UsageError(f"EQUIMAP_TOL is not a number: {raw!r}") from None
        if value < 0:
            raise _UsageError(f"EQUIMAP_TOL must be nonnegative: {raw!r}")
        return value
    return 1e-9


def _vector_json(v) -> dict:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return {"re": [float(x) for x in v.real], "im": [float(x) for x in v.imag]}


def _parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"expected LO:HI:STEPS, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _UsageError(f"expected LO:HI:STEPS with numeric fields, got {text!r}") from None
    if steps < 1:
        raise _UsageError(f"steps must be positive in {text!r}")
    return np.linspace(lo, hi, steps)


def build_parser() -> _Parser:
    p = _Parser(prog="equimap", description="equivariant maps, positivity, detection")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, **kwargs):
        q = sub.add_parser(name, **kwargs)
        return q

    q = add("basis", help="list the permutation basis for a signature")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--format", choices=("json", "text", "dot"), default="json")

    q = add("build", help="synthesize a map from a coefficient file")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--coeffs", required=True, metavar="FILE")
    q.add_argument("--out", required=True, metavar="FILE")

    q = add("decompose", help="coefficients of a Choi matrix in the basis")
    q.add_argument("--choi", required=True, metavar="FILE")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--b", type=int, required=True)

    q = add("equiv", help="sampled commutator check of a Choi matrix")
    q.add_argument("--choi", required=True, metavar="FILE")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--trials", type=int, default=20)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--tol", type=float, default=1e-8)

    q = add("kpos", help="block k-positivity verdict for a zoo map")
    q.add_argument("--map", required=True, dest="map_spec")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--tol", type=float, default=None)

    q = add("profile", help="positivity verdicts for every k")
    q.add_argument("--map", required=True, dest="map_spec")
    q.add_argument("--tol", type=float, default=None)

    q = add("falsify", help="random-state search for a k-positivity violation")
    q.add_argument("--map", required=True, dest="map_spec")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--trials", type=int, default=500)
    q.add_argument("--seed", type=int, default=0)

    q = add("detect", help="apply an extended map to a state")
    q.add_argument("--state", required=True, dest="state_spec")
    q.add_argument("--map", required=True, dest="map_spec")
    q.add_argument("--tol", type=float, default=None)

    q = add("sn", help="Schmidt-number certificate attempt")
    q.add_argument("--state", required=True, dest="state_spec")
    q.add_argument("--map", required=True, dest="map_spec")
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--tol", type=float, default=None)

    q = add("family", help="sampled detector family curve")
    q.add_argument("--map", required=True, dest="map_spec")
    q.add_argument("--state", required=True, dest="state_spec")
    q.add_argument("--samples", type=int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--tol", type=float, default=None)

    q = add("scan", help="positivity region over a parameter rectangle")
    q.add_argument("--map", required=True, dest="map_name", choices=("collins", "collins3"))
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--alpha", required=True, metavar="LO:HI:STEPS")
    q.add_argument("--beta", required=True, metavar="LO:HI:STEPS")
    q.add_argument("--gamma", type=float, default=0.0)
    q.add_argument("--tol", type=float, default=None)

    q = add("diagram", help="wiring diagram of one basis element")
    q.add_argument("--pi", required=True, metavar="CYCLES")
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--format", choices=("json", "text", "dot"), default="json")

    return p


def _edges_json(d) -> list:
    return [
        {"from": [s1.lower(), j1], "to": [s2.lower(), j2]}
        for (s1, j1), (s2, j2) in d.edges
    ]


def _run(args, tol: float):
    """Dispatch; returns (results dict, seed echo, raw text or None)."""
    cmd = args.command

    if cmd == "basis":
        perms = enumerate_sym(args.a + args.b + 1)
        diagrams = [(p.cycle_string(), wiring(p, args.a, args.b)) for p in perms]
        if args.format == "text":
            text = "\n\n".join(render_text(d, title=f"pi={label}") for label, d in diagrams)
            return None, None, text + "\n"
        if args.format == "dot":
            return None, None, render_dot(diagrams, graph_name="basis")
        elements = [
            {
                "perm": p.cycle_string(),
                "cycles": p.cycle_count(),
                "edges": _edges_json(d),
            }
            for p, (_, d) in zip(perms, diagrams)
        ]
        return {
            "n": args.n,
            "a": args.a,
            "b": args.b,
            "count": len(perms),
            "elements": elements,
        }, None, None

    if cmd == "build":
        spec = serialize.spec_from_json(serialize.load_json(args.coeffs))
        if (spec.n, spec.a, spec.b) != (args.n, args.a, args.b):
            raise _UsageError(
                f"coefficient file is for (n,a,b)=({spec.n},{spec.a},{spec.b}), "
                f"flags say ({args.n},{args.a},{args.b})"
            )
        rep = build_equivariant(spec)
        serialize.save_json(args.out, serialize.map_to_json(rep))
        return {
            "label": rep.label,
            "n": rep.n,
            "N": rep.N,
            "choiDim": rep.n * rep.N,
            "coeffCount": len(spec.coeffs),
            "out": args.out,
        }, None, None

    if cmd == "decompose":
        C = serialize.load_matrix(args.choi)
        coeffs, residual = decompose_equivariant(C, args.n, args.a, args.b)
        entries = [
            {"perm": p.cycle_string(), "re": c.real, "im": c.imag}
            for p, c in coeffs.items()
            if abs(c) > 1e-12
        ]
        return {"coeffs": entries, "residual": residual}, None, None

    if cmd == "equiv":
        C = serialize.load_matrix(args.choi)
        report = check_ab_equivariance(
            C, args.n, args.a, args.b,
            trials=args.trials, seed=check_seed(args.seed), tol=args.tol,
        )
        return {
            "trials": report.trials,
            "maxRelCommutatorNorm": report.max_rel_commutator_norm,
            "tolerance": report.tolerance,
            "verdict": "pass" if report.passed else "fail",
        }, args.seed, None

    if cmd == "kpos":
        entry = parse_map_spec(args.map_spec)
        flag, min_eig = k_positivity(entry.rep, args.k, tol)
        return {
            "map": entry.rep.label,
            "k": args.k,
            "pass": flag,
            "minEig": min_eig,
        }, None, None

    if cmd == "profile":
        entry = parse_map_spec(args.map_spec)
        prof = positivity_profile(entry.rep, tol)
        return {
            "label": prof.label,
            "perK": [
                {"k": pt.k, "minEig": pt.min_eig, "pass": pt.passed}
                for pt in prof.per_k
            ],
            "maxK": prof.max_k,
            "cp": prof.completely_positive,
        }, None, None

    if cmd == "falsify":
        entry = parse_map_spec(args.map_spec)
        witness = k_positivity_falsify(
            entry.rep, args.k, trials=args.trials, seed=check_seed(args.seed)
        )
        results = {
            "map": entry.rep.label,
            "k": args.k,
            "trials": args.trials,
            "found": witness is not None,
        }
        if witness is not None:
            results.update(
                trial=witness.trial,
                value=witness.value,
                state=_vector_json(witness.state),
                witness=_vector_json(witness.witness),
            )
        return results, args.seed, None

    if cmd == "detect":
        rho = parse_state_spec(args.state_spec)
        entry = parse_map_spec(args.map_spec)
        verdict = detect(rho, entry.rep, tol)
        results = {
            "state": args.state_spec,
            "map": verdict.map_label,
            "minEig": verdict.min_eigenvalue,
            "detected": verdict.detected,
        }
        if verdict.witness is not None:
            results["witness"] = _vector_json(verdict.witness)
        return results, None, None

    if cmd == "sn":
        rho = parse_state_spec(args.state_spec)
        entry = parse_map_spec(args.map_spec)
        cert = sn_certificate(rho, entry.rep, args.t, tol)
        return {
            "state": args.state_spec,
            "map": cert.map_label,
            "t": cert.t,
            "certified": cert.certified,
            "claim": cert.claim,
            "tPositive": cert.t_positive,
            "kposMinEig": cert.kpos_min_eig,
            "detectMinEig": cert.detect_min_eig,
            "reason": cert.reason,
        }, None, None

    if cmd == "family":
        rho = parse_state_spec(args.state_spec)
        entry = parse_map_spec(args.map_spec)
        family = sampled_detector(entry.rep, args.samples, check_seed(args.seed))
        minima = family_block_minima(rho, family)
        curve = []
        running = float("inf")
        for i, value in enumerate(minima):
            running = min(running, float(value))
            curve.append(
                {"a": i + 1, "minEig": running, "detected": running < -tol}
            )
        return {
            "map": entry.rep.label,
            "state": args.state_spec,
            "samples": args.samples,
            "curve": curve,
        }, args.seed, None

    if cmd == "scan":
        gamma = args.gamma if args.map_name == "collins3" else None
        rows = positivity_scan(
            args.n, _parse_range(args.alpha), _parse_range(args.beta),
            gamma=gamma, tol=tol,
        )
        return {"map": args.map_name, "n": args.n, "grid": rows}, None, None

    if cmd == "diagram":
        k1 = args.a + args.b + 1
        perm = Permutation.from_cycles(args.pi, k1)
        d = wiring(perm, args.a, args.b)
        if args.format == "text":
            return None, None, render_text(d, title=f"pi={perm.cycle_string()}") + "\n"
        if args.format == "dot":
            return None, None, render_dot([(perm.cycle_string(), d)])
        return {
            "perm": perm.cycle_string(),
            "a": args.a,
            "b": args.b,
            "verified": verify_wiring(d, perm),
            "edges": _edges_json(d),
        }, None, None

    raise _UsageError(f"unhandled command {cmd!r}")


def _fold_range_values(argv):
    # argparse reads a range starting at a negative number ("-1:0:5") as
    # an unknown flag; fold such values onto their option with "=".
    out = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in ("--alpha", "--beta") and nxt is not None and nxt.startswith("-"):
            out.append(f"{tok}={nxt}")
            skip = True
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    started = time.perf_counter()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_fold_range_values(list(argv)))
        tol = args.tol if getattr(args, "tol", None) is not None else default_tol()
        results, seed, raw = _run(args, tol)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"parse error at byte offset {exc.pos}: {exc.msg}", file=sys.stderr)
        return 1
    except (ParameterError, CapacityError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ContractViolation, ShapeError) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 2
    except (EquimapError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    if raw is not None:
        sys.stdout.write(raw)
        return 0
    report = {
        "command": args.command,
        "params": {
            key: value
            for key, value in sorted(vars(args).items())
            if key != "command"
        },
        "seed": seed,
        "results": results,
        "elapsedMs": (time.perf_counter() - started) * 1000.0,
        "version": __version__,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
