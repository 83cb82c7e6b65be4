"""Command line front end.

Exit codes: 0 success, 1 bad usage or malformed input files, 2 parameter
validation failure, 3 runtime failure.  Word files are ASCII, one word per
line, most significant coordinate last (line "10110" means bits 1,0,1,1,0 at
coordinates 0..4).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .builder import (CodeParams, ParamValidationError, build_compound_code,
                      load_code, save_code, validate_params)
from .codec import (ExperimentConfig, decode, encode, invert_bound,
                    run_experiment, write_curve_csv, write_results_csv,
                    wz_boundary, wz_rate)
from .degrees import CatalogEntry, load_catalog, parse_catalog
from .gf2 import BitVector
from .quantizer import BipParams

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_FAILURE = 3


class UsageError(ValueError):
    """Malformed user input (config files, word files, unknown ids)."""


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors by default; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_words(path: str, length: int | None = None) -> list[BitVector]:
    words = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if set(line) - {"0", "1"}:
            raise UsageError(f"{path}:{lineno}: word lines must be 0/1 only")
        if length is not None and len(line) != length:
            raise UsageError(f"{path}:{lineno}: expected {length} bits, got {len(line)}")
        words.append(BitVector.from_bits_list([int(c) for c in line]))
    if not words:
        raise UsageError(f"{path}: no words found")
    return words


def _write_words(path: str, words: list[BitVector]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for w in words:
            f.write("".join(str(b) for b in w.to_list()) + "\n")


def _resolve_catalog(path: str | None) -> dict[str, CatalogEntry]:
    if path is None:
        return load_catalog()
    return parse_catalog(Path(path).read_text())


def _resolve_dist(args) -> CatalogEntry:
    catalog = _resolve_catalog(getattr(args, "catalog", None))
    if args.dist not in catalog:
        known = ", ".join(sorted(catalog))
        raise UsageError(f"unknown degree profile {args.dist!r} (known: {known})")
    return catalog[args.dist]


def _bip_from_args(args) -> BipParams:
    return BipParams(gamma=args.gamma, threshold=args.threshold,
                     iters_per_round=args.iters_per_round,
                     damping=args.damping, warm_start=args.warm_start)


def _add_bip_args(sub) -> None:
    sub.add_argument("--gamma", type=float, default=None,
                     help="source confidence (default: twice the generator rate)")
    sub.add_argument("--threshold", type=float, default=0.8)
    sub.add_argument("--iters-per-round", type=int, default=25)
    sub.add_argument("--damping", type=float, default=None,
                     help="message damping (default: 0.5 with 4-cycles, else 0)")
    sub.add_argument("--warm-start", action="store_true",
                     help="carry messages across decimation rounds")


def _cmd_build(args) -> int:
    entry = _resolve_dist(args)
    params = CodeParams(n=args.n, m=args.m, k1=args.k1, k2=args.k2,
                        zeta=args.zeta, poisson_lam=args.poisson_lam,
                        poisson_imax=args.poisson_imax)
    report = validate_params(params)
    for check in report.checks:
        flag = "ok" if check.ok else "FAIL"
        print(f"{flag:4s} {check.name}: {check.detail}")
    if not report.ok:
        return EXIT_INVALID
    code = build_compound_code(params, entry.dist, args.seed, dist_id=args.dist)
    save_code(code, args.out)
    r1, r2, rt = code.rates
    print(f"built {args.dist} at n={params.n}: R1={r1:.4f} R2={r2:.4f} Rt={rt:.4f}")
    print(f"saved to {args.out}")
    return EXIT_OK


def _cmd_quantize(args) -> int:
    code = load_code(args.code)
    words = _read_words(args.infile, code.params.n)
    out = []
    total = 0.0
    for w in words:
        res = encode(code, w, _bip_from_args(args))
        out.append(res.u)
        total += res.distortion
    _write_words(args.out, out)
    print(f"quantized {len(words)} words, mean distortion {total / len(words):.6f}")
    return EXIT_OK


def _cmd_encode(args) -> int:
    code = load_code(args.code)
    words = _read_words(args.infile, code.params.n)
    syndromes = []
    total = 0.0
    for w in words:
        res = encode(code, w, _bip_from_args(args))
        syndromes.append(res.syndrome)
        total += res.distortion
    _write_words(args.out, syndromes)
    rt = code.params.k2 / code.params.n
    print(f"encoded {len(words)} words at rate {rt:.4f}, "
          f"mean distortion {total / len(words):.6f}")
    return EXIT_OK


def _cmd_decode(args) -> int:
    code = load_code(args.code)
    side = _read_words(args.side, code.params.n)
    syndromes = _read_words(args.syndrome, code.h2.rows)
    if len(side) != len(syndromes):
        raise UsageError(f"{len(side)} side words vs {len(syndromes)} syndromes")
    out = []
    converged = 0
    for s, z in zip(side, syndromes):
        res = decode(code, s, z, args.crossover)
        out.append(res.bits)
        converged += res.converged
    _write_words(args.out, out)
    print(f"decoded {len(out)} words, {converged} converged")
    return EXIT_OK


def _experiment_from(entry: dict, index: int) -> tuple[ExperimentConfig, str, int]:
    required = ("code_id", "dist", "n", "m", "k1", "k2", "zeta", "p",
                "trials", "seed")
    for key in required:
        if key not in entry:
            raise UsageError(f"experiment {index}: missing key {key!r}")
    params = CodeParams(n=entry["n"], m=entry["m"], k1=entry["k1"],
                        k2=entry["k2"], zeta=entry["zeta"],
                        poisson_lam=entry.get("poisson_lam"),
                        poisson_imax=entry.get("poisson_imax"))
    config = ExperimentConfig(
        code_id=entry["code_id"], params=params, p=entry["p"],
        trials=entry["trials"], seed=entry["seed"],
        gamma=entry.get("gamma"), threshold=entry.get("threshold", 0.8),
        iters_per_round=entry.get("iters_per_round", 25),
        damping=entry.get("damping"),
        warm_start=entry.get("warm_start", False),
        max_iter=entry.get("max_iter", 100),
        crossover=entry.get("crossover"))
    return config, entry["dist"], entry.get("build_seed", entry["seed"])


def _cmd_run(args) -> int:
    text = Path(args.config).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{args.config}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("experiments"), list):
        raise UsageError(f"{args.config}: expected an object with an "
                         f"'experiments' array")
    catalog = _resolve_catalog(args.catalog)
    results = []
    for index, entry in enumerate(doc["experiments"]):
        config, dist_id, build_seed = _experiment_from(entry, index)
        if dist_id not in catalog:
            raise UsageError(f"experiment {index}: unknown degree profile "
                             f"{dist_id!r}")
        print(f"[{index + 1}/{len(doc['experiments'])}] building {config.code_id} "
              f"(n={config.params.n})", flush=True)
        code = build_compound_code(config.params, catalog[dist_id].dist,
                                   build_seed, dist_id=dist_id)
        print(f"[{index + 1}/{len(doc['experiments'])}] running {config.trials} "
              f"trials at p={config.p}", flush=True)
        result = run_experiment(code, config, workers=args.workers)
        print(f"  d1={result.d1:.4f} d2={result.d2:.4f} Dt={result.dt:.4f} "
              f"Dwz={result.dwz:.4f} gap={result.gap:.4f} "
              f"failures={result.failures}", flush=True)
        results.append(result)
    with open(args.out, "w", encoding="utf-8") as f:
        write_results_csv(f, results)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_bound(args) -> int:
    if args.rate is not None:
        print(f"{invert_bound(args.rate, args.p):.9f}")
        return EXIT_OK
    if args.distortion is not None:
        print(f"{wz_rate(args.distortion, args.p):.9f}")
        return EXIT_OK
    d_c, r_c = wz_boundary(args.p)
    print(f"boundary point: distortion={d_c:.6f} rate={r_c:.6f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            write_curve_csv(f, args.p, args.points)
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_verify_example(args) -> int:
    from .worked_example import verify
    failures = 0
    for check in verify():
        flag = "PASS" if check.ok else "FAIL"
        line = f"{flag} {check.name}"
        if check.detail:
            line += f" ({check.detail})"
        print(line)
        failures += not check.ok
    return EXIT_OK if failures == 0 else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="wzkit",
        description="Distributed lossy compression with nested sparse codes")
    parser.add_argument("--version", action="version",
                        version=f"wzkit {__version__}")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    b = subs.add_parser("build", help="construct a code and save it")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--k1", type=int, required=True)
    b.add_argument("--k2", type=int, required=True)
    b.add_argument("--zeta", type=int, required=True)
    b.add_argument("--poisson-lam", type=float, default=None)
    b.add_argument("--poisson-imax", type=int, default=None)
    b.add_argument("--dist", required=True, help="degree profile id")
    b.add_argument("--catalog", default=None, help="catalog file override")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True, help="output directory")
    b.set_defaults(func=_cmd_build)

    q = subs.add_parser("quantize", help="quantize source words")
    q.add_argument("--code", required=True, help="code directory")
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--out", required=True)
    _add_bip_args(q)
    q.set_defaults(func=_cmd_quantize)

    e = subs.add_parser("encode", help="quantize and emit syndromes")
    e.add_argument("--code", required=True)
    e.add_argument("--in", dest="infile", required=True)
    e.add_argument("--out", required=True)
    _add_bip_args(e)
    e.set_defaults(func=_cmd_encode)

    d = subs.add_parser("decode", help="reconstruct from syndrome and side info")
    d.add_argument("--code", required=True)
    d.add_argument("--side", required=True)
    d.add_argument("--syndrome", required=True)
    d.add_argument("--crossover", type=float, required=True,
                   help="estimated word-to-side-info crossover")
    d.add_argument("--out", required=True)
    d.set_defaults(func=_cmd_decode)

    r = subs.add_parser("run", help="run experiments from a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("--catalog", default=None)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--out", required=True, help="results CSV path")
    r.set_defaults(func=_cmd_run)

    bo = subs.add_parser("bound", help="rate-distortion bound queries")
    bo.add_argument("--p", type=float, required=True)
    bo.add_argument("--rate", type=float, default=None,
                    help="print the distortion at this rate")
    bo.add_argument("--distortion", type=float, default=None,
                    help="print the rate at this distortion")
    bo.add_argument("--points", type=int, default=200)
    bo.add_argument("--out", default=None, help="curve CSV path")
    bo.set_defaults(func=_cmd_bound)

    v = subs.add_parser("verify-example", help="re-derive the built-in fixture")
    v.set_defaults(func=_cmd_verify_example)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParamValidationError as e:
        for check in e.report.failures():
            print(f"invalid: {check.name} ({check.detail})", file=sys.stderr)
        return EXIT_INVALID
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, AssertionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
