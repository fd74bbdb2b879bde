"""Command line entry point: describe | verify | hilbert | count | report."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__, linalg, suites
from . import complexes as cx
from . import varieties as vr
from .liealg import AlgebraSpecError, UnsupportedAlgebraError, build_algebra, describe, describe_text

SCHEMA = 1
ENV_PREFIX = "COMMVAR_"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
SUITE_NAMES = suites.SUITES + ("all",)


class UsageError(ValueError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class RunConfig:
    algebra: str
    suite: str = "all"
    seed: int = 0
    prime: int = linalg.BIG_PRIME
    max_bidegree: int | None = None
    samples: int = 200
    format: str = "text"
    out: str | None = None

    def validate(self):
        if self.suite not in SUITE_NAMES:
            raise UsageError(f"unknown suite {self.suite!r}; expected one of {', '.join(SUITE_NAMES)}")
        if not _is_prime(self.prime) or self.prime >= 2**31:
            raise UsageError(f"--prime {self.prime} must be a prime below 2^31")
        if self.max_bidegree is not None and self.max_bidegree < 0:
            raise UsageError("--max-bidegree must be nonnegative")
        if self.samples < 1:
            raise UsageError("--samples must be positive")
        if self.seed < 0 or self.seed >= 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if self.format not in ("text", "json"):
            raise UsageError("--format must be text or json")
        return self

    def echo(self):
        """The fields that determine a report (output location excluded)."""
        out = asdict(self)
        out.pop("out")
        out.pop("format")
        return out


def _algebra(spec):
    try:
        return build_algebra(spec)
    except UnsupportedAlgebraError as exc:
        raise UsageError(f"unsupported algebra {spec!r}: {exc}") from exc
    except AlgebraSpecError as exc:
        raise UsageError(f"bad algebra spec {spec!r}: {exc}") from exc


def run_suite(config, timings=False):
    """Run the configured suites and return the report as a dict."""
    config.validate()
    g = _algebra(config.algebra)
    ctx = suites.Context(g, config.seed, config.prime, config.samples, config.max_bidegree)
    names = suites.SUITES if config.suite == "all" else (config.suite,)
    rows, skipped = [], []
    for name in names:
        for c in suites.checks(name):
            reason = c.skip(g) if c.skip else None
            if reason:
                skipped.append({"id": c.id, "anchor": c.anchor, "reason": reason})
                continue
            rows.append(suites.run_check(c, ctx, timings))
    rows.sort(key=lambda r: r["id"])
    skipped.sort(key=lambda r: r["id"])
    summary = {v: sum(r["verdict"] == v for r in rows) for v in ("pass", "fail", "evidence")}
    summary["skipped"] = len(skipped)
    return {
        "schema": SCHEMA,
        "tool": "commvar",
        "version": __version__,
        "config": config.echo(),
        "checks": rows,
        "skipped": skipped,
        "summary": summary,
    }


def emit_report(report, fmt):
    """Deterministic bytes for a report."""
    if fmt == "json":
        return (json.dumps(report, indent=2, sort_keys=True) + "\n").encode()
    lines = [f"commvar {report['version']}  algebra {report['config']['algebra']}  "
             f"suite {report['config']['suite']}  seed {report['config']['seed']}"]
    timed = any("elapsed" in r for r in report["checks"])
    header = f"{'id':<22} {'verdict':<9} {'anchor':<62}" + (" time" if timed else "")
    lines += [header, "-" * len(header)]
    rows = [(r["id"], r) for r in report["checks"]] + [(r["id"], r) for r in report["skipped"]]
    for _, r in sorted(rows, key=lambda t: t[0]):
        if "reason" in r:
            lines.append(f"{r['id']:<22} {'skipped':<9} {r['reason'][:62]}".rstrip())
            continue
        line = f"{r['id']:<22} {r['verdict']:<9} {r['anchor'][:62]:<62}"
        if timed:
            line += f" {r['elapsed']:.2f}s"
        lines.append(line.rstrip())
    s = report["summary"]
    lines.append(f"pass {s['pass']}  fail {s['fail']}  evidence {s['evidence']}  skipped {s['skipped']}")
    return ("\n".join(lines) + "\n").encode()


def _write(data, out):
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _env_defaults(environ):
    """Flag defaults taken from COMMVAR_* variables."""
    out = {}
    for key in ("algebra", "suite", "seed", "prime", "max_bidegree", "samples", "format", "out"):
        val = environ.get(ENV_PREFIX + key.upper())
        if val is None:
            continue
        if key in ("seed", "prime", "max_bidegree", "samples"):
            try:
                val = int(val)
            except ValueError as exc:
                raise UsageError(f"{ENV_PREFIX}{key.upper()}={val!r} is not an integer") from exc
        out[key] = val
    return out


def _add_common(p):
    p.add_argument("--algebra", help="algebra spec, e.g. A1, A2, B2, A1+A1+z1")
    p.add_argument("--format", choices=("text", "json"))
    p.add_argument("--out", help="write output to this path instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="commvar", description=__doc__)
    parser.add_argument("--version", action="version", version=f"commvar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="dimension, rank, invariant degrees, triple and roots")
    _add_common(p)

    p = sub.add_parser("verify", help="run verification suites")
    _add_common(p)
    p.add_argument("--suite", choices=SUITE_NAMES)
    p.add_argument("--seed", type=int)
    p.add_argument("--prime", type=int)
    p.add_argument("--max-bidegree", dest="max_bidegree", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--timings", action="store_true", help="record wall time per check")

    p = sub.add_parser("hilbert", help="homology table of the E-complex")
    _add_common(p)
    p.add_argument("--degree", type=int, help="one wedge degree j (default: k_g .. dim g)")
    p.add_argument("--max-bidegree", dest="max_bidegree", type=int)
    p.add_argument("--method", choices=("auto", "exact", "projected"), default="auto")
    p.add_argument("--prime", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("count", help="finite-field point counts of nilpotent-pair fibers")
    _add_common(p)
    p.add_argument("--primes", default=None, help="comma separated primes (default 2,3,5,7)")
    p.add_argument("--strata", action="store_true", help="sl2 strata T3, T4, T5 instead")

    p = sub.add_parser("report", help="render a saved JSON report")
    p.add_argument("path")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--rerun", action="store_true", help="re-run its config and compare byte for byte")
    return parser


def _merged(args, environ):
    """Flag values, falling back to COMMVAR_* variables, then defaults."""
    env = _env_defaults(environ)
    vals = dict(env)
    for key, val in vars(args).items():
        if val is not None and val is not False:
            vals[key] = val
    if not vals.get("algebra"):
        raise UsageError("--algebra is required")
    return vals


def _cmd_describe(vals):
    g = _algebra(vals["algebra"])
    if vals.get("format") == "json":
        return (json.dumps(describe(g), indent=2, sort_keys=True) + "\n").encode(), EXIT_OK
    return (describe_text(g) + "\n").encode(), EXIT_OK


def _config(vals):
    keys = ("algebra", "suite", "seed", "prime", "max_bidegree", "samples", "format", "out")
    return RunConfig(**{k: vals[k] for k in keys if k in vals})


def _cmd_verify(vals):
    config = _config(vals).validate()
    report = run_suite(config, bool(vals.get("timings")))
    code = EXIT_FAIL if report["summary"]["fail"] else EXIT_OK
    return emit_report(report, config.format), code


def hilbert_report(g, degrees, bound, method="auto", prime=None, seed=0):
    tables = [cx.hilbert_table(g, j, bound, p=prime, method=method, seed=seed) for j in degrees]
    rows = [row for t in tables for row in t.rows()]
    return {
        "schema": SCHEMA,
        "algebra": g.spec,
        "grading": "multiplier",
        "max_bidegree": bound,
        "methods": {str(t.meta["j"]): t.meta["method"] for t in tables},
        "rows": rows,
    }


def _cmd_hilbert(vals):
    g = _algebra(vals["algebra"])
    k = g.borel_dim
    bound = vals.get("max_bidegree", 4 if g.rank == 1 else 2)
    if bound < 0:
        raise UsageError("--max-bidegree must be nonnegative")
    degrees = [vals["degree"]] if "degree" in vals else list(range(k, g.dim + 1))
    prime = vals.get("prime")
    if prime is not None and not _is_prime(prime):
        raise UsageError(f"--prime {prime} is not prime")
    rep = hilbert_report(g, degrees, bound, vals.get("method", "auto"), prime, vals.get("seed", 0))
    if vals.get("format") == "text":
        lines = [f"{'j':>3} {'a':>3} {'b':>3} {'dim':>6}"]
        lines += [f"{r['j']:>3} {r['a']:>3} {r['b']:>3} {r['dim']:>6}" for r in rep["rows"]]
        return ("\n".join(lines) + "\n").encode(), EXIT_OK
    return (json.dumps(rep, indent=2, sort_keys=True) + "\n").encode(), EXIT_OK


def _cmd_count(vals):
    g = _algebra(vals["algebra"])
    try:
        primes = [int(t) for t in (vals.get("primes") or "2,3,5,7").split(",")]
    except ValueError as exc:
        raise UsageError("--primes must be comma separated integers") from exc
    if any(not _is_prime(q) for q in primes):
        raise UsageError("--primes must all be prime")
    if vals.get("strata"):
        if g.spec != "A1":
            raise UsageError("--strata is defined for A1 only")
        out = {"algebra": g.spec, "strata": vr.strata_dims_sl2(primes)}
    else:
        if g.is_abelian:
            raise UsageError("abelian algebras have no nilpotent-pair fibers")
        try:
            out = {"algebra": g.spec, "factors": vr.property_N_check(g, primes)}
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return (json.dumps(suites._plain(out), indent=2, sort_keys=True) + "\n").encode(), EXIT_OK


def _untimed(report):
    """Copy of a report without wall-clock fields."""
    out = dict(report)
    out["checks"] = [{k: v for k, v in r.items() if k != "elapsed"} for r in report["checks"]]
    return out


def _cmd_report(args):
    try:
        report = json.loads(Path(args.path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read report {args.path}: {exc}") from exc
    if report.get("schema") != SCHEMA:
        raise UsageError(f"unsupported report schema {report.get('schema')!r}")
    code = EXIT_FAIL if report["summary"]["fail"] else EXIT_OK
    if args.rerun:
        config = RunConfig(**report["config"])
        fresh = run_suite(config)
        same = emit_report(fresh, "json") == emit_report(_untimed(report), "json")
        msg = "identical" if same else "differs"
        return f"rerun {msg}\n".encode(), (code if same else EXIT_FAIL)
    return emit_report(report, args.format), code


def main(argv=None, environ=None):
    environ = os.environ if environ is None else environ
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "report":
            data, code = _cmd_report(args)
            out = None
        else:
            vals = _merged(args, environ)
            handler = {"describe": _cmd_describe, "verify": _cmd_verify,
                       "hilbert": _cmd_hilbert, "count": _cmd_count}[args.command]
            data, code = handler(vals)
            out = vals.get("out")
    except UsageError as exc:
        print(f"commvar: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cx.ResourceError as exc:
        print(f"commvar: resource budget exceeded in {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    _write(data, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
