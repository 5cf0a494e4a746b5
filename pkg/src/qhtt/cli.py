"""Command-line driver: ``qhtt check | annotate | simulate | corpus``.

Exit codes: 0 everything passed, 1 a verification (or runtime) failure,
2 a parse error, static type error or bad usage, 3 an I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from . import simulator
from .checker import Options, annotate, check_program
from .errors import ParseError, QhttError
from .props.sampling import DEFAULT_SAMPLES, seed_from_env
from .surface import ast as A
from .surface import parse

EXIT_OK, EXIT_FAIL, EXIT_STATIC, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path):
    return Path(path).read_text(encoding="utf-8")


def _options(args) -> Options:
    opts = Options(samples=args.samples, seed=seed_from_env(), max_registers=args.max_registers)
    if args.tol is not None:
        opts.tol = args.tol
    return opts


def check_file(path, opts: Options):
    """Check one file; returns ``(exit code, report dict, text lines, source, program, decl reports)``."""
    report = {"file": str(path), "declarations": []}
    try:
        source = _read(path)
    except OSError as e:
        report.update(verdict="fail", error={"kind": "IOError", "message": str(e)})
        return EXIT_IO, report, [f"{path}: cannot read: {e.strerror or e}"], None, None, []
    try:
        program = parse(source)
    except ParseError as e:
        report.update(verdict="fail", error={"kind": "ParseError", "message": str(e)})
        return EXIT_STATIC, report, [f"{path}:{e}: parse error"], source, None, []
    decls = check_program(program, opts)
    report["declarations"] = [d.to_dict() for d in decls]
    report["verdict"] = "pass" if all(d.passed for d in decls) else "fail"
    lines = []
    for d in decls:
        n = len(d.obligations)
        modes = sorted({o.verdict.mode for o in d.obligations})
        what = f"{n} obligation{'s' if n != 1 else ''}" + (f", {'/'.join(modes)}" if modes else "")
        lines.append(f"{path}: {d.name}: {d.verdict} ({what}, {d.seconds:.3f}s)")
        lines.extend(f"  {msg}" for msg in d.failures())
    if any(d.type_error for d in decls):
        code = EXIT_STATIC
    elif all(d.passed for d in decls):
        code = EXIT_OK
    else:
        code = EXIT_FAIL
    return code, report, lines, source, program, decls


def _check_job(job):
    path, opts = job
    code, report, lines, *_ = check_file(path, opts)
    return code, report, lines


def combine(codes) -> int:
    """Worst class wins: I/O, then static errors, then verification failures."""
    for c in (EXIT_IO, EXIT_STATIC, EXIT_FAIL):
        if c in codes:
            return c
    return EXIT_OK


def _dump(obj, dest):
    text = json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def cmd_check(args) -> int:
    opts = _options(args)
    jobs = [(p, opts) for p in args.files]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_check_job, jobs))
    else:
        results = [_check_job(j) for j in jobs]
    for _, _, lines in results:
        for line in lines:
            print(line, file=sys.stdout if args.json != "-" else sys.stderr)
    if args.annotate:
        for p in args.files:
            code, _, _, source, program, decls = check_file(p, opts)
            if program is not None:
                sys.stdout.write(annotate(source, program, decls))
    if args.json:
        reports = [r for _, r, _ in results]
        try:
            _dump(reports[0] if len(reports) == 1 else reports, args.json)
        except OSError as e:
            print(f"cannot write {args.json}: {e}", file=sys.stderr)
            return EXIT_IO
    return combine([c for c, _, _ in results])


def cmd_annotate(args) -> int:
    code, _, lines, source, program, decls = check_file(args.file, _options(args))
    if program is None:
        for line in lines:
            print(line, file=sys.stderr)
        return code
    text = annotate(source, program, decls)
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as e:
            print(f"cannot write {args.output}: {e}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    if code != EXIT_OK:
        for line in lines:
            print(line, file=sys.stderr)
    return code


# ------------------------------------------------------------ simulate


def parse_inputs(items, decl) -> dict:
    """``["q=0.6,0.8", "x=1", "f=id", "a,b=1,0,0,1"]`` -> simulator inputs."""
    sig, _ = simulator.signature(decl)
    kinds = {p: dom for p, dom, _ in sig}
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--in expects name=value, got {item!r}")
        names = tuple(k.strip() for k in key.split(","))
        for n in names:
            if n not in kinds:
                raise UsageError(f"{decl.name} has no parameter {n}")
        dom = kinds[names[0]]
        if len(names) == 1 and dom == A.BIT:
            if val not in ("0", "1"):
                raise UsageError(f"bit input {key} must be 0 or 1")
            out[key] = int(val)
        elif len(names) == 1 and isinstance(dom, A.TPi) and dom.dom == A.BIT and dom.cod == A.BIT:
            if val not in simulator.BIT_FUNCTIONS:
                raise UsageError(f"{key} must be one of {', '.join(simulator.BIT_FUNCTIONS)}")
            out[key] = val
        else:
            try:
                amps = [complex(x.strip().replace(" ", "")) for x in val.split(",")]
            except ValueError:
                raise UsageError(f"cannot read amplitudes {val!r}") from None
            if len(amps) != 2 ** len(names):
                raise UsageError(f"{key} needs {2 ** len(names)} amplitudes")
            out[names if len(names) > 1 else names[0]] = amps
    given = {n for k in out for n in (k if isinstance(k, tuple) else (k,))}
    missing = [p for p, dom, _ in sig if p not in given and (dom in (A.QBIT, A.BIT) or (
        isinstance(dom, A.TPi) and dom.dom == A.BIT and dom.cod == A.BIT))]
    if missing:
        raise UsageError(f"symbolic inputs need concrete values: --in {missing[0]}=...")
    return out


def _complex_json(z):
    return [round(z.real, 12), round(z.imag, 12)]


def cmd_simulate(args) -> int:
    try:
        program = parse(_read(args.file))
    except OSError as e:
        print(f"{args.file}: cannot read: {e.strerror or e}", file=sys.stderr)
        return EXIT_IO
    except ParseError as e:
        print(f"{args.file}:{e}: parse error", file=sys.stderr)
        return EXIT_STATIC
    names = [d.name for d in program.decls]
    decl_name = args.decl or names[-1]
    try:
        decl = program.get(decl_name)
    except KeyError:
        print(f"{args.file}: no declaration {decl_name}", file=sys.stderr)
        return EXIT_STATIC
    try:
        inputs = parse_inputs(args.inputs, decl)
    except UsageError as e:
        print(f"qhtt simulate: error: {e}", file=sys.stderr)
        return EXIT_STATIC
    seed = args.seed if args.seed is not None else seed_from_env(0)
    try:
        hist = simulator.histogram(program, decl_name, inputs, args.shots, seed, measure_result=args.measure)
        first = simulator.run(program, decl_name, inputs, seed=seed * 1_000_003)
    except QhttError as e:
        print(f"{args.file}: {decl_name}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL
    state = first.final.amplitudes()
    if args.json:
        out = {"decl": decl_name, "seed": seed, "shots": args.shots, "histogram": hist}
        if args.state:
            out["state"] = {"registers": first.final.names, "amplitudes": {k: _complex_json(v) for k, v in state.items()}}
        _dump(out, args.json)
        return EXIT_OK
    width = max((len(k) for k in hist), default=0)
    for k, v in hist.items():
        print(f"{(k or '-').ljust(width)}  {v}")
    if args.state:
        print("final state (first shot) over " + (", ".join(first.final.names) or "no registers") + ":")
        for k, a in state.items():
            print(f"  |{k}⟩  {a.real:+.6f}{a.imag:+.6f}j")
    return EXIT_OK


# ------------------------------------------------------------ corpus


def corpus_files():
    root = resources.files("qhtt") / "corpus"
    out = sorted(p.name for p in root.iterdir() if p.name.endswith(".qh"))
    out += sorted("mutants/" + p.name for p in (root / "mutants").iterdir() if p.name.endswith(".qh"))
    return out


def cmd_corpus(args) -> int:
    root = resources.files("qhtt") / "corpus"
    if args.action == "list":
        for name in corpus_files():
            print(name)
        return EXIT_OK
    dest = Path(args.dest)
    try:
        for name in corpus_files() + sorted(p.name for p in root.iterdir() if p.name.endswith(".annotated")):
            target = dest / name
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text((root / name).read_text(encoding="utf-8"), encoding="utf-8")
    except OSError as e:
        print(f"cannot export corpus: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ------------------------------------------------------------ entry point


def _checker_flags(p):
    p.add_argument("--tol", type=float, default=None, help="inclusion tolerance (default 1e-7)")
    p.add_argument("--max-registers", type=int, default=12, help="register cap (default 12)")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="sample points for symbolic states")


def build_parser():
    ap = argparse.ArgumentParser(prog="qhtt", description="Check and run quantum Hoare-typed programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify every declaration in one or more files")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", metavar="OUT", help="write the report as JSON ('-' for stdout)")
    p.add_argument("--annotate", action="store_true", help="also print annotated listings")
    p.add_argument("--jobs", type=int, default=1, help="check files in parallel")
    _checker_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("annotate", help="print the source with a proposition after each statement")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    _checker_flags(p)
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("simulate", help="run a declaration on concrete inputs")
    p.add_argument("file")
    p.add_argument("--decl", help="declaration to run (default: the last one)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--in", dest="inputs", action="append", default=[], metavar="NAME=VALUE",
                   help="q=0.6,0.8 for qubits, x=1 for bits, f=id for bit -> bit")
    p.add_argument("--measure", action="store_true", help="measure returned qubits at the end")
    p.add_argument("--state", action="store_true", help="dump the final state of the first shot")
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("corpus", help="list or export the bundled example programs")
    p.add_argument("action", choices=["list", "export"])
    p.add_argument("dest", nargs="?", default=".")
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
