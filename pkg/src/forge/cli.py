"""The `forge` command line.

Exit codes: 0 ok, 1 hard error or falsifier, 2 inconclusive (budget or
horizon), 3 usage. `forge wp` additionally exits 4 on a nontrivial verdict.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from forge.config import PROFILE_ENV, load_config
from forge.construction import Certificate, ConstructionError, build_stages, verify_certificate
from forge.limit import HorizonError, limit_apply, stage_apply, word_problem
from forge.marked import BudgetExceeded, marked_ball, marked_ball_iso
from forge.mif import escape_certificate, mif_scan, pi_closure, verify_escape
from forge.transitivity import TransitivityEngine
from forge.words import format_word, parse_word

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_NONTRIVIAL = 0, 1, 2, 3, 4

log = logging.getLogger("forge")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, report: dict, text: str) -> None:
    if args.json:
        print(json.dumps(report, indent=1, sort_keys=True))
    elif not args.quiet:
        print(text)


def _config(args):
    return load_config(None, seed=args.seed,
                       nu_cap=getattr(args, "nu_cap", None),
                       ball_cap=getattr(args, "ball_cap", None),
                       closure_cap=getattr(args, "closure_cap", None))


def _load(args) -> Certificate:
    try:
        return Certificate.load(args.cert)
    except FileNotFoundError:
        raise UsageError(f"no such certificate: {args.cert}") from None


def _word(cert: Certificate, text: str):
    letters = set(cert.letters())
    try:
        return parse_word(text, letters)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _points(cert: Certificate, text: str) -> tuple:
    try:
        return tuple(cert.ambient.parse_point(t.strip()) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _stage_ref(cert: Certificate, text: str) -> int:
    kind, _, n = text.partition(":")
    if kind != "stage" or not n.isdigit():
        raise UsageError(f"group must look like stage:N, got {text!r}")
    if int(n) > cert.depth:
        raise UsageError(f"certificate has stages 0..{cert.depth}")
    return int(n)


# -- subcommands --

def cmd_build(args) -> int:
    config = _config(args)
    t0 = time.perf_counter()
    cert = build_stages(args.base, args.stages, config, verify=not args.no_verify)
    seconds = time.perf_counter() - t0
    cert.save(args.out)
    failed = [c for c in cert.checks if not c["ok"]]
    report = {
        "base": cert.base, "out": str(args.out), "complete": cert.complete, "note": cert.note,
        "seconds": round(seconds, 3), "failed_checks": failed,
        "stages": [{"n": s.n, "nu": s.nu, "k": s.k, "support_radius": s.support_radius}
                   for s in cert.stages],
    }
    rows = "\n".join(f"  stage {s.n}: nu={s.nu} k={s.k} support_radius={s.support_radius}"
                     for s in cert.stages)
    _emit(args, report, f"{cert.base}: {cert.depth} stages in {seconds:.2f}s -> {args.out}\n{rows}"
          + ("" if cert.complete else f"\n  incomplete: {cert.note}"))
    if failed:
        return EXIT_FAIL
    return EXIT_OK if cert.complete else EXIT_INCONCLUSIVE


def cmd_eval(args) -> int:
    cert = _load(args)
    w = _word(cert, args.word)
    (x,) = _points(cert, args.point)
    amb = cert.ambient
    if args.stage is not None:
        if not 0 <= args.stage <= cert.depth:
            raise UsageError(f"certificate has stages 0..{cert.depth}")
        y, h = stage_apply(cert, w, args.stage, x)
        stage, where = args.stage, f"stage {args.stage}"
    else:
        r = limit_apply(cert, w, x)
        y, h, stage, where = r.point, r.height, r.stage, f"limit (stabilized at stage {r.stage})"
    report = {"word": format_word(w), "point": amb.format_point(x), "image": amb.format_point(y),
              "stage": stage, "limit": args.stage is None, "max_height": h}
    _emit(args, report, f"{format_word(w)} . {amb.format_point(x)} = {amb.format_point(y)}  [{where}]")
    return EXIT_OK


def cmd_wp(args) -> int:
    cert = _load(args)
    w = _word(cert, args.word)
    res = word_problem(cert, w, fallback=True)
    report = {"word": format_word(w), **res.to_json(cert.ambient)}
    extra = f", moved point {report['moved_point']}" if "moved_point" in report else ""
    _emit(args, report, f"{format_word(w)}: {res.verdict}{extra}")
    return {"trivial": EXIT_OK, "nontrivial": EXIT_NONTRIVIAL}.get(res.verdict, EXIT_INCONCLUSIVE)


def cmd_ball(args) -> int:
    cert = _load(args)
    n = _stage_ref(cert, args.group)
    alph = cert.alphabet(n)
    ball = marked_ball(cert.group, alph, args.radius, _config(args).ball_cap)
    if args.dot:
        Path(args.dot).write_text(ball.to_dot(alph.letters, name=f"stage{n}_r{args.radius}"))
    sizes = [ball.depth.count(d) for d in range(args.radius + 1)]
    report = {"group": args.group, "radius": args.radius, "vertices": len(ball), "sphere_sizes": sizes,
              "dot": args.dot}
    _emit(args, report, f"{args.group} ball of radius {args.radius}: {len(ball)} vertices {sizes}")
    return EXIT_OK


def cmd_ball_iso(args) -> int:
    cert = _load(args)
    a, b = _stage_ref(cert, args.a), _stage_ref(cert, args.b)
    k = args.radius if args.radius is not None else cert.stages[min(a, b)].k
    res = marked_ball_iso(cert.group, cert.alphabet(a), cert.group, cert.alphabet(b), k,
                          _config(args).ball_cap)
    report = {"a": args.a, "b": args.b, "radius": k, "isomorphic": res.ok, "vertices": res.vertices}
    text = f"{args.a} vs {args.b} at radius {k}: " + ("isomorphic" if res else "differ")
    if not res:
        u, v = res.witness
        report["witness"] = [format_word(u), format_word(v)]
        text += f" ({format_word(u)} = {format_word(v)} holds on exactly one side)"
    _emit(args, report, text)
    return EXIT_OK if res else EXIT_FAIL


def cmd_witness(args) -> int:
    cert = _load(args)
    amb = cert.ambient
    src, dst = _points(cert, args.source), _points(cert, args.target)
    try:
        wit = TransitivityEngine(cert).witness(src, dst)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t0 = time.perf_counter()
    images = [limit_apply(cert, wit.slp, x).point for x in src]
    verify_s = time.perf_counter() - t0
    report = {
        "from": [amb.format_point(p) for p in src], "to": [amb.format_point(p) for p in dst],
        "radius": wit.radius, "transpositions": wit.transpositions,
        "slp_nodes": len(wit.slp.nodes), "flat_length": wit.slp.flat_length,
        "verified": images == list(dst), "verify_seconds": round(verify_s, 4),
    }
    if args.flat_max is not None and wit.slp.flat_length <= args.flat_max:
        report["word"] = format_word(wit.slp.expand())
    if args.emit_slp:
        Path(args.emit_slp).write_text(json.dumps(wit.slp.to_json()) + "\n")
        report["slp"] = args.emit_slp
    _emit(args, report, f"witness {args.source} -> {args.target}: {len(wit.slp.nodes)} SLP nodes, "
          f"flat length {wit.slp.flat_length}, verified={report['verified']}")
    return EXIT_OK if report["verified"] else EXIT_FAIL


def cmd_escape(args) -> int:
    cert = _load(args)
    w = _word(cert, args.word)
    if word_problem(cert, w, fallback=True, evidence=False).trivial:
        _emit(args, {"word": format_word(w), "verdict": "trivial"}, f"{format_word(w)}: trivial")
        return EXIT_OK
    rep = escape_certificate(cert, w, args.stages_to_check or _config(args).escape_stages)
    report = rep.to_json()
    report["reverified"] = verify_escape(cert, rep)
    lines = [f"{rep.word}: {rep.verdict} (moved point {rep.moved_point})"]
    lines += [f"  m={c.m} nu={c.nu}: image {c.image}, displaced={c.displaced} approx={c.approx} "
              f"shifted={c.shifted}" for c in rep.checks]
    _emit(args, report, "\n".join(lines))
    if rep.verdict == "falsifier" or not report["reverified"]:
        return EXIT_FAIL
    return EXIT_OK if rep.verdict == "escaped" else EXIT_INCONCLUSIVE


def cmd_mif_scan(args) -> int:
    cert = _load(args)
    config = _config(args)
    max_len = args.max_len if args.max_len is not None else cert.stages[min(1, cert.depth)].k
    if max_len > cert.top.k:
        raise UsageError(f"--max-len {max_len} exceeds k_{cert.depth} = {cert.top.k}")
    reports: list = []
    summary = mif_scan(cert, args.samples, max_len, config.seed,
                       args.stages_to_check or config.escape_stages, reports)
    bad = [r.word for r in reports if not verify_escape(cert, r)]
    report = {**summary.to_json(), "reverified": len(reports) - len(bad), "reverify_failures": bad}
    if args.reports:
        Path(args.reports).write_text("".join(json.dumps(r.to_json()) + "\n" for r in reports))
    _emit(args, report, f"{summary.samples} samples (seed {summary.seed}, max flat {max_len}): "
          f"{summary.trivial} trivial, {summary.escaped} escaped, {summary.inconclusive} inconclusive, "
          f"{summary.falsifiers} falsifiers; escaped rate {summary.conclusive_rate:.3f}")
    return EXIT_FAIL if summary.falsifiers or bad else EXIT_OK


def cmd_pi_closure(args) -> int:
    cert = _load(args)
    res = pi_closure(cert, args.x_count, args.budget)
    if res.conclusive:
        text = f"x_count={args.x_count}: order {res.order} (stage {res.stage} order {res.stage_order})"
    else:
        text = f"x_count={args.x_count}: inconclusive, needs words of length {res.blocking_length}"
    _emit(args, res.to_json(), text)
    if not res.conclusive:
        return EXIT_INCONCLUSIVE
    return EXIT_OK if res.matches else EXIT_FAIL


def cmd_verify_cert(args) -> int:
    cert = _load(args)
    rep = verify_certificate(cert, _config(args))
    failed = [r for r in rep.results if not r["ok"]]
    report = {**rep.to_json(), "complete": cert.complete}
    _emit(args, report, f"{args.cert}: {len(rep.results)} checks replayed, {len(failed)} failed"
          + "".join(f"\n  {r['kind']} stage {r['stage']}: {r.get('detail', '')}" for r in failed))
    if not rep.ok:
        return EXIT_FAIL
    return EXIT_OK if cert.complete else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable report on stdout")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    p = _Parser(prog="forge", parents=[common],
                description=f"Stage builder and checker for H_inf. Budget presets via {PROFILE_ENV}.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    def with_cert(sp):
        sp.add_argument("--cert", required=True)
        return sp

    sp = cmd("build", cmd_build, "build stages and write a certificate")
    sp.add_argument("--base", required=True, help="cyclic:n, sym:n, zfree:d, prod(A,B)")
    sp.add_argument("--stages", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--nu-cap", type=int)
    sp.add_argument("--ball-cap", type=int)
    sp.add_argument("--closure-cap", type=int)
    sp.add_argument("--no-verify", action="store_true", help="skip recording re-checkable conditions")

    sp = with_cert(cmd("eval", cmd_eval, "apply a word to a point"))
    sp.add_argument("--word", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--stage", type=int, help="evaluate at stage n instead of the limit")

    sp = with_cert(cmd("wp", cmd_wp, "word problem in H_inf (exit 0 trivial, 4 nontrivial, 2 undecided)"))
    sp.add_argument("--word", required=True)

    sp = with_cert(cmd("ball", cmd_ball, "marked ball of a stage group"))
    sp.add_argument("--group", required=True, help="stage:N")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--dot")

    sp = with_cert(cmd("ball-iso", cmd_ball_iso, "compare marked balls of two stages"))
    sp.add_argument("--a", required=True, help="stage:N")
    sp.add_argument("--b", required=True, help="stage:N")
    sp.add_argument("--radius", type=int, help="defaults to k of the lower stage")

    sp = with_cert(cmd("witness", cmd_witness, "SLP sending one tuple of points to another"))
    sp.add_argument("--from", dest="source", required=True, help='comma separated, e.g. "id,a"')
    sp.add_argument("--to", dest="target", required=True)
    sp.add_argument("--emit-slp")
    sp.add_argument("--flat-max", type=int, help="also print the flat word if it is at most this long")

    sp = with_cert(cmd("escape", cmd_escape, "support-escape report for one word"))
    sp.add_argument("--word", required=True)
    sp.add_argument("--stages-to-check", type=int)

    sp = with_cert(cmd("mif-scan", cmd_mif_scan, "escape reports for random words"))
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--max-len", type=int, help="defaults to k_1")
    sp.add_argument("--stages-to-check", type=int)
    sp.add_argument("--reports", help="write every escape report as JSON lines")

    sp = with_cert(cmd("pi-closure", cmd_pi_closure, "order of the limit subgroup generated by X"))
    sp.add_argument("--x-count", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10_000)

    with_cert(cmd("verify-cert", cmd_verify_cert, "replay every check of a certificate"))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag, default in (("json", False), ("seed", None), ("quiet", False)):
        if not hasattr(args, flag):
            setattr(args, flag, default)
    logging.basicConfig(level=logging.WARNING if args.quiet or args.json else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"forge {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HorizonError, BudgetExceeded) as exc:
        print(f"forge {args.command}: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ConstructionError, ValueError) as exc:
        print(f"forge {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
