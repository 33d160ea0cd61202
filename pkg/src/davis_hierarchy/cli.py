"""Command-line entry point ``dh``.

Exit codes: 0 when every verdict passes, 1 when some verdict fails (the
report carries witnesses), 2 on errors (usage, parse, resource limits).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import reports
from .config import DEFAULT_MEMO_CAP, RunConfig
from .coxeter import cayley_ball, parse_coxeter
from .davis import (
    davis_ball,
    halfspace_check,
    local_arrangement_check,
    separation_check,
    vertex_link_check,
    walls_in_ball,
)
from .errors import DHError, TidyViolation
from .euler import charney_davis, euler_report
from .hierarchy import ACYCLIC_CAVEAT, SCOPE_CAVEAT, family_from_orbits, run_hierarchy
from .nerve import build_nerve, manifold_check
from .quotients import (
    finite_quotient,
    parse_quotient_file,
    torsion_free_check,
    trivial_intersection_check,
    trivial_quotient,
    wall_orbits,
)
from .simplicial import format_complex, is_homology_sphere, label_name, parse_complex
from .trick import prepare_mirrored_manifold, run_trick


class UsageError(DHError):
    pass


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _system(args):
    return parse_coxeter(_read(args.coxeter_file), memo_cap=args.memo_cap)


def _quotient(args, W):
    if getattr(args, "quotient_file", None):
        return finite_quotient(W, parse_quotient_file(_read(args.quotient_file), W))
    if getattr(args, "quotient", None):
        return finite_quotient(W, args.quotient)
    return None


def _write_out(args, name, text):
    if getattr(args, "out", None):
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def _names(W, T):
    return [W.names[i] for i in T]


# -- subcommands ---------------------------------------------------------------

def cmd_group(args):
    W = _system(args)
    ball = cayley_ball(W, args.ball)
    result = {
        "generators": list(W.names),
        "elements": [W.word_str(w) for w in ball.elements],
        "edges": [[W.word_str(a), W.word_str(b), W.names[s]] for a, b, s in ball.edges],
        "lengths": {str(k): v for k, v in ball.lengths.items()},
        "count": len(ball),
    }
    return {}, result, [], [args.coxeter_file]


def cmd_nerve(args):
    W = _system(args)
    N = build_nerve(W)
    L = N.named_complex()
    text = format_complex(L) if L.facets else "complex 0\n\n"
    _write_out(args, "nerve.cx", text)
    result = {
        "spherical_subsets": [{"subset": _names(W, T.subset), "order": T.order} for T in N.spherical_subsets],
        "nerve": text,
        "f_vector": list(L.f_vector()),
        "flag": L.is_flag(),
    }
    verdicts = {}
    if args.dim is not None:
        cert = manifold_check(N, args.dim)
        result["manifold"] = cert.to_json()
        verdicts["manifold"] = cert.passed
    return verdicts, result, [], [args.coxeter_file]


def _nerve_dimension(N):
    L = N.complex
    d = L.dimension
    return d + 1 if d >= 0 and is_homology_sphere(L, d).passed else None


def cmd_davis(args):
    W = _system(args)
    cfg = RunConfig(radius=args.radius, memo_cap=args.memo_cap, output_dir=args.out)
    N = build_nerve(W)
    U = davis_ball(W, cfg.radius, N)
    walls = walls_in_ball(U)
    R = U.realization
    hom = R.complex.homology(reduced=True)
    sep = separation_check(U, walls)
    links = vertex_link_check(U, N, _nerve_dimension(N))
    half = halfspace_check(U, walls)
    local = local_arrangement_check(U, walls)
    verdicts = {
        "realization_acyclic": hom.is_acyclic,
        "separation": sep.passed,
        "vertex_links": links.passed,
        "halfspaces": half.passed,
        "local_arrangement": local.passed,
    }
    result = {
        "chambers": len(U.chambers),
        "f_vector": list(R.complex.f_vector()),
        "reduced_homology": hom.to_json(),
        "walls": [w.to_json(W) for w in walls],
        "separation": sep.to_json(),
        "vertex_links": links.to_json(),
        "halfspaces": half.to_json(),
        "local_arrangement": local.to_json(),
    }
    Q = _quotient(args, W)
    if Q is not None:
        tf = torsion_free_check(W, N, Q)
        ti = trivial_intersection_check(U, Q, N, walls)
        result["quotient"] = Q.to_json()
        result["torsion_free"] = tf.to_json(W)
        result["trivial_intersection"] = ti.to_json(W)
        verdicts["torsion_free"] = tf.passed
        verdicts["trivial_intersection"] = ti.passed
    _write_out(args, "realization.cx", format_complex(R.complex.relabel(label_name)))
    _write_out(args, "walls.json", reports.dumps({"walls": result["walls"]}))
    return verdicts, result, [SCOPE_CAVEAT], [args.coxeter_file] + ([args.quotient_file] if args.quotient_file else [])


def cmd_hierarchy(args):
    W = _system(args)
    N = build_nerve(W)
    U = davis_ball(W, args.radius, N)
    Q = _quotient(args, W) or trivial_quotient(W)
    family = family_from_orbits(wall_orbits(U, Q), W)
    order = None
    if args.order:
        try:
            order = [int(x) for x in args.order.split(",")]
        except ValueError:
            raise UsageError(f"--order expects comma-separated integers, got {args.order!r}") from None
        try:
            family.reordered(order)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    inputs = [args.coxeter_file] + ([args.quotient_file] if args.quotient_file else [])
    try:
        trace = run_hierarchy(U, family, order=order, override=args.override, quotient=Q)
    except TidyViolation as exc:
        result = {"tidy_violation": {"step": exc.step, "message": str(exc),
                                     "certificate": exc.certificate.to_json() if exc.certificate else None}}
        return {"tidy": False}, result, [ACYCLIC_CAVEAT, SCOPE_CAVEAT], inputs
    if args.out:
        for i, state in enumerate(trace.states):
            _write_out(args, f"step{i:02d}.cx", format_complex(state.realization.complex.relabel(label_name)))
    verdicts = {
        "tidy": trace.initial_tidy.passed,
        "mayer_vietoris": all(s.mayer_vietoris.passed for s in trace.steps),
        "residual_tidy": all(s.residual_tidy is None or s.residual_tidy.passed for s in trace.steps),
        "terminal_single_chambers": trace.terminal_single_chambers,
        "terminal_isomorphic": trace.terminal_isomorphic,
    }
    result = {"quotient": Q.to_json(), "family_size": len(trace.family), "panels": sum(len(o) for o in trace.family.members), "trace": trace.to_json()}
    return verdicts, result, [ACYCLIC_CAVEAT, SCOPE_CAVEAT], inputs


def cmd_euler(args):
    W = _system(args)
    rep = euler_report(build_nerve(W))
    verdicts = {}
    if rep.identity_ok is not None:
        verdicts["right_angled_identity"] = rep.identity_ok
    if rep.sign_verdict is not None:
        verdicts["sign"] = rep.sign_verdict
    return verdicts, rep.to_json(), [], [args.coxeter_file]


def cmd_charney_davis(args):
    L = parse_complex(_read(args.complex_file))
    rep = charney_davis(L)
    verdicts = {} if rep.sign_ok is None else {"charney_davis_sign": rep.sign_ok}
    return verdicts, rep.to_json(), [], [args.complex_file]


def cmd_trick(args):
    M = parse_complex(_read(args.manifold_file))
    B = parse_complex(_read(args.boundary))
    MM = prepare_mirrored_manifold(M, B)
    Q = finite_quotient(MM.system, args.quotient) if args.quotient else None
    out = run_trick(MM, args.radius, Q)
    verdicts = {
        "nerve_equals_boundary": out.nerve_matches,
        "interior_links": out.links_ok,
        "hierarchy": out.trace.passed,
    }
    verdicts.update({c.name: c.passed for c in out.certificates})
    return verdicts, out.to_json(), [ACYCLIC_CAVEAT, SCOPE_CAVEAT], [args.manifold_file, args.boundary]


def cmd_sphere_check(args):
    K = parse_complex(_read(args.complex_file))
    cert = is_homology_sphere(K, args.dim)
    return {"sphere": cert.passed}, cert.to_json(), [], [args.complex_file]


def cmd_homology(args):
    K = parse_complex(_read(args.complex_file))
    h = K.homology(reduced=args.reduced)
    result = h.to_json()
    result["groups"] = {str(k): h.group(k) for k in range(max(K.dimension, 0) + 1)}
    result["euler_characteristic"] = K.euler_characteristic()
    return {}, result, [], [args.complex_file]


def cmd_corpus(args):
    from .corpus import run_corpus

    outcomes = run_corpus(args.dir)
    verdicts = {o["name"]: o["matched"] for o in outcomes}
    return verdicts, {"fixtures": outcomes}, [], []


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the report here (default: stdout)")
    common.add_argument("--memo-cap", type=int, default=DEFAULT_MEMO_CAP, help="word-problem memo cap")

    p = argparse.ArgumentParser(prog="dh", description="Coxeter groups, Davis complexes and hierarchies.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("group", parents=[common], help="Cayley ball of a Coxeter group")
    s.add_argument("coxeter_file")
    s.add_argument("--ball", type=int, default=2, metavar="R")
    s.set_defaults(func=cmd_group)

    s = sub.add_parser("nerve", parents=[common], help="nerve and manifold check")
    s.add_argument("coxeter_file")
    s.add_argument("--dim", type=int, default=None, metavar="N")
    s.add_argument("--out", metavar="DIR")
    s.set_defaults(func=cmd_nerve)

    def add_quotient(s):
        g = s.add_mutually_exclusive_group()
        g.add_argument("--quotient", metavar="RECIPE", help="e.g. mod-3 (reflection representation mod p)")
        g.add_argument("--quotient-file", metavar="FILE", help="lines 's: (1 2)(3 4)'")

    s = sub.add_parser("davis", parents=[common], help="Davis complex ball, walls and certificates")
    s.add_argument("coxeter_file")
    s.add_argument("--radius", type=int, default=2)
    add_quotient(s)
    s.add_argument("--out", metavar="DIR")
    s.set_defaults(func=cmd_davis)

    s = sub.add_parser("hierarchy", parents=[common], help="cut along wall orbits")
    s.add_argument("coxeter_file")
    s.add_argument("--radius", type=int, default=2)
    add_quotient(s)
    s.add_argument("--order", metavar="I,J,K")
    s.add_argument("--override", action="store_true", help="run even if the family is not tidy")
    s.add_argument("--out", metavar="DIR")
    s.set_defaults(func=cmd_hierarchy)

    s = sub.add_parser("euler", parents=[common], help="orbifold Euler characteristic")
    s.add_argument("coxeter_file")
    s.set_defaults(func=cmd_euler)

    s = sub.add_parser("charney-davis", parents=[common], help="Charney-Davis quantity of a complex")
    s.add_argument("complex_file")
    s.set_defaults(func=cmd_charney_davis)

    s = sub.add_parser("trick", parents=[common], help="reflection group trick")
    s.add_argument("manifold_file")
    s.add_argument("--boundary", required=True, metavar="FILE")
    s.add_argument("--radius", type=int, default=2)
    s.add_argument("--quotient", metavar="RECIPE")
    s.set_defaults(func=cmd_trick)

    s = sub.add_parser("sphere-check", parents=[common], help="homology sphere certificate")
    s.add_argument("complex_file")
    s.add_argument("--dim", type=int, required=True)
    s.set_defaults(func=cmd_sphere_check)

    s = sub.add_parser("homology", parents=[common], help="integral homology")
    s.add_argument("complex_file")
    s.add_argument("--reduced", action="store_true")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("corpus", parents=[common], help="golden fixture runner")
    s.add_argument("action", choices=["run"])
    s.add_argument("--dir", default=None, help="fixture directory (default: bundled corpus)")
    s.set_defaults(func=cmd_corpus)
    return p


def run_command(argv, stdout=None, stderr=None):
    """Run one command; returns (exit code, report dict)."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    try:
        if getattr(args, "radius", 0) is not None and getattr(args, "radius", 0) < 0:
            raise UsageError("radius must be >= 0")
        verdicts, result, caveats, inputs = args.func(args)
        report = reports.make_report(args.command, argv, inputs, verdicts, result, caveats)
        code = 0 if report["passed"] else 1
    except (DHError, ValueError) as exc:
        report = reports.error_report(args.command, argv, exc)
        stderr.write(f"dh: error: {exc}\n")
        if isinstance(exc, UsageError):
            parser.print_usage(stderr)
        code = 2
    reports.write_report(report, args.json, stdout)
    return code, report


def main(argv=None) -> int:
    code, _ = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())

