"""Command-line front end.

Every command prints one JSON report (schema "1", sorted keys) or, with
--human, a plain table rendered from the same report.  Exit codes: 0 all
checks pass, 1 an invariant is violated, 2 bad input, 3 precision exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import matrix as mx
from .delta import prism_from_json
from .dmodules import (
    DieudonneModule,
    FilteredDieudonneModule,
    dm_check,
    dual,
    fdm_check,
    isogeny_cokernel,
    standard_module,
    torsion_check,
)
from .envelope import EnvElement, Envelope, nilpotence_certify
from .errors import FrontierExceeded, PrecisionExhausted, PrismkitError, TailNotNegligible
from .ext import FiniteAbelianGroup, ext_groups
from .frames import (
    BKModule,
    Window,
    bk_is_minuscule,
    bk_to_window,
    check_morphism_direct,
    envelope_frame,
    frame_from_prism,
    is_morphism,
    lift_window_hom,
    normal_decomposition,
    window_check,
    window_from_normal,
    window_to_bk,
)
from .qprism import QContext
from .ring import RingSpec
from .suites import SCHEMA, SUITES, RunConfig, make_report, run_suites
from .witt import polys_to_json

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3
PRECISION_ERRORS = (PrecisionExhausted, TailNotNegligible, FrontierExceeded)


class InputError(Exception):
    pass


# -- parsing helpers ---------------------------------------------------------
def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise InputError(f"{what}: not valid JSON ({exc})") from exc


def _read_in(path):
    if path is None:
        raise InputError("this command needs --in <file|->")
    if path == "-":
        return _load_json(sys.stdin.read(), "--in")
    try:
        with open(path) as fh:
            return _load_json(fh.read(), "--in")
    except OSError as exc:
        raise InputError(f"--in: {exc}") from exc


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PRISMKIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"PRISMKIT_SEED must be an integer, got {env!r}") from exc


def _config(args, primes=None) -> RunConfig:
    return RunConfig(
        primes=primes or ([args.p] if args.p else [2, 3]),
        N=args.N,
        M=args.M,
        Q=args.Q,
        depth=args.depth,
        seed=_seed(args),
        samples=args.samples,
    )


def _prism(obj, args):
    if obj is None:
        kind = "crys"
        return prism_from_json({"kind": kind, "ring": RingSpec(args.p or 2, args.N).to_json()})
    if isinstance(obj, str):
        obj = _load_json(obj, "prism")
    return prism_from_json(obj)


def _matrix(ring, rows):
    return [[ring.element_from_json(a) for a in row] for row in rows]


def _frame(obj, args):
    P = _prism(obj.get("prism"), args)
    return frame_from_prism(P, obj.get("flavor", "d"))


def _window(obj, args) -> Window:
    F = _frame(obj, args)
    R = F.ring
    nL = int(obj["L"])
    if "psi" in obj:
        return window_from_normal(F, nL, _matrix(R, obj["psi"]))
    return Window(F, nL, _matrix(R, obj["phi"]), _matrix(R, obj["phi1"]))


def _module(obj, args):
    P = _prism(obj.get("prism"), args)
    R = P.ring
    psi = _matrix(R, obj["psi"]) if "psi" in obj else None
    D = DieudonneModule(P, _matrix(R, obj["phi"]), psi, label=obj.get("label", ""))
    if "rank" in obj and int(obj["rank"]) != D.h:
        raise InputError(f"rank {obj['rank']} does not match a {D.h}x{D.h} phi")
    fil = obj.get("fil")
    if fil is None:
        return D
    L = [[R.element_from_json(a) for a in c] for c in fil.get("L", [])]
    T = [[R.element_from_json(a) for a in c] for c in fil.get("T", [])]
    S = mx.from_columns(L + T)
    return FilteredDieudonneModule(D, S, len(L), label=obj.get("label", ""))


def _env_entry(env, a):
    if isinstance(a, dict) and "terms" in a:
        terms = {tuple(m): env.A.element_from_json(c) for m, c in a["terms"]}
        return EnvElement(env, terms)
    return env.const(env.A.element_from_json(a))


# -- commands ----------------------------------------------------------------
def _verdict(report: dict, ok: bool) -> dict:
    report["pass"] = bool(ok)
    return report


def cmd_witt(args):
    if args.action == "polys":
        if not 1 <= args.len <= 5:
            raise InputError("--len must be between 1 and 5")
        return _verdict({"polys": polys_to_json(args.p or 2, args.len)}, True)
    return _run_suites(args, ["witt"])


def cmd_delta(args):
    if args.ring is None:
        return _run_suites(args, ["delta"])
    P = _prism(args.ring, args)
    R = P.ring
    from .suites import Checks

    ck = Checks("delta", _seed(args))

    def laws(rng, i):
        x, y = R.random(rng), R.random(rng)
        rep = P.delta_ring.check_laws(x, y)
        return rep["add"] and rep["mul"], {"x": x.to_json(), "y": y.to_json()}

    ck.sampled("laws", args.samples or 200, laws)
    ck.add("distinguished", P.delta_ring.is_distinguished(P.d), {"d": P.d.to_json()})
    return make_report("delta", _config(args, [R.p]), ck.items)


def cmd_qlog(args):
    if args.x is None:
        return _run_suites(args, ["qlog"])
    C = QContext(args.p or 2, args.N, args.Q, args.depth)
    obj = _load_json(args.x, "--x")
    x = C.ring.element_from_json(obj)
    value, cert = C.q_log(x, terms=args.terms)
    eigen = value.phi() == C.d * value
    return _verdict({"x": x.to_json(), "log": value.to_json(), "certificate": cert.to_json(), "eigen_relation": eigen}, eigen)


def cmd_envelope(args):
    if args.x is None and args.prism is None and args.certify is None:
        return _run_suites(args, ["envelope"])
    P = _prism(args.prism, args) if args.prism else None
    if P is None:
        from .delta import bk_prism

        P = bk_prism(args.p or 2, args.N, args.M)
    x = P.ring.u if args.x is None else P.ring.element_from_json(_load_json(args.x, "--x"))
    K = args.depth if args.depth else 3
    env = Envelope(P, x, K)
    out = {"table": env.table()}
    ok = True
    if args.certify is not None:
        m, trace = nilpotence_certify(env, args.certify)
        out["certificate"] = {"m": m, "trace": trace}
        ok = all(r["bound_met"] for r in trace)
    return _verdict(out, ok)


def cmd_window(args):
    if args.action == "suite":
        return _run_suites(args, ["window"])
    if args.action == "lift":
        return _window_lift(args)
    W = _window(_read_in(args.input), args)
    if args.action == "check":
        rep = window_check(W)
        return _verdict({"window": W.to_json(), "check": rep}, rep["all_pass"])
    if args.action == "normal":
        nL, Psi = normal_decomposition(W)
        back = window_from_normal(W.frame, nL, Psi)
        return _verdict({"L": nL, "psi": mx.to_json(Psi)}, back.same_as(W))
    if args.action == "to-bk":
        B = window_to_bk(W)
        return _verdict({"bk": B.to_json()}, bk_is_minuscule(B))
    raise InputError(f"unknown window action {args.action!r}")


def _window_lift(args):
    if args.input is None:
        return _run_suites(args, ["lift"])
    obj = _read_in(args.input)
    P = _prism(obj.get("prism"), args)
    env = Envelope(P, P.ring.element_from_json(obj.get("x", {"coeffs": [[[1, 0], 1]]})), int(obj.get("K", 3)))
    F = envelope_frame(env)

    def mat(rows):
        return [[_env_entry(env, a) for a in row] for row in rows]

    nL = int(obj["L"])
    WM = window_from_normal(F, nL, mat(obj["psi_source"]))
    WN = window_from_normal(F, nL, mat(obj["psi_target"]))
    alpha = mat(obj["alpha"])
    lifted, witness = lift_window_hom(alpha, WM, WN)
    ok = is_morphism(lifted, WM, WN)["pass"] and check_morphism_direct(lifted, WM, WN)["pass"]
    return _verdict({"alpha": [[a.to_json() for a in row] for row in lifted], "witness": witness}, ok)


def cmd_bk(args):
    if args.input is None:
        return _run_suites(args, ["window"])
    obj = _read_in(args.input)
    P = _prism(obj.get("prism"), args)
    B = BKModule(P, _matrix(P.ring, obj["B"]))
    W, G = bk_to_window(B)
    rep = window_check(W)
    B2 = window_to_bk(W)
    same = mx.equal(B2.B, mx.mul(mx.mul(mx.inverse(G), B.B), mx.phi(G)))
    return _verdict({"window": W.to_json(), "base_change": mx.to_json(G), "check": rep, "roundtrip": same}, rep["all_pass"] and same)


def cmd_dm(args):
    if args.action == "suite":
        return _run_suites(args, ["dm"])
    if args.action == "standard":
        P = _prism(args.prism, args)
        M = standard_module(args.kind, P, args.rank)
        rep = fdm_check(M) if isinstance(M, FilteredDieudonneModule) else dm_check(M)
        return _verdict({"module": M.to_json(), "check": rep}, rep["all_pass"])
    obj = _read_in(args.input)
    if args.action == "cokernel":
        src, tgt = _module(obj["source"], args), _module(obj["target"], args)
        T = isogeny_cokernel(_matrix(tgt.prism.ring, obj["f"]), src, tgt)
        rep = torsion_check(T)
        return _verdict({"cokernel": T.to_json(), "check": rep}, rep["all_pass"])
    M = _module(obj, args)
    if args.action == "check":
        rep = fdm_check(M) if isinstance(M, FilteredDieudonneModule) else dm_check(M)
        return _verdict({"module": M.to_json(), "check": rep}, rep["all_pass"])
    if args.action == "dual":
        D = M.module if isinstance(M, FilteredDieudonneModule) else M
        Dv = dual(D)
        back = dual(Dv)
        return _verdict({"dual": Dv.to_json(), "involution": mx.equal(back.phi, D.phi)}, mx.equal(back.phi, D.phi))
    raise InputError(f"unknown dm action {args.action!r}")


def cmd_ext(args):
    if args.group is None:
        return _run_suites(args, ["ext"])
    try:
        orders = tuple(int(x) for x in args.group.split(","))
    except ValueError as exc:
        raise InputError(f"--group must be comma-separated integers, got {args.group!r}") from exc
    G = FiniteAbelianGroup(orders)
    h0, h1 = ext_groups(G, args.coeff)
    return _verdict({"group": list(orders), "coeff": args.coeff, "H0": h0, "H1": h1}, True)


def cmd_suite(args):
    names = args.names or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InputError(f"unknown suites {unknown}; choose from {sorted(SUITES)}")
    return _run_suites(args, names)


def _run_suites(args, names):
    return run_suites(_config(args), names)


COMMANDS = {
    "witt": cmd_witt,
    "delta": cmd_delta,
    "qlog": cmd_qlog,
    "envelope": cmd_envelope,
    "window": cmd_window,
    "bk": cmd_bk,
    "dm": cmd_dm,
    "ext": cmd_ext,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="prime (default: both 2 and 3 for suites)")
    common.add_argument("--N", type=int, default=6, help="p-adic precision")
    common.add_argument("--M", type=int, default=8, help="u-truncation")
    common.add_argument("--Q", type=int, default=16, help="(q_s - 1)-truncation")
    common.add_argument("--depth", type=int, default=0, help="q-root depth s (envelope: number of generators K)")
    common.add_argument("--seed", type=int, default=None, help="suite seed (fallback: PRISMKIT_SEED, then 0)")
    common.add_argument("--samples", type=int, default=None, help="override every sample count")
    common.add_argument("--in", dest="input", default=None, help="JSON input file, or - for stdin")
    common.add_argument("--human", action="store_true", help="render a table instead of JSON")

    parser = argparse.ArgumentParser(prog="prismkit", description="Prismatic Dieudonne theory toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("witt", parents=[common], help="Witt structure polynomials and ghost checks")
    w.add_argument("action", nargs="?", choices=["polys", "check"], default="check")
    w.add_argument("--len", type=int, default=3)

    d = sub.add_parser("delta", parents=[common], help="delta-ring law checks")
    d.add_argument("action", nargs="?", choices=["check"], default="check")
    d.add_argument("--ring", default=None, help="prism JSON, e.g. {\"kind\":\"bk\",\"ring\":{...}}")

    q = sub.add_parser("qlog", parents=[common], help="q-logarithm with convergence certificate")
    q.add_argument("--x", default=None, help="element JSON (or an integer)")
    q.add_argument("--terms", type=int, default=None)

    e = sub.add_parser("envelope", parents=[common], help="envelope delta-table and nilpotence trace")
    e.add_argument("--prism", default=None)
    e.add_argument("--x", default=None)
    e.add_argument("--certify", type=int, default=None)

    win = sub.add_parser("window", parents=[common], help="windows over frames")
    win.add_argument("action", nargs="?", choices=["check", "normal", "to-bk", "lift", "suite"], default="suite")

    b = sub.add_parser("bk", parents=[common], help="Breuil-Kisin module to window round trip")
    b.add_argument("action", nargs="?", choices=["check"], default="check")

    dm = sub.add_parser("dm", parents=[common], help="prismatic Dieudonne modules")
    dm.add_argument("action", nargs="?", choices=["check", "dual", "cokernel", "standard", "suite"], default="suite")
    dm.add_argument("--kind", default="etale", choices=["etale", "multiplicative", "qpzp_filtered", "mu_filtered"])
    dm.add_argument("--rank", type=int, default=1)
    dm.add_argument("--prism", default=None)

    x = sub.add_parser("ext", parents=[common], help="Ext^0 and Ext^1 from the low-degree complex")
    x.add_argument("--group", default=None, help="cyclic orders, e.g. 2,2")
    x.add_argument("--coeff", type=int, default=2)

    s = sub.add_parser("suite", parents=[common], help="run property suites")
    s.add_argument("names", nargs="*", help=f"subset of {sorted(SUITES)}")
    return parser


def render_human(report: dict) -> str:
    if "checks" in report:
        width = max((len(c["id"]) for c in report["checks"]), default=10)
        lines = [f"{'check':<{width}}  verdict"]
        for c in report["checks"]:
            extra = f"  ({c['passed']}/{c['samples']})" if "samples" in c else ""
            lines.append(f"{c['id']:<{width}}  {'PASS' if c['pass'] else 'FAIL'}{extra}")
        s = report["summary"]
        lines.append(f"{s['passed']}/{s['total']} passed")
        return "\n".join(lines)
    lines = []
    for key in sorted(report):
        if key == "schema":
            continue
        val = report[key]
        text = val if isinstance(val, (str, int, bool)) else json.dumps(val, sort_keys=True)
        lines.append(f"{key}: {text}")
    return "\n".join(lines)


def run(argv=None) -> tuple[int, dict]:
    """Parse argv, execute, and return (exit code, report)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = EXIT_INPUT if exc.code else EXIT_OK
        return code, {"schema": SCHEMA, "error": "usage", "pass": code == EXIT_OK}
    try:
        report = COMMANDS[args.command](args)
    except InputError as exc:
        return EXIT_INPUT, {"schema": SCHEMA, "error": "input", "message": str(exc)}
    except PRECISION_ERRORS as exc:
        return EXIT_PRECISION, {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}
    except (PrismkitError, KeyError, TypeError, ValueError) as exc:
        return EXIT_INPUT, {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}
    report["schema"] = SCHEMA
    report["command"] = args.command
    if "summary" in report:
        ok = report["summary"]["failed"] == 0
    else:
        ok = report.get("pass", True)
    return (EXIT_OK if ok else EXIT_VIOLATION), report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1)


def main(argv=None) -> int:
    code, report = run(argv)
    args_human = argv is not None and "--human" in argv or argv is None and "--human" in sys.argv[1:]
    if args_human:
        print(render_human(report))
    else:
        print(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
