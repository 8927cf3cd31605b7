"""Command-line driver: ``jaynerogers <command> ...``."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import machines
from .io import (FormatError, load, load_machine, parse_d2, parse_enumeration, parse_point, parse_pw,
                 parse_tree, parse_word)
from .jayne_rogers import delta2_to_piecewise, eval_delta2, eval_piecewise, piecewise_to_delta2, value_of
from .machines import AdviceSpace, Halted, Reset, LeftmostApproximation, Ndtm, SurvivingTree
from .markov import CylinderEnumeration, check_l_instance, jump_approx
from .spaces import CANTOR, UNIT, Ball, BallOpen, Interval, delta2_stage_verdicts
from .streams import BINARY, StreamName

OK, EXHAUSTED, MALFORMED = 0, 1, 2


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, tuple):
        return "".join(map(str, x))
    return str(x)


def _symbols(text: str) -> tuple:
    """A tape word: comma separated, or one symbol per character."""
    text = text.strip()
    if not text:
        return ()
    return tuple(text.split(",")) if "," in text else tuple(text)


def _fuels(cap: int, start: int = 16):
    """16, 32, 64, ... up to and including ``cap``."""
    f = min(start, cap)
    while True:
        yield f
        if f >= cap:
            return
        f = min(2 * f, cap)


def _approximations(out, count: int) -> list:
    got = []
    for s in range(count):
        v = value_of(out, s)
        if v is None:
            break
        got.append(v)
    return got


def _report_revising(out, args, count: int) -> int:
    """Print the approximations of a revising evaluation; exit 1 when fewer
    than ``count`` are settled."""
    vals = _approximations(out, count)
    if args.trace:
        sys.stdout.write(out.export())
        for t, ev in out.trace:
            print(f"stage {t}: {'reset' if isinstance(ev, Reset) else 'emit'}")
    print(f"resets: {out.resets}")
    for s, v in enumerate(vals):
        print(f"approx {s}: {_fmt(v)}")
    if len(vals) < count or out.exhausted:
        print("not converged within fuel", file=sys.stderr)
        return EXHAUSTED
    return OK


# -- commands --------------------------------------------------------------------------

def cmd_run(args) -> int:
    m = load_machine(args.machine)
    res = m.run(_symbols(args.input), _symbols(args.advice), args.fuel)
    if args.trace:
        for t in range(args.fuel + 1):
            r = m.run(_symbols(args.input), _symbols(args.advice), t)
            print(f"stage {t}: " + ("halt" if isinstance(r, Halted) else _fmt(r.output)))
    if isinstance(res, Halted):
        print(f"halted at step {res.step}")
    else:
        print(f"output: {_fmt(res.output)}")
    return OK


def _ndtm(args) -> Ndtm:
    if args.builtin == "first-one":
        return machines.first_one_ndtm()
    if args.builtin == "wkl":
        return machines.wkl_machine()
    if not args.machine:
        raise FormatError("give --machine or --builtin")
    space = {"nat": AdviceSpace.NAT, "cantor": AdviceSpace.CANTOR}[args.advice_space]
    return Ndtm(load_machine(args.machine), space, args.machine)


def cmd_ndtm(args) -> int:
    n = _ndtm(args)
    inp = StreamName.finite(_symbols(args.input))
    if n.advice is AdviceSpace.NAT:
        out = machines.execute_nat_advice(n, inp, args.fuel)
        if args.trace:
            sys.stdout.write(out.export())
        print(f"advice: {out.candidate}")
        print(f"resets: {out.resets}")
        print(f"output: {_fmt(out.current[: args.depth])}")
        return EXHAUSTED if out.exhausted else OK
    approx = LeftmostApproximation(SurvivingTree(n, inp, (0, 1), args.depth))
    if args.trace:
        sys.stdout.write(machines.format_trace(approx.records(range(args.fuel + 1))))
    got = approx.output(args.fuel)
    if got is None:
        print("no surviving advice", file=sys.stderr)
        return EXHAUSTED
    print(f"output: {_fmt(got)}")
    return OK


def cmd_wkl(args) -> int:
    sched = load(args.tree, parse_tree)
    cells = sum(len(ws) for ws in sched.values())
    inp = machines.schedule_input(sched)
    tree = SurvivingTree(machines.wkl_machine(), inp, (0, 1), cells + args.depth)
    approx = LeftmostApproximation(tree)
    if args.trace:
        for t in range(args.fuel + 1):
            g = approx.output(t)
            print(f"stage {t}: " + ("none" if g is None else _fmt(g[: args.depth])))
    got = approx.output(args.fuel)
    if got is None or len(got) < args.depth:
        print("no path found within fuel", file=sys.stderr)
        return EXHAUSTED
    print(_fmt(got[: args.depth]))
    return OK


def _revising(run, args):
    """Double the fuel until ``--depth`` approximations are out and the
    last half of the run saw no reset."""
    out = None
    for fuel in _fuels(args.fuel):
        out = run(fuel)
        if len(_approximations(out, args.depth)) >= args.depth and not out.exhausted:
            break
    return out


def cmd_eval_d2(args) -> int:
    f = load(args.fn, parse_d2)
    x = parse_point(args.point)
    out = _revising(lambda fuel: eval_delta2(f, x, fuel), args)
    return _report_revising(out, args, args.depth)


def cmd_eval_pw(args) -> int:
    g = load(args.fn, parse_pw)
    x = parse_point(args.point)
    out = _revising(lambda fuel: eval_piecewise(g, x, fuel), args)
    return _report_revising(out, args, args.depth)


def cmd_d2_to_pw(args) -> int:
    f = load(args.fn, parse_d2)
    g = delta2_to_piecewise(f)
    if args.point is None:
        for i in range(args.pieces):
            print(f"piece {i}: {g.piece(i).label}")
        return OK
    x = parse_point(args.point)
    out = _revising(lambda fuel: eval_piecewise(g, x, fuel), args)
    return _report_revising(out, args, args.depth)


def cmd_pw_to_d2(args) -> int:
    g = load(args.fn, parse_pw)
    f = piecewise_to_delta2(g)
    x = parse_point(args.point)
    if args.open is None:
        out = _revising(lambda fuel: eval_delta2(f, x, fuel), args)
        return _report_revising(out, args, args.depth)
    try:
        iv = Interval.parse(args.open)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    mid, rad = (iv.lo + iv.hi) / 2, (iv.hi - iv.lo) / 2
    D = f.inverse(BallOpen.of(UNIT, [Ball(mid, rad)], args.open))
    bits = delta2_stage_verdicts(D, x, min(args.fuel, 4 * args.depth))
    if args.trace:
        for t, b in enumerate(bits):
            print(f"stage {t}: {b}")
    print(f"verdict: {bits[-1]}")
    return OK


def _q_stream(text: str) -> StreamName:
    x = parse_point(text)
    if x.space != CANTOR:
        raise FormatError("jump needs a binary literal (suffix b)")
    return StreamName(lambda fuel: x.balls(fuel)[-1].center[:fuel], BINARY)


def cmd_jump(args) -> int:
    p = _q_stream(args.point)
    enum = load(args.enum, parse_enumeration) if args.enum else CylinderEnumeration()
    if args.trace:
        for t in range(args.fuel + 1):
            print(f"stage {t}: " + "".join(str(jump_approx(p, enum, i, t)) for i in range(args.depth)))
    print("".join(str(jump_approx(p, enum, i, args.fuel)) for i in range(args.depth)))
    return OK


def cmd_check_l(args) -> int:
    q = _q_stream(args.point)
    enum = load(args.enum, parse_enumeration) if args.enum else CylinderEnumeration()

    def parse_ps(text, source):
        out = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                out.append(StreamName.eventually_periodic(parse_word(line), (0,), BINARY))
            except ValueError as exc:
                raise FormatError(str(exc), lineno, source) from None
        return out

    ps = load(args.ps, parse_ps)
    rep = check_l_instance(ps, q, enum, args.depth)
    if args.trace:
        for pos in rep.positions:
            print(f"position {pos['n']}: limit {pos['limit']} stable {int(pos['stable'])} "
                  f"jump {pos['jump']} decided {int(pos['decided'])}")
    print(f"counterexamples: {' '.join(map(str, rep.counterexamples)) or 'none'}")
    print(f"unstable: {' '.join(map(str, rep.unstable)) or 'none'}")
    return OK if rep.ok else EXHAUSTED


def cmd_selftest(args) -> int:
    from .selftest import run_selftest
    return run_selftest(seed=args.seed, probes=args.probes, verbose=args.trace)


# -- argument parsing --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jaynerogers", description="Finitely revising computation toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, fuel=1000, depth=10, help=""):
        p = sub.add_parser(name, help=help)
        p.add_argument("--fuel", type=int, default=fuel)
        p.add_argument("--depth", type=int, default=depth)
        p.add_argument("--trace", action="store_true")
        p.set_defaults(func=fn)
        return p

    p = add("run", cmd_run, fuel=100, help="run a machine description on a finite input")
    p.add_argument("--machine", required=True)
    p.add_argument("--input", default="")
    p.add_argument("--advice", default="")

    p = add("ndtm", cmd_ndtm, fuel=100, help="run a nondeterministic machine")
    p.add_argument("--machine")
    p.add_argument("--builtin", choices=["first-one", "wkl"])
    p.add_argument("--advice-space", choices=["nat", "cantor"], default="nat")
    p.add_argument("--input", default="")

    p = add("wkl", cmd_wkl, help="leftmost path through a co-c.e. tree")
    p.add_argument("--tree", required=True)

    for name, fn, what in (("eval-d2", cmd_eval_d2, "evaluate a two-sided function name"),
                           ("eval-pw", cmd_eval_pw, "evaluate a piecewise name")):
        p = add(name, fn, fuel=128, help=what)
        p.add_argument("--fn", required=True)
        p.add_argument("--point", required=True)

    p = add("d2-to-pw", cmd_d2_to_pw, fuel=128, help="translate to a piecewise name")
    p.add_argument("--fn", required=True)
    p.add_argument("--point")
    p.add_argument("--pieces", type=int, default=4)

    p = add("pw-to-d2", cmd_pw_to_d2, fuel=128, help="translate to a two-sided name")
    p.add_argument("--fn", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--open", help="an open interval such as (1/2,3/2); prints the preimage verdict")

    p = add("jump", cmd_jump, fuel=32, depth=16, help="stage approximation of the jump")
    p.add_argument("--point", required=True)
    p.add_argument("--enum")

    p = add("check-l", cmd_check_l, fuel=32, depth=16, help="evidence for lim p_i = J(q)")
    p.add_argument("--point", required=True, help="q as a binary literal")
    p.add_argument("--ps", required=True, help="file with one binary word p_i per line")
    p.add_argument("--enum")

    p = add("selftest", cmd_selftest, help="run the invariant probes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--probes", type=int, default=200)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return MALFORMED if exc.code else OK
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED


cli_dispatch = main


if __name__ == "__main__":
    sys.exit(main())
