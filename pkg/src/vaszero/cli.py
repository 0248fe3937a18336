"""``vaszero`` command line: text formats, dispatch and rendering."""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from dataclasses import dataclass

from .budget import DEFAULT_BUDGET, Budget
from .closed_sets import format_basis
from .errors import BudgetExhausted, ParseError, ValidationError, VaszeroError
from .filtered_cover import filtered_cover_basis, filtered_member, translate_P_to_f
from .karp_miller import km_cover, km_tree
from .model import (
    BuchiAutomaton,
    LabeledVassz,
    Vas,
    Vassz,
    Vasz,
    encode_vassz_as_vasz,
    normalize,
)
from .omega import OMEGA, fmt_vec, parse_vec
from .omega_check import mc_omega_regular, repeated_state
from .oracles import UNKNOWN, YES, lim_member, reach_decide
from .vasz_analysis import algorithm1_tree, vasz_cover

log = logging.getLogger(__name__)

KINDS = ("vas", "vas0", "vass", "vass0")


@dataclass
class NetFile:
    kind: str
    system: object
    labeled: LabeledVassz | None = None


def _tokens(text: str):
    for ln, raw in enumerate(text.splitlines(), start=1):
        # a token starting with '#' opens a comment
        line = re.sub(r"(^|\s)#.*$", "", raw)
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if toks:
            yield ln, toks


def _vector(tok, ln, dim, allow_omega=True, what="vector"):
    text, col = tok
    try:
        v = parse_vec(text)
    except ParseError as e:
        raise ParseError(f"line {ln} col {col}: {e}") from None
    if not allow_omega and any(a == OMEGA for a in v):
        raise ValidationError(f"line {ln} col {col}: omega is not allowed in a {what}")
    if dim is not None and len(v) != dim:
        raise ValidationError(f"line {ln} col {col}: {what} has dimension {len(v)}, expected {dim}")
    return v


def parse_net(text: str) -> NetFile:
    kind = dim = None
    states: list = []
    init = init_state = None
    ztest = None
    actions: dict = {}
    trans: list = []
    labels: dict = {}
    seen_states = False

    def need(cond, ln, col, msg, exc=ValidationError):
        if not cond:
            raise exc(f"line {ln} col {col}: {msg}")

    for ln, toks in _tokens(text):
        head, col = toks[0]
        args = toks[1:]
        if head == "system":
            need(kind is None, ln, col, "duplicate system line")
            need(len(args) == 1 and args[0][0] in KINDS, ln, col,
                 "expected: system vas|vas0|vass|vass0", ParseError)
            kind = args[0][0]
            continue
        need(kind is not None, ln, col, "the first line must be 'system ...'", ParseError)
        has_states = kind in ("vass", "vass0")
        if head == "dim":
            need(dim is None, ln, col, "duplicate dim line")
            need(len(args) == 1 and args[0][0].isdigit() and int(args[0][0]) >= 1, ln, col,
                 "expected: dim <positive integer>", ParseError)
            dim = int(args[0][0])
        elif head == "states":
            need(has_states, ln, col, f"'states' is not allowed for system {kind}")
            need(not seen_states, ln, col, "duplicate states line")
            need(len(args) >= 1, ln, col, "expected at least one state", ParseError)
            names = [a for a, _ in args]
            need(len(set(names)) == len(names), ln, col, "duplicate state name")
            states = names
            seen_states = True
        elif head == "init":
            need(init is None, ln, col, "duplicate init line")
            need(dim is not None, ln, col, "'dim' must come before 'init'")
            if has_states:
                need(len(args) == 2, ln, col, "expected: init <state> <vector>", ParseError)
                init_state = args[0][0]
                need(init_state in states, ln, args[0][1], f"undeclared state {init_state!r}")
                init = _vector(args[1], ln, dim, what="initial vector")
            else:
                need(len(args) == 1, ln, col, "expected: init <vector>", ParseError)
                init = _vector(args[0], ln, dim, what="initial vector")
            need(all(a == OMEGA or a >= 0 for a in init), ln, col, "initial vector must be nonnegative")
        elif head in ("zerotest", "action"):
            need(dim is not None, ln, col, f"'dim' must come before '{head}'")
            need(len(args) == 2, ln, col, f"expected: {head} <name> <vector>", ParseError)
            name, ncol = args[0]
            need(name not in actions and name != ztest, ln, ncol, f"duplicate action {name!r}")
            vecv = _vector(args[1], ln, dim, allow_omega=False, what="displacement")
            if head == "zerotest":
                need(kind in ("vas0", "vass0"), ln, col, f"'zerotest' is not allowed for system {kind}")
                need(ztest is None, ln, col, "duplicate zerotest")
                ztest = (name, vecv)
            else:
                actions[name] = vecv
        elif head in ("trans", "label"):
            need(has_states, ln, col, f"'{head}' is not allowed for system {kind}")
            n = 3 if head == "trans" else 4
            need(len(args) == n, ln, col,
                 "expected: trans <p> <action> <q>" if n == 3 else "expected: label <p> <action> <q> <symbol>",
                 ParseError)
            (p, pc), (a, ac), (q, qc) = args[:3]
            need(p in states, ln, pc, f"undeclared state {p!r}")
            need(q in states, ln, qc, f"undeclared state {q!r}")
            need(a in actions or (ztest is not None and a == ztest[0]), ln, ac, f"undeclared action {a!r}")
            t = (p, a, q)
            if head == "trans":
                need(t not in trans, ln, col, "duplicate transition")
                trans.append(t)
            else:
                need(t not in labels, ln, col, "duplicate label")
                labels[t] = args[3][0]
                if t not in trans:
                    trans.append(t)
        else:
            raise ParseError(f"line {ln} col {col}: unknown directive {head!r}")

    if kind is None:
        raise ParseError("line 1 col 1: missing 'system' line")
    if dim is None:
        raise ValidationError("missing 'dim' line")
    if init is None:
        raise ValidationError("missing 'init' line")
    if kind in ("vas0", "vass0") and ztest is None:
        raise ValidationError(f"system {kind} needs exactly one zerotest line")
    if kind in ("vass", "vass0") and not states:
        raise ValidationError("missing 'states' line")
    base = Vas.make(dim, actions, init)
    counters = Vasz(base, ztest[0], ztest[1]) if ztest else base
    if kind in ("vas", "vas0"):
        return NetFile(kind, counters)
    s = Vassz(counters, tuple(states), tuple(trans), init_state)
    labeled = None
    if labels:
        missing = [t for t in trans if t not in labels]
        if missing:
            raise ValidationError(f"transition {' '.join(missing[0])} has no label")
        labeled = LabeledVassz(s, tuple(labels.items()))
    return NetFile(kind, s, labeled)


def parse_buchi(text: str) -> BuchiAutomaton:
    alphabet = states = init = None
    accept: list = []
    trans: list = []
    started = False
    for ln, toks in _tokens(text):
        head, col = toks[0]
        args = [a for a, _ in toks[1:]]
        if head == "buchi":
            started = True
            continue
        if not started:
            raise ParseError(f"line {ln} col {col}: the first line must be 'buchi'")
        if head == "alphabet":
            alphabet = tuple(args)
        elif head == "states":
            states = tuple(args)
        elif head == "init":
            if len(args) != 1:
                raise ParseError(f"line {ln} col {col}: expected: init <state>")
            init = args[0]
        elif head == "accept":
            accept += args
        elif head == "trans":
            if len(args) != 3:
                raise ParseError(f"line {ln} col {col}: expected: trans <s> <symbol> <s'>")
            trans.append(tuple(args))
        else:
            raise ParseError(f"line {ln} col {col}: unknown directive {head!r}")
    if not started:
        raise ParseError("line 1 col 1: missing 'buchi' line")
    if alphabet is None or states is None or init is None:
        raise ValidationError("automaton needs alphabet, states and init lines")
    return BuchiAutomaton(alphabet, states, init, frozenset(accept), tuple(trans))


# ----------------------------------------------------------------------------


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="elementary step limit")
    common.add_argument("--dump-tree", default=None, metavar="PATH", help="write the analysis tree")
    p = _Parser(prog="vaszero", description="Covers and verdicts for VAS with one zero test.",
                parents=[common])
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.add_argument("net")
        return sp

    verb("km", "Karp-Miller cover of a system without zero test")
    verb("cover", "cover basis")
    verb("filtered-cover", "basis of a filtered cover").add_argument("--filter", required=True)
    verb("lim-member", "membership in the limit closure").add_argument("--vector", required=True)
    sp = verb("member-refined", "membership in a refined cover")
    sp.add_argument("--positions", required=True, help="comma-separated 1-indexed positions, '-' for none")
    sp.add_argument("--vector", required=True)
    sp = verb("reach", "reachability")
    sp.add_argument("--target", required=True)
    sp.add_argument("--state", default=None)
    verb("bounded", "place boundedness").add_argument("--place", type=int, default=None)
    verb("repeated", "repeated control-state reachability").add_argument("--state", required=True)
    verb("mc", "model checking against a Buchi automaton for the negated property").add_argument(
        "--buchi", required=True)
    return p


def _budget(args) -> int:
    if args.budget is not None:
        n = args.budget
    else:
        env = os.environ.get("VASZERO_BUDGET")
        if env is None:
            n = DEFAULT_BUDGET
        else:
            try:
                n = int(env)
            except ValueError:
                raise UsageError(f"VASZERO_BUDGET must be an integer, got {env!r}") from None
    if n < 1:
        raise UsageError("budget must be at least 1")
    return n


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _word(w) -> str:
    return " ".join(w) if w else "(empty)"


def _verdict_lines(v, out):
    out.append(v.answer)
    if v.answer == YES and v.witness is not None:
        if v.candidate is not None and v.candidate.v + tuple(a for u in v.candidate.pi for a in u):
            out.append(f"witness: {v.candidate}")
        else:
            out.append(f"witness: {_word(v.witness)}")
    return 2 if v.answer == UNKNOWN else 0


def _plain(net: NetFile, verb: str):
    """A system without zero test plus its layout (None for plain VAS)."""
    if net.kind == "vas":
        return net.system, None
    if net.kind == "vass":
        return encode_vassz_as_vasz(net.system)
    raise UsageError(f"{verb} needs a system without zero test, got {net.kind}")


def _vec(text: str, dim: int, what: str):
    v = parse_vec(text)
    if len(v) != dim:
        raise ValidationError(f"{what} has dimension {len(v)}, expected {dim}")
    if any(a != OMEGA and a < 0 for a in v):
        raise ValidationError(f"{what} must be nonnegative")
    return v


def _dump(path, text):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def run(args) -> tuple[int, str]:
    budget = Budget(_budget(args))
    net = parse_net(_read(args.net))
    out: list = []
    verb = args.verb
    code = 0
    try:
        if verb == "km":
            v, layout = _plain(net, verb)
            tree = km_tree(v, budget)
            tree.layout = layout
            _dump(args.dump_tree, tree.dump())
            out.append(format_basis(km_cover(v)))
        elif verb == "cover":
            sysm = net.system
            if net.kind in ("vass", "vass0"):
                sysm, _ = encode_vassz_as_vasz(sysm)
            if isinstance(sysm, Vasz):
                if args.dump_tree:
                    target = sysm if sysm.is_normalized() else encode_vassz_as_vasz(normalize(sysm))[0]
                    _dump(args.dump_tree, algorithm1_tree(target, Budget(budget.max_steps)).dump())
                out.append(format_basis(vasz_cover(sysm, budget)))
            else:
                tree = km_tree(sysm, budget)
                _dump(args.dump_tree, tree.dump())
                out.append(format_basis(km_cover(sysm)))
        elif verb == "filtered-cover":
            v, _ = _plain(net, verb)
            f = _vec(args.filter, v.dim, "filter")
            out.append(format_basis(filtered_cover_basis(v, f, budget)))
        elif verb == "lim-member":
            v, _ = _plain(net, verb)
            code = _verdict_lines(lim_member(v, _vec(args.vector, v.dim, "vector"), budget), out)
        elif verb == "member-refined":
            v, _ = _plain(net, verb)
            x = _vec(args.vector, v.dim, "vector")
            pos = [] if args.positions.strip() in ("", "-") else [int(t) for t in args.positions.split(",")]
            f = translate_P_to_f(pos, x)
            code = _verdict_lines(filtered_member(v, f, x, budget), out)
        elif verb == "reach":
            code = _reach(net, args, budget, out)
        elif verb == "bounded":
            code = _bounded(net, args, budget, out)
        elif verb == "repeated":
            if net.kind not in ("vass", "vass0"):
                raise UsageError("repeated needs a system with control states")
            code = _verdict_lines(repeated_state(net.system, args.state, budget), out)
        elif verb == "mc":
            if net.labeled is None:
                raise UsageError("mc needs a labeled vass/vass0 system")
            v = mc_omega_regular(net.labeled, parse_buchi(_read(args.buchi)), budget)
            out.append(v.answer)
            if v.witness:
                out.append(f"witness: {_word(v.witness)}")
            code = 2 if v.answer == UNKNOWN else 0
    except BudgetExhausted:
        out.append("UNKNOWN")
        code = 2
    return code, "\n".join(out) + "\n"


def _reach(net, args, budget, out) -> int:
    if net.kind in ("vass", "vass0"):
        if args.state is None:
            raise UsageError("reach on a system with control states needs --state")
        enc, layout = encode_vassz_as_vasz(net.system)
        x = _vec(args.target, net.system.dim, "target")
        v = reach_decide(enc, layout.encode(x, args.state), budget)
        if v.answer == YES:
            out.append("YES")
            out.append(f"witness: {_word([a for _, a, _ in layout.decode_word(v.witness)])}")
            return 0
        return _verdict_lines(v, out)
    if args.state is not None:
        raise UsageError(f"--state is meaningless for system {net.kind}")
    return _verdict_lines(reach_decide(net.system, _vec(args.target, net.system.dim, "target"), budget), out)


def _bounded(net, args, budget, out) -> int:
    sysm = net.system
    d = sysm.dim
    if net.kind in ("vass", "vass0"):
        sysm, _ = encode_vassz_as_vasz(sysm)
    places = [args.place] if args.place is not None else list(range(1, d + 1))
    if any(not 1 <= p <= d for p in places):
        raise ValidationError(f"place must be in 1..{d}")
    try:
        B = vasz_cover(sysm, budget)
    except BudgetExhausted:
        for p in places:
            out.append("UNKNOWN" if args.place is not None else f"place {p}: UNKNOWN")
        return 2
    for p in places:
        word = "UNBOUNDED" if any(b[p - 1] == OMEGA for b in B.elems) else "BOUNDED"
        out.append(word if args.place is not None else f"place {p}: {word}")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("VASZERO_LOG", "WARNING"))
    try:
        args = _build_parser().parse_args(argv)
        code, text = run(args)
    except UsageError as e:
        print(f"error: usage: {e}", file=sys.stderr)
        return 1
    except (VaszeroError, OSError, ValueError) as e:
        msg = str(e).replace("\n", " ")
        print(f"error: {type(e).__name__}: {msg}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
