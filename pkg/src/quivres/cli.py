"""Command-line front end.

Every subcommand prints either a short text report or (``--format json``) a
deterministic JSON document. Exit status: 0 success, 1 domain error, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .catalog import NAMES, STAR5_GOOD, get_example, star
from .classifier import (
    SignFunction,
    census,
    check_multiset_certificate,
    extend_sign_function,
    fraction_str,
    monte_carlo_nonprojective,
    multiset_certificate_search,
    realizable,
    verify_feasibility_result,
)
from .errors import QuiverError, ShapeMismatch
from .leaves import local_quiver, phi_for
from .opensets import (
    SupportPattern,
    common_semistable_stabilities,
    dual_family,
    good_set_witness_patterns,
    in_good_U,
    in_U_s,
    is_semistable,
    is_stable,
    normalize_antichain,
    reachable_set,
    u_s_path_form,
    uns_characterization,
    upward_closure,
)
from .properness import TropicalRep, integral_point_search
from .quiver import double, instance_from_json

BIG = 2 ** 53


def _plain(obj):
    """Convert to JSON-safe values: Fractions as "p/q", huge ints as strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= BIG else obj
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, float):
        return "inf" if obj == float("inf") else obj
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [_plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class Report:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []
        self.data: dict = {}

    def text(self, line: str = ""):
        self.lines.append(line)

    def emit(self, out):
        if self.fmt == "json":
            doc = {"version": __version__, **_plain(self.data)}
            out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


def _instance(args):
    if getattr(args, "input", None):
        doc = json.loads(Path(args.input).read_text())
        return instance_from_json(doc, name=Path(args.input).stem), {}
    ex = get_example(args.example)
    return ex.instance, ex.signs


def _vec_str(v):
    return "(" + ",".join(str(c) for c in v) + ")"


def _phi_rows(phi):
    return [{"index": i, "label": phi.label(i), "beta": list(b), "m": m}
            for i, (b, m) in enumerate(zip(phi.betas, phi.m))]


def _parse_sets(items, n):
    sets = []
    for it in items or []:
        it = it.strip()
        sets.append([int(c) for c in it.split(",")] if "," in it else [int(c) for c in it])
    return normalize_antichain(sets, n)


def _signs(text, phi):
    s = SignFunction.from_string(text)
    if len(s) != len(phi):
        raise QuiverError(f"sign string has length {len(s)} but |Phi| = {len(phi)}")
    return s


def _result_text(rep, r, ok):
    if r.feasible:
        rep.text(f"verdict: projective (feasible), witness theta' = {_vec_str(r.witness)}")
    else:
        lam = ", ".join(f"{v}" for v in r.lam)
        rep.text(f"verdict: nonprojective (infeasible), lambda = [{lam}], mu = {fraction_str(r.mu)}")
    rep.text(f"independently verified: {ok}")


# ------------------------------------------------------------------ subcommands


def cmd_catalog(args, rep):
    rows = []
    for name in NAMES:
        ex = get_example(name)
        inst = ex.instance
        phi = phi_for(inst)
        rows.append({"name": name, "description": ex.description, "vertices": list(inst.quiver.vertices),
                     "arrows": len(inst.quiver.arrows), "alpha": list(inst.alpha),
                     "theta": list(inst.theta), "phi_size": len(phi)})
        rep.text(f"{name:12s} |Q0|={inst.quiver.n:2d} |Q1|={len(inst.quiver.arrows):2d} "
                 f"|Phi|={len(phi):2d}  {ex.description}")
    rep.text("starN_M      general star with N spokes and theta = (M, -1, ..., -1, N-M)")
    rep.data = {"examples": rows}


def cmd_leaves(args, rep):
    inst, _ = _instance(args)
    phi = phi_for(inst, require_m_gt_2=not args.include_m2)
    rows = _phi_rows(phi)
    rep.text(f"{inst.name}: |Phi| = {len(phi)}, locally projective resolutions = {2 ** len(phi)}")
    rep.text("vertices: " + " ".join(inst.quiver.vertices))
    for row, beta in zip(rows, phi.betas):
        rest = tuple(a - b for a, b in zip(phi.alpha, beta))
        lq = local_quiver(inst.quiver, [(beta, 1), (rest, 1)])
        row["local_quiver"] = {"loops": list(lq.loops), "arrows": lq.arrows[0][1]}
        rep.text(f"  [{row['index']}] {row['label']:14s} beta={_vec_str(beta)} m={row['m']} "
                 f"local quiver: loops {lq.loops}, {lq.arrows[0][1]} arrows between summands")
    rep.data = {"example": inst.name, "vertices": list(inst.quiver.vertices), "phi": rows,
                "count": 2 ** len(phi)}


def cmd_census(args, rep):
    inst, _ = _instance(args)
    phi = phi_for(inst)
    res = census(phi, cap=args.cap, jobs=args.jobs)
    n = len(phi)
    rep.text(f"{inst.name}: total {res.total}, nonprojective {res.nonprojective}, "
             f"projective {res.projective}  ({res.seconds:.2f} s)")
    for i, lbl in enumerate(phi.label(k) for k in range(n)):
        rep.text(f"  Phi[{i}] = {lbl}")
    rep.text("nonprojective sign functions:")
    for m in res.nonprojective_masks():
        rep.text("  " + str(SignFunction.from_mask(n, m)))
    rep.data = {
        "example": inst.name, "phi": _phi_rows(phi),
        "total": res.total, "projective": res.projective, "nonprojective": res.nonprojective,
        "results": [{"s": str(SignFunction.from_mask(n, m)), **r.to_json()}
                    for m, r in enumerate(res.results)],
    }


def cmd_check_s(args, rep):
    inst, _ = _instance(args)
    phi = phi_for(inst)
    s = _signs(args.s, phi)
    r = realizable(phi, s)
    ok = verify_feasibility_result(phi, s, r)
    rep.text(f"{inst.name}: s = {s}")
    for i in range(len(phi)):
        rep.text(f"  Phi[{i}] = {phi.label(i):14s} s = {'+' if s.signs[i] > 0 else '-'}")
    _result_text(rep, r, ok)
    rep.data = {"example": inst.name, "phi": _phi_rows(phi), "s": str(s), "verified": ok,
                **r.to_json()}


def cmd_certificate(args, rep):
    inst, _ = _instance(args)
    phi = phi_for(inst)
    s = _signs(args.s, phi)
    c = multiset_certificate_search(phi, s, args.k_max)
    rep.data = {"example": inst.name, "s": str(s), "k_max": args.k_max}
    if c is None:
        rep.text(f"no multiset certificate with k <= {args.k_max} (this proves nothing)")
        rep.data["certificate"] = None
        return
    plus = " + ".join(phi.label(i) for i in c.plus)
    minus = " + ".join(phi.label(i) for i in c.minus)
    ok = check_multiset_certificate(phi, s, c)
    rep.text(f"k = {c.k}: {plus} = {minus}  (identity verified: {ok})")
    rep.data["certificate"] = {"k": c.k, "plus": [phi.label(i) for i in c.plus],
                               "minus": [phi.label(i) for i in c.minus], "verified": ok}


def cmd_extend(args, rep):
    inst, _ = _instance(args)
    phi = phi_for(inst)
    target = get_example(args.target).instance
    phi2 = phi_for(target)
    s = _signs(args.s, phi)
    s2 = extend_sign_function(phi, phi2, s, 1 if args.default == "+" else -1)
    r = realizable(phi2, s2)
    ok = verify_feasibility_result(phi2, s2, r)
    rep.text(f"{inst.name} -> {target.name}: s' = {s2}")
    _result_text(rep, r, ok)
    rep.data = {"source": inst.name, "target": target.name, "s": str(s), "s_extended": str(s2),
                "phi_target": _phi_rows(phi2), "verified": ok, **r.to_json()}


def cmd_mc(args, rep):
    res = monte_carlo_nonprojective(args.n, args.m, args.trials, args.seed, args.method)
    rep.text(f"n={args.n} m={args.m} method={args.method} trials={res.trials}: "
             f"nonprojective fraction {fraction_str(res.estimate)} "
             f"= {float(res.estimate):.4f} +- {res.stderr:.4f}")
    rep.data = {"n": args.n, "m": args.m, "method": args.method, "seed": args.seed,
                "trials": res.trials, "hits": res.hits, "estimate": res.estimate,
                "stderr": f"{res.stderr:.6g}"}


def cmd_usets(args, rep):
    a = _parse_sets(args.set, args.n)
    d1 = dual_family(a, "definition")
    d2 = dual_family(a, "complement")
    back = dual_family(d1)
    rep.text(f"I   = {a}  (upward closure: {len(upward_closure(a))} sets)")
    rep.text(f"J   = {d1}")
    rep.text(f"definition and complement formula agree: {d1 == d2}")
    rep.text(f"dual of J equals I: {back == a}")
    rep.data = {"n": args.n, "I": a.as_sets(), "J": d1.as_sets(),
                "closure_size": len(upward_closure(a)), "methods_agree": d1 == d2,
                "involution": back == a}


def _pattern_from_args(args, dq):
    if args.mask is not None:
        m = int(args.mask, 0)
        if m >> len(dq.arrows):
            raise QuiverError("mask has bits beyond the arrow count")
        return SupportPattern(dq, m)
    ids = [t for t in (args.arrows or "").split(",") if t]
    return SupportPattern.from_arrows(dq, ids)


def cmd_pattern(args, rep):
    inst, _ = _instance(args)
    dq = double(inst.quiver)
    p = _pattern_from_args(args, dq)
    x, y = inst.x, inst.y
    data = {"example": inst.name, "mask": p.mask, "nonzero": p.nonzero_ids()}
    semi = is_semistable(p, inst.theta, inst.alpha)
    data["semistable"] = semi
    data["stable"] = is_stable(p, inst.theta, inst.alpha)
    rep.text(f"{inst.name}: nonzero arrows {', '.join(p.nonzero_ids()) or '(none)'}")
    rep.text(f"semistable: {semi}, stable: {data['stable']}")
    for h in (x, y):
        if h is not None:
            r = sorted(reachable_set(p, h), key=inst.quiver.index)
            data[f"reach_{h}"] = r
            rep.text(f"reachable from {h}: {{{', '.join(r)}}}")
    if y is not None:
        try:
            u = uns_characterization(p, inst.theta, x, y)
            data["uns"] = {"spokes": list(u.uns_spokes), "x": u.uns_x, "y": u.uns_y,
                           "unstable": u.unstable}
            rep.text(f"Uns: spokes {list(u.uns_spokes)}, hub x {u.uns_x}, hub y {u.uns_y} "
                     f"-> unstable {u.unstable}")
        except ShapeMismatch as e:
            rep.text(f"Uns characterization not applicable: {e}")
        if args.set:
            n = inst.quiver.n - 2
            I = _parse_sets(args.set, n)
            J = dual_family(I)
            g = in_good_U(p, I, J, x, y)
            data["in_good_U"] = g
            rep.text(f"in U for I = {I}, J = {J}: {g}")
    if args.s:
        phi = phi_for(inst)
        s = _signs(args.s, phi)
        a = in_U_s(p, inst.theta, phi, s)
        data["in_U_s"] = a
        rep.text(f"in U_s (arrow form): {a}")
        if y is not None:
            b = u_s_path_form(p, phi, s, x, y)
            data["in_U_s_path"] = b
            rep.text(f"in U_s (path form):  {b}")
    rep.data = data


def cmd_theta_zero(args, rep):
    n = args.n
    inst = star(n, 1)
    dq = double(inst.quiver)
    I = _parse_sets(args.set, n) if args.set else normalize_antichain(STAR5_GOOD, 5)
    J = dual_family(I)
    pats = good_set_witness_patterns(dq, I, J)
    if args.only_upper:
        pats = [(name, p) for name, p in pats if name.startswith("V^")]
    res = common_semistable_stabilities([p for _, p in pats], inst.alpha)
    rep.text(f"star with {I.n} spokes, I = {I}, J = {J}")
    rep.text(f"patterns: {', '.join(name for name, _ in pats)}")
    rep.text(f"intersection of orbit cones is {{0}}: {res.is_zero_only}")
    if res.witness:
        rep.text(f"nonzero theta in the intersection: {_vec_str(res.witness)}")
    rep.data = {"I": I.as_sets(), "J": J.as_sets(), "patterns": [name for name, _ in pats],
                "normals": [list(v) for v in res.cone.normals], "is_zero_only": res.is_zero_only,
                "witness": list(res.witness) if res.witness else None}


def cmd_properness(args, rep):
    inst, _ = _instance(args)
    dq = double(inst.quiver)
    raw = args.vals
    doc = json.loads(Path(raw).read_text() if Path(raw).is_file() else raw)
    r = TropicalRep.from_mapping(dq, doc)
    n = inst.quiver.n - 2
    I = _parse_sets(args.set, n) if args.set else normalize_antichain(STAR5_GOOD, 5)
    J = dual_family(I)
    res = integral_point_search(r, I, J, inst.x, inst.y)
    order = inst.quiver.index
    rep.text(f"I = {I}, J = {J}")
    for k, st in enumerate(res.trace):
        rep.text(f"  step {k}: phase {st['phase']:6s} set {{{', '.join(st['set'])}}} "
                 f"m = {st['m']}, j = {st['j']}")
    rep.text(f"gauge: {dict(zip(inst.quiver.vertices, res.gauge))}")
    rep.text(f"I' = {sorted(res.I_prime, key=order)}, J' = {sorted(res.J_prime, key=order)}")
    rep.text(f"success: {res.success}")
    rep.data = {"gauge": dict(zip(inst.quiver.vertices, res.gauge)),
                "I_prime": sorted(res.I_prime, key=order), "J_prime": sorted(res.J_prime, key=order),
                "success": res.success, "trace": res.trace, "final": res.rep.as_mapping()}


# ----------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quivres", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, instance=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if instance:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--example", default="star4", help="built-in example name")
            g.add_argument("--input", help="JSON quiver description")
        sp.set_defaults(func=func)
        return sp

    add("catalog", cmd_catalog, "list built-in examples", instance=False)
    sp = add("leaves", cmd_leaves, "decomposition classes, m_beta and local quivers")
    sp.add_argument("--include-m2", action="store_true", help="keep classes with m_beta = 2")
    sp = add("census", cmd_census, "classify every sign function")
    sp.add_argument("--cap", type=int, default=24)
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sp = add("check-s", cmd_check_s, "decide one sign function")
    sp.add_argument("--s", required=True, help="+/- string in Phi order")
    sp = add("certificate", cmd_certificate, "search multiset certificates")
    sp.add_argument("--s", required=True)
    sp.add_argument("--k-max", type=int, default=4)
    sp = add("extend", cmd_extend, "extend a sign function to a larger Phi")
    sp.add_argument("--target", required=True, help="built-in example with the larger Phi")
    sp.add_argument("--s", required=True)
    sp.add_argument("--default", choices=("+", "-"), default="-")
    sp = add("mc", cmd_mc, "Monte Carlo estimate on the star family", instance=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--method", choices=("lp", "k2-criterion"), default="lp")
    sp = add("usets", cmd_usets, "dual family of an antichain", instance=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--set", action="append", help="member set, e.g. 12 or 1,2 (repeatable)")
    sp = add("pattern", cmd_pattern, "membership queries for one support pattern")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--mask", help="bitmask over double-quiver arrows (base arrows first)")
    g.add_argument("--arrows", help="comma-separated ids of nonzero arrows")
    sp.set_defaults(example="star5")
    sp.add_argument("--s", help="sign function for U_s queries")
    sp.add_argument("--set", action="append", help="good-set member for U queries")
    sp = add("theta-zero", cmd_theta_zero, "common semistable stabilities of witness patterns",
             instance=False)
    sp.add_argument("--n", type=int, default=5)
    sp.add_argument("--set", action="append")
    sp.add_argument("--only-upper", action="store_true", help="use only the V^I patterns")
    sp = add("properness", cmd_properness, "integral point search on a tropical rep")
    sp.set_defaults(example="star5")
    sp.add_argument("--vals", required=True, help="JSON object arrow id -> valuation, or a file")
    sp.add_argument("--set", action="append")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    rep = Report(args.format)
    try:
        args.func(args, rep)
    except (QuiverError, ValueError, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return 1
    rep.emit(out)
    return 0


def main() -> None:
    sys.exit(run())
