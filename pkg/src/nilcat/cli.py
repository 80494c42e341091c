"""Command line front end.

Every command prints canonical JSON (sorted keys, two-space indent) with a
``schema`` field.  Exit codes: 0 success, 1 a check failed, 2 bad usage or
input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import fo, serialize, suites
from .characterize import check_basis, extract, pf_basis_report, roundtrip
from .cohomology import (
    Extension,
    check_cocycle,
    check_symmetric,
    extensions_equivalent,
    find_coboundary_witness,
)
from .errors import NilcatError
from .finite import FiniteGroup
from .n2n import N2nGroup
from .pf import commutator_bilinear_map, pf_isomorphism_transport, pf_reconstruct, profile
from .qn2n import check_relations, group_to_json, induced_big_cocycle
from .rings import check_ring_axioms

SCHEMA_PREFIX = "nilcat."


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    """Raised after output has been written when a check did not pass."""


def _emit(args, payload, kind):
    payload = {"schema": f"{SCHEMA_PREFIX}{kind}/1", **payload}
    text = serialize.dumps(payload) + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return payload


# -- ring ---------------------------------------------------------------------


def cmd_ring(args):
    R = serialize.ring_arg(args.ring)
    vals = [R.from_str(v) for v in args.values]
    op = args.op
    if op == "axioms":
        rep = check_ring_axioms(R, seed=args.seed)
        _emit(args, {"ring": R.to_json(), "ok": rep.ok, "exhaustive": rep.exhaustive,
                     "checked": rep.checked, "failures": [str(f) for f in rep.failures]}, "ring")
        return 0 if rep.ok else 1
    if op == "elements":
        res = [R.to_str(x) for x in R.elements()]
    else:
        arity = {"add": 2, "sub": 2, "mul": 2, "neg": 1}[op]
        if len(vals) != arity:
            raise UsageError(f"ring {op} takes {arity} values")
        res = R.to_str(getattr(R, op)(*vals))
    _emit(args, {"ring": R.to_json(), "op": op, "result": res}, "ring")
    return 0


# -- groups ------------------------------------------------------------------------


def _group(args):
    if getattr(args, "spec", None):
        return serialize.group_from_spec(args.spec)
    if not args.ring:
        raise UsageError("give --spec or --ring and --n")
    return N2nGroup(serialize.ring_arg(args.ring), args.n)


def _elements(G, args, count):
    xs = [G.from_json(serialize.load(v)) for v in (args.x, args.y)[:count]
          if v is not None]
    if len(xs) != count:
        raise UsageError(f"this operation needs {count} element(s) (--x/--y)")
    return xs


def cmd_group(args):
    G = _group(args)
    op = args.op
    out = {"group": group_to_json(G), "op": op}
    if op in ("mul", "comm"):
        x, y = _elements(G, args, 2)
        out["result"] = (G.mul(x, y) if op == "mul" else G.commutator(x, y)).to_json()
    elif op == "inv":
        (x,) = _elements(G, args, 1)
        out["result"] = G.inv(x).to_json()
    elif op == "nf":
        (x,) = _elements(G, args, 1)
        nf = G.normal_form(x)
        R = G.ring
        out["result"] = {"alphas_desc": [R.to_str(v) for v in nf.alphas_desc],
                         "gammas": [R.to_str(v) for v in nf.gammas],
                         "word": "g_n^a_n ... g_1^a_1 g_12^c_12 ... g_{n-1,n}^c_{n-1,n}"}
    elif op == "center":
        if G.ring.is_finite:
            out["result"] = [z.to_json() for z in G.center_members()]
        else:
            out["result"] = {"description": "alphas = 0", "gammas": "arbitrary"}
    elif op == "relations":
        rep = check_relations(G, seed=args.seed)
        out["result"] = rep.to_json()
        _emit(args, out, "group")
        return 0 if rep.ok else 1
    elif op == "bigcocycle":
        big = induced_big_cocycle(getattr(G, "family", None) or _zero_family(G))
        out["result"] = {"cocycle": bool(check_cocycle(big)), "table": big.to_json()["table"]
                         if G.ring.is_finite else None}
    _emit(args, out, "group")
    return 0


def _zero_family(G):
    from .qn2n import CocycleFamily

    return CocycleFamily.zero(G.ring, G.n)


# -- cocycles ------------------------------------------------------------------------


def cmd_cocycle(args):
    f = serialize.cocycle_from_json(args.input)
    f.verify()
    op = args.op
    if op == "check":
        c, s = check_cocycle(f), check_symmetric(f)
        out = {"cocycle": bool(c), "symmetric": bool(s), "exhaustive": c.exhaustive}
        _emit(args, out, "cocycle")
        return 0 if c and s else 1
    if op == "coboundary":
        psi = find_coboundary_witness(f)
        out = {"coboundary": psi is not None}
        if psi is not None:
            out["psi"] = [[f.domain.value_to_json(b), f.codomain.value_to_json(psi[b])] for b in f.domain.elements()]
        _emit(args, out, "cocycle")
        return 0
    if op == "compare":
        if not args.other:
            raise UsageError("cocycle compare needs --other")
        g = serialize.cocycle_from_json(args.other)
        g.verify()
        _emit(args, {"equivalent": bool(extensions_equivalent(f, g))}, "cocycle")
        return 0
    # extension
    if not f.verified_cocycle:
        raise UsageError("input is not a cocycle")
    E = Extension(f.codomain, f.domain, f).finite()
    orders = sorted(E.element_order(g) for g in range(E.order))
    _emit(args, {"order": E.order, "abelian": E.is_abelian(), "max_element_order": orders[-1],
                 "element_orders": orders}, "cocycle")
    return 0


# -- pf ---------------------------------------------------------------------------------


def cmd_pf(args):
    G = serialize.input_group(args.input) if args.input else _group(args)
    if args.op == "profile":
        f = commutator_bilinear_map(G)
        prof = profile(G)
        _emit(args, {**prof.to_json(), "complete_system": list(prof.complete_system),
                     "commutator_map": f.report()}, "pf")
        return 0
    rec = pf_reconstruct(G)
    if args.op == "reconstruct":
        body = rec.to_json()
        prof = profile(G)
        body.update(prof.to_json())
        body["cyclic"] = suites.is_cyclic_ring(rec.ring)
        _emit(args, body, "pf")
        return 0 if rec.all_scalar in (None, True) else 1
    # transport along a relabelling of the group's own table
    F = G if isinstance(G, FiniteGroup) else G.finite()
    phi = np.array(serialize.load(args.map), dtype=np.int64) if args.map else np.arange(F.order)
    t = pf_isomorphism_transport(G, G, phi, recG=rec, recH=rec)
    _emit(args, t.to_json(), "pf")
    return 0 if t.admissible and t.ring_iso else 1


# -- characterize -------------------------------------------------------------------


def _basis_for(G, obj):
    if "basis" in obj:
        return [int(b) if isinstance(b, (int, str)) and str(b).isdigit() else G.from_json(b) for b in obj["basis"]]
    if isinstance(G, FiniteGroup):
        raise UsageError("table inputs need a \"basis\" list of element indices")
    return G.standard_basis()[0]


def cmd_characterize(args):
    obj = serialize.load(args.input)
    G = serialize.input_group(obj)
    if args.op == "roundtrip":
        if isinstance(G, FiniteGroup):
            raise UsageError("roundtrip needs a group spec, not a table")
        rt = roundtrip(G)
        body = rt.to_json()
        if rt.result is not None:
            body["extraction"] = rt.result.to_json()
        _emit(args, body, "characterize")
        return 0 if rt.ok else 1
    basis = _basis_for(G, obj)
    if args.op == "check":
        rep = check_basis(G, basis)
        body = {"basis": rep.to_json()}
        ok = rep.ok
        if ok:
            prep, _ = pf_basis_report(G, basis)
            body["pf_basis"] = prep.to_json()
            ok = prep.ok
        body["ok"] = ok
        _emit(args, body, "characterize")
        return 0 if ok else 1
    res = extract(G, basis)
    _emit(args, res.to_json(), "characterize")
    return 0 if res.is_isomorphism and res.relations.ok else 1


# -- fo -----------------------------------------------------------------------------------


def _assignment(model, pairs):
    out = {}
    for p in pairs or []:
        if "=" not in p:
            raise UsageError(f"bad assignment {p!r}; use name=index")
        k, v = p.split("=", 1)
        out[k.strip()] = int(v)
        if not 0 <= out[k.strip()] < model.size:
            raise UsageError(f"{k} is outside the model")
    return out


def cmd_fo(args):
    model = serialize.model_from_json(args.model)
    macros = [fo.parse_macro(m) for m in args.macro or []]
    if args.definability:
        macros += list(fo.definability_macros(sum(1 for k in model.params if re.fullmatch(r"h\d+", k))).values())
    formula = fo.parse(args.formula)
    if args.op == "eval":
        val = fo.holds(formula, model, _assignment(model, args.assign), macros)
        _emit(args, {"formula": fo.to_text(formula), "value": val}, "fo")
        return 0
    got = fo.define_set(formula, model, var=args.var, macros=macros, method=args.method)
    _emit(args, {"formula": fo.to_text(formula), "var": args.var, "set": got, "size": len(got)}, "fo")
    return 0


# -- run-suite / eval ---------------------------------------------------------------------


def cmd_run_suite(args):
    if args.name not in suites.SUITES + ("all",):
        raise UsageError(f"unknown suite {args.name!r}; choose from {', '.join(suites.SUITES + ('all',))}")
    family = None
    ring, n = args.ring, args.n
    if args.config:
        cfg = serialize.load(args.config)
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        ring = cfg.get("ring", ring)
        n = int(cfg.get("n", n))
        family = cfg.get("family")
    R = serialize.ring_arg(ring)
    if n < 2:
        raise UsageError("n must be at least 2")
    report = suites.run_suite(args.name, R, n, seed=args.seed, family_json=family,
                              jobs=args.jobs, timings=args.timings)
    report.pop("schema")
    _emit(args, report, "run-report")
    return 0 if report["ok"] else 1


_GEN = re.compile(r"g(\d+)(?:_(\d+))?$")


def _word_env(G, names):
    env = {}
    for name in names:
        m = _GEN.match(name)
        if not m:
            raise UsageError(f"unknown symbol {name!r} in word")
        a, b = m.groups()
        if b is None and len(a) == 2 and G.n < 10:
            a, b = a[0], a[1]
        i = int(a)
        if b is None:
            if not 1 <= i <= G.n:
                raise UsageError(f"{name} does not exist in a rank {G.n} group")
            env[name] = G.gen(i)
        else:
            j = int(b)
            if (i, j) not in G.pair_index:
                raise UsageError(f"{name} does not exist in a rank {G.n} group")
            env[name] = G.central_gen(i, j)
    return env


def eval_word(G, word):
    """Evaluate a word in g1..gn, g12.. (or g1_2) with *, ^k, ^-1 and [a, b]."""
    if not word.strip():
        return G.identity
    t = fo.parse_term(word)
    env = _word_env(G, fo.term_vars(t))

    def ev(t):
        if isinstance(t, fo.Var):
            return env[t.name]
        if isinstance(t, fo.One):
            return G.identity
        if isinstance(t, fo.Mul):
            return G.mul(ev(t.left), ev(t.right))
        if isinstance(t, fo.Pow):
            b = ev(t.base)
            if t.exp < 0:
                b = G.inv(b)
            out = G.identity
            for _ in range(abs(t.exp)):
                out = G.mul(out, b)
            return out
        if isinstance(t, fo.Comm):
            return G.commutator(ev(t.left), ev(t.right))
        raise UsageError(f"unsupported term {t!r}")

    return ev(t)


def cmd_eval(args):
    obj = serialize.load(args.expr)
    if not isinstance(obj, dict):
        raise UsageError("expression file must hold a JSON object")
    if "word" in obj:
        if "group" not in obj:
            raise UsageError("word evaluation needs a \"group\" spec")
        G = serialize.group_from_spec(obj["group"])
        x = eval_word(G, obj["word"])
        _emit(args, {"kind": "word", "word": obj["word"], "result": x.to_json()}, "eval")
        return 0
    if "formula" in obj:
        if "model" not in obj:
            raise UsageError("formula evaluation needs a \"model\"")
        model = serialize.model_from_json(obj["model"])
        macros = [fo.parse_macro(m) for m in obj.get("macros", [])]
        f = fo.parse(obj["formula"])
        assign = {k: int(v) for k, v in obj.get("assignment", {}).items()}
        val = fo.holds(f, model, assign, macros)
        _emit(args, {"kind": "formula", "formula": fo.to_text(f), "value": val}, "eval")
        return 0
    raise UsageError("expression needs a \"word\" or a \"formula\"")


# -- parser -----------------------------------------------------------------------------------


def _common(p):
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--output", "-o", help="write JSON here instead of stdout")


def _group_args(p):
    p.add_argument("--spec", help="group spec JSON (text, file or @file)")
    p.add_argument("--ring", help="ring name (mod3, Z) or descriptor JSON")
    p.add_argument("--n", type=int, default=2)


def build_parser():
    ap = argparse.ArgumentParser(prog="nilcat", description="2-nilpotent groups over rings")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ring", help="ring arithmetic")
    p.add_argument("op", choices=["add", "sub", "mul", "neg", "elements", "axioms"])
    p.add_argument("values", nargs="*")
    p.add_argument("--ring", required=True)
    _common(p)
    p.set_defaults(func=cmd_ring)

    for name, ops in (("n2n", ["mul", "inv", "comm", "nf", "center"]),
                      ("qn", ["mul", "inv", "comm", "relations", "bigcocycle"])):
        p = sub.add_parser(name, help=f"{name} group operations")
        p.add_argument("op", choices=ops)
        _group_args(p)
        p.add_argument("--x", help="element JSON")
        p.add_argument("--y", help="element JSON")
        _common(p)
        p.set_defaults(func=cmd_group)

    p = sub.add_parser("cocycle", help="2-cocycle checks")
    p.add_argument("op", choices=["check", "coboundary", "compare", "extension"])
    p.add_argument("--input", required=True, help="cocycle JSON")
    p.add_argument("--other", help="second cocycle for compare")
    _common(p)
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("pf", help="commutator map profile and the ring P(f_G)")
    p.add_argument("op", choices=["profile", "reconstruct", "transport"])
    _group_args(p)
    p.add_argument("--input", help="group spec or table JSON")
    p.add_argument("--map", help="index list for transport (default identity)")
    _common(p)
    p.set_defaults(func=cmd_pf)

    p = sub.add_parser("characterize", help="basis recognition and extraction")
    p.add_argument("op", choices=["check", "extract", "roundtrip"])
    p.add_argument("--input", required=True, help="table.json or spec.json")
    _common(p)
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("fo", help="first-order formulas over finite groups")
    p.add_argument("op", choices=["eval", "define"])
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--var", default="x")
    p.add_argument("--assign", action="append", help="name=index")
    p.add_argument("--macro", action="append", help="name(x) := formula")
    p.add_argument("--definability", action="store_true", help="load phiZ, phiH.., phiHH macros")
    p.add_argument("--method", choices=["solver", "naive"], default="solver")
    _common(p)
    p.set_defaults(func=cmd_fo)

    p = sub.add_parser("run-suite", help="run a verification suite")
    p.add_argument("name", help="axioms | basen2 | cohomology | pf | characterize | fo | all")
    p.add_argument("--ring", default="mod2")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--config", help="JSON with ring, n and optional family")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timings", action="store_true", help="include wall-clock seconds")
    _common(p)
    p.set_defaults(func=cmd_run_suite)

    p = sub.add_parser("eval", help="evaluate a word or formula described in a JSON file")
    p.add_argument("expr", help="expression JSON file or text")
    _common(p)
    p.set_defaults(func=cmd_eval)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        ap.error(str(e))
    except (NilcatError, ValueError, KeyError, TypeError, json.JSONDecodeError, OSError) as e:
        print(f"nilcat: error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
