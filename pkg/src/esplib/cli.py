"""Command line interface: ``python -m esplib <subcommand> ...``.

Exit codes: 0 success, 1 a verification came out false, 2 usage error,
3 an internal assertion fired (always a bug).
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import EspError, InternalAssertion, RingMismatch

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dump(obj, args) -> str:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def _ring(text):
    from .rings import parse_ring
    try:
        return parse_ring(text)
    except Exception as exc:
        raise UsageError(f"bad ring descriptor {text!r}: {exc}") from None


def _row(ring, text):
    if text is None:
        return None
    from .rings import _split_top
    return tuple(ring.parse(x) for x in _split_top(text.strip().strip("()[]"), ","))


def _ideal(ring, text):
    if text is None:
        return None
    from .rings import parse_ideal
    return parse_ideal(ring, text)


def _load_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


# subcommands -----------------------------------------------------------------


def cmd_suslin(args):
    from .forms import MAX_R
    from .suslin import SuslinData, module_verdicts, symbolic_data
    r = args.r
    if not 0 <= r <= MAX_R:
        raise UsageError(f"r out of range: need 0 <= r <= {MAX_R}")
    if args.v is None:
        data = symbolic_data(r)
        verdicts = module_verdicts(r, seed=args.seed) if r >= 1 else {}
    else:
        R = _ring(args.ring)
        v, w = _row(R, args.v), _row(R, args.w)
        if w is None or len(v) != r + 1 or len(w) != r + 1:
            raise UsageError(f"--v and --w must both have length r+1 = {r + 1}")
        data = SuslinData(v, w)
        verdicts = {"product_identity": data.product_identity()}
        if r >= 1:
            verdicts["suslin_identity"] = data.residue_identity()
        if 1 <= r <= 3 and data.ring.is_domain:
            verdicts["det_formula"] = data.det_formula()
        if r % 4 == 1 and data.pairing == data.ring.one:
            verdicts["conjugated_symplectic"] = data.conjugated_symplectic()
    out = data.to_json()
    out["verdicts"] = verdicts
    _dump(out, args)
    return EXIT_OK if all(verdicts.values()) else EXIT_FALSE


def cmd_forms(args):
    from .forms import MAX_R, _j_form_z, alternative_sigma_jr, sigma_jr, standard_form
    from .acceptance import j_facts
    if args.n is not None:
        if args.n < 1:
            raise UsageError("n must be >= 1")
        m = standard_form(args.n)
        _dump({"psi": m.to_json(), "n": args.n}, args)
        return EXIT_OK
    r = args.r
    if not 0 <= r <= MAX_R:
        raise UsageError(f"r out of range: need 0 <= r <= {MAX_R}")
    facts = j_facts(r)
    out = {"r": r, "J": _j_form_z(r).to_json(), "facts": facts}
    if r % 4 in (1, 2):
        out["sigma"] = sigma_jr(r).to_json()
        out["alternative_sigma"] = alternative_sigma_jr(r).to_json()
    _dump(out, args)
    return EXIT_OK if all(facts.values()) else EXIT_FALSE


def cmd_orbit(args):
    from .orbits import absolute_orbit, relative_orbit_certify
    from .rings import Modular
    from .matrix import unit_row
    R = _ring(args.ring)
    if not isinstance(R, Modular):
        raise UsageError("orbit enumeration is implemented over Z/m")
    v = _row(R, args.row) if args.row else unit_row(R, args.size)
    if len(v) != args.size:
        raise UsageError("row length does not match --size")
    flavors = ["linear", "sympl"] if args.flavor == "both" else [args.flavor]
    if args.flavor != "linear" and args.size % 2:
        raise UsageError("symplectic orbits need even size")
    I = _ideal(R, args.ideal)
    out = {"ring": str(R), "size": args.size, "row": [x.to_json() for x in v]}
    if I is None:
        sets = {fl: absolute_orbit(v, R, fl) for fl in flavors}
        out["orbits"] = {fl: len(s) for fl, s in sets.items()}
        ok = len({frozenset(s) for s in sets.values()}) == 1
        out["equal"] = ok
    else:
        out["ideal"] = I.short()
        certs = {fl: relative_orbit_certify(v, I, fl, R, max_level=args.max_level) for fl in flavors}
        out["relative"] = {fl: c.to_json() for fl, c in certs.items()}
        ok = all(c.certified for c in certs.values())
        if len(certs) > 1:
            out["equal"] = len({c.lower for c in certs.values()}) == 1
            ok = ok and out["equal"]
        out["certified"] = all(c.certified for c in certs.values())
    if args.list_rows:
        key = flavors[0]
        rows = sets[key] if I is None else certs[key].lower
        out["rows"] = [list(r) for r in sorted(rows)]
    _dump(out, args)
    return EXIT_OK if ok else EXIT_FALSE


def cmd_reduce(args):
    from .reduction import ReductionCertificate, reduce_to_e1, symplectic_reduce_to_e1
    R = _ring(args.ring)
    v = _row(R, args.row)
    if args.symplectic:
        cert = ReductionCertificate.build("row", v, symplectic_reduce_to_e1(v))
    else:
        cert = reduce_to_e1(v)
    _dump(cert.to_json(), args)
    return EXIT_OK


def _alpha(args, R, flavor="sympl", ideal=None):
    from .matrix import Matrix
    from .words import random_relative_word, random_word
    if args.matrix:
        obj = _load_json(args.matrix)
        m = Matrix.from_json(obj) if "entries" in obj else Matrix(R, obj)
        if m.ring != R:
            raise RingMismatch(f"matrix over {m.ring}, expected {R}")
        return m, None
    rng = random.Random(args.seed)
    if ideal is None:
        w = random_word(rng, args.size, R, args.length, flavor)
    else:
        w = random_relative_word(rng, args.size, R, ideal, args.length, flavor)
    return w.evaluate(), w


def cmd_peel(args):
    from .reduction import bfs_reducer, euclid_reducer, peel_iterate, relative_bfs_reducer, relative_reducer
    R = _ring(args.ring)
    I = _ideal(R, args.ideal)
    alpha, word = _alpha(args, R, "sympl", I)
    if I is None:
        reducer = bfs_reducer if args.reducer == "bfs" else euclid_reducer
    else:
        reducer = relative_bfs_reducer(I) if args.reducer == "bfs" else relative_reducer(I)
    res = peel_iterate(alpha, args.target, reducer, I)
    out = res.certificate.to_json()
    out["gamma"] = res.gamma.to_json()
    _dump(out, args)
    return EXIT_OK


def cmd_lift(args):
    from .excision import (is_kernel_identity, lift_matrix, lift_row, project_matrix,
                           suslin_lift_check)
    from .rings import Excision, ExcisionZ
    host = _ring(args.host)
    J = _ideal(host, args.ideal)
    if J is None:
        raise UsageError("--ideal is required")
    target = Excision(host, J) if args.target == "R" else ExcisionZ(host, J)
    if args.v is not None:
        v = _row(host, args.v)
        if args.w is not None:
            w = _row(host, args.w)
            ok = suslin_lift_check(v, w, target)
            _dump({"suslin_lift_check": ok, "v": [x.to_json() for x in v], "w": [x.to_json() for x in w],
                   "target": target.to_json()}, args)
            return EXIT_OK if ok else EXIT_FALSE
        _dump(lift_row(v, target).to_json() | {"target": target.to_json()}, args)
        return EXIT_OK
    args.size = args.size or 3
    alpha, _ = _alpha(args, host, "linear", J)
    S = lift_matrix(alpha, target)
    ok = project_matrix(S, target) == alpha and is_kernel_identity(S, target)
    _dump({"alpha": alpha.to_json(), "lift": S.to_json(), "verified": ok}, args)
    return EXIT_OK if ok else EXIT_FALSE


def cmd_transvect(args):
    from .transvections import pair_transvection, pair_transvection_product, rank1_transvection, symplecticity
    R = _ring(args.ring)
    I = _ideal(R, args.ideal)
    if args.vs:
        vs = [_row(R, t) for t in args.vs]
        w = _row(R, args.w)
        pp = pair_transvection_product(vs, w, I)
        _dump({"b": pp.b.to_json(), "factors": [f.to_json() for f in pp.factors],
               "identity_verified": True}, args)
        return EXIT_OK
    v = _row(R, args.v)
    if args.w is not None:
        m = pair_transvection(v, _row(R, args.w))
    else:
        m = rank1_transvection(R.parse(args.a), v, I)
    ok = symplecticity(m)
    _dump({"matrix": m.to_json(), "symplectic": ok}, args)
    return EXIT_OK if ok else EXIT_FALSE


def cmd_replay(args):
    from .reduction import ReductionCertificate, ReplayError
    obj = _load_json(args.certificate)
    ring = _ring(args.ring) if args.ring else None
    cert = ReductionCertificate.from_json(obj, ring)
    try:
        cert.replay()
    except ReplayError as exc:
        print(str(exc))
        return EXIT_FALSE
    print("replay OK")
    return EXIT_OK


def cmd_selftest(args):
    from .acceptance import run_selftest
    report = run_selftest(args.seed)
    _dump(report, args)
    return EXIT_OK if report["all_passed"] else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="esplib", description="Elementary symplectic toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=fn)
        sp.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        return sp

    sp = add("suslin", cmd_suslin, "Suslin matrix, forms and identity verdicts")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--ring", default="Z")
    sp.add_argument("--v")
    sp.add_argument("--w")

    sp = add("forms", cmd_forms, "psi_n or J_r with sigma")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--r", type=int)

    sp = add("orbit", cmd_orbit, "orbit enumeration and relative certification")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--size", type=int, default=4)
    sp.add_argument("--flavor", choices=["linear", "sympl", "both"], default="both")
    sp.add_argument("--ideal")
    sp.add_argument("--row")
    sp.add_argument("--max-level", type=int, default=3)
    sp.add_argument("--list-rows", action="store_true")

    sp = add("reduce", cmd_reduce, "reduce a unimodular row to e1")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--row", required=True)
    sp.add_argument("--symplectic", action="store_true")

    sp = add("peel", cmd_peel, "symplectic peel alpha eps = I_2k + gamma")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--matrix", help="matrix JSON file (default: a random word)")
    sp.add_argument("--size", type=int, default=4)
    sp.add_argument("--length", type=int, default=8)
    sp.add_argument("--ideal")
    sp.add_argument("--target", type=int, default=2)
    sp.add_argument("--reducer", choices=["euclid", "bfs"], default="euclid")

    sp = add("lift", cmd_lift, "lifts into Z + J or R + J")
    sp.add_argument("--host", required=True)
    sp.add_argument("--ideal", required=True)
    sp.add_argument("--target", choices=["Z", "R"], default="Z")
    sp.add_argument("--matrix")
    sp.add_argument("--size", type=int)
    sp.add_argument("--length", type=int, default=3)
    sp.add_argument("--v")
    sp.add_argument("--w")

    sp = add("transvect", cmd_transvect, "transvections and the pair product")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--a", default="1")
    sp.add_argument("--v")
    sp.add_argument("--w")
    sp.add_argument("--vs", nargs="+")
    sp.add_argument("--ideal")

    sp = add("replay", cmd_replay, "replay a certificate")
    sp.add_argument("certificate")
    sp.add_argument("--ring", help="expected ring; a mismatch is a usage error")

    add("selftest", cmd_selftest, "run the acceptance checks")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalAssertion as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, RingMismatch, EspError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
