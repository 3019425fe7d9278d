"""The acceptance checks as plain functions, and the deterministic selftest report."""

from __future__ import annotations

import json
import random

from .errors import NotUnimodular
from .excision import (is_kernel_identity, lift_matrix, project_matrix, random_relative_sl,
                       relative_witness_pair, suslin_lift_check)
from .forms import _j_form_z, alternative_sigma_jr, is_valid_sigma, sigma_jr
from .matrix import Matrix, det_bareiss
from .orbits import (absolute_orbit, enumerate_unimodular_rows, enumerate_unit_containing_rows,
                     relative_orbit_certify)
from .reduction import (bfs_reducer, euclid_reducer, peel_iterate, reduce_to_e1,
                        relative_reducer)
from .rings import ZZ, Modular, PolyRing, unimodular_witness
from .suslin import (module_verdicts, verify_det_formula, verify_product_identity,
                     verify_suslin_identity, witness_pair)
from .transvections import (b_solutions, kernel_decomposition, pair_transvection_product,
                            rank1_transvection, reconstruct, solve_b_by_expansion,
                            symbolic_orthogonal_family, symbolic_rank1, symplecticity)
from .words import LINEAR, SYMPL, random_relative_word, random_word
from .forms import hat


def _result(k, name, passed, **details):
    return {"id": k, "name": name, "passed": bool(passed), "details": details}


def c1_product_identity(seed=0):
    verdicts = {str(r): verify_product_identity(r) for r in range(1, 6)}
    return _result(1, "Suslin product identity, symbolic r=1..5", all(verdicts.values()), verdicts=verdicts)


def c2_suslin_identities(seed=0):
    verdicts = {str(r): verify_suslin_identity(r, n_numeric=20, seed=seed) for r in range(1, 7)}
    return _result(2, "Suslin identities by r mod 4, r=1..6 (r=6 on 20 witness pairs)",
                   all(verdicts.values()), verdicts=verdicts)


def c3_det_formula(seed=0):
    verdicts = {str(r): verify_det_formula(r) for r in range(1, 4)}
    return _result(3, "det S_r = <v,w>^(2^(r-1)), symbolic r=1..3", all(verdicts.values()), verdicts=verdicts)


def j_facts(r: int) -> dict:
    J = _j_form_z(r)
    n = J.nrows
    I = Matrix.identity(ZZ, n)
    sign = (-1) ** (r * (r + 1) // 2)
    antisym = J.T == -J
    sym = J.T == J
    return {
        "det": det_bareiss(J) == ZZ.one,
        "orthogonal": J.T @ J == I,
        "transpose_sign": J.T == J.scale(ZZ(sign)),
        "classification": (antisym and not sym) if r % 4 in (1, 2) else (sym and not antisym),
    }


def c4_j_forms(seed=0):
    facts = {str(r): j_facts(r) for r in range(0, 7)}
    ok = all(all(f.values()) for f in facts.values())
    return _result(4, "J_r facts r=0..6", ok, facts=facts)


def c5_sigma(seed=0):
    conj = {str(r): is_valid_sigma(r, sigma_jr(r)) and sigma_jr(r).is_unsigned() for r in (1, 2, 5, 6)}
    invariance = {}
    for r in (1, 2):
        alt = alternative_sigma_jr(r)
        invariance[str(r)] = (is_valid_sigma(r, alt)
                              and module_verdicts(r, None, seed) == module_verdicts(r, alt, seed)
                              and all(module_verdicts(r, alt, seed).values()))
    ok = all(conj.values()) and all(invariance.values())
    return _result(5, "sigma J_r sigma^t = psi and invariance under an alternative sigma", ok,
                   conjugation=conj, alternative_invariance=invariance)


def c6_orbits(seed=0):
    rows = {}
    ok = True
    for m in (2, 3, 4, 5, 6, 8):
        R = Modular(m)
        e1 = (1, 0, 0, 0)
        lin = absolute_orbit(e1, R, LINEAR)
        sym = absolute_orbit(e1, R, SYMPL)
        um = enumerate_unimodular_rows(R, 4)
        good = lin == sym == um
        rows[f"Z/{m}"] = {"linear": len(lin), "sympl": len(sym), "unimodular": len(um), "equal": good}
        ok &= good
    for m, expected in ((2, 15), (4, 240)):
        R = Modular(m)
        unit_rows = enumerate_unit_containing_rows(R, 4)
        good = len(unit_rows) == expected and rows[f"Z/{m}"]["sympl"] == expected \
            and absolute_orbit((1, 0, 0, 0), R, SYMPL) == unit_rows
        rows[f"Z/{m}"]["unit_containing"] = len(unit_rows)
        ok &= good
    return _result(6, "e1 E_4(R) = e1 ESp_4(R) for R = Z/2,3,4,5,6,8", ok, orbits=rows)


def c7_relative(seed=0):
    out = {}
    ok = True
    for m, g in ((4, 2), (8, 2), (8, 4)):
        R = Modular(m)
        I = R.ideal(g)
        e1 = (1, 0, 0, 0)
        lin = relative_orbit_certify(e1, I, LINEAR, R)
        sym = relative_orbit_certify(e1, I, SYMPL, R)
        good = lin.certified and sym.certified and lin.lower == sym.lower
        out[f"Z/{m},({g})"] = {"linear": lin.to_json(), "sympl": sym.to_json(), "coincide": lin.lower == sym.lower}
        ok &= good
    return _result(7, "relative orbit certification, 2n=4", ok, cases=out)


def _kernel_triple(rng, n, R):
    v, u = witness_pair(rng, n - 1, R)
    w = [R.zero] * n
    for _ in range(3):
        i, j = rng.sample(range(n), 2)
        c = R(rng.randint(-5, 5))
        w[i] = w[i] + c * v[j]
        w[j] = w[j] - c * v[i]
    return w, v, u


def c8_transvections(seed=0):
    rng = random.Random(seed)
    rank1 = {}
    for size in (4, 6):
        a, v = symbolic_rank1(size)
        rank1[str(size)] = symplecticity(rank1_transvection(a, v))
    kernel = {}
    for R in (Modular(7), ZZ, Modular(8)):
        good = 0
        for _ in range(500):
            n = rng.randint(2, 5)
            w, v, u = _kernel_triple(rng, n, R)
            if reconstruct(kernel_decomposition(w, v, u), v) == tuple(w):
                good += 1
        kernel[str(R)] = good
    bres = {}
    for k in (1, 2):
        vs, w = symbolic_orthogonal_family(k, 4)
        pp = pair_transvection_product(vs, w)
        bres[f"k={k} symbolic"] = (pp.b == solve_b_by_expansion(vs, w)
                                   and all(symplecticity(f) for f in pp.factors))
    R = Modular(8)
    I = R.ideal(2)
    good = 0
    trials = 20
    for _ in range(trials):
        w = [R(rng.randrange(8)) for _ in range(4)]
        wh = hat(w)
        vs = []
        for _ in range(3):
            v = [R.zero] * 4
            for p in range(4):
                for q in range(p + 1, 4):
                    s = R(2 * rng.randrange(4))
                    v[p] = v[p] + s * wh[q]
                    v[q] = v[q] - s * wh[p]
            vs.append(tuple(v))
        pp = pair_transvection_product(vs, w, I)
        if pp.b in b_solutions(vs, w) and I.contains(pp.b):
            good += 1
    bres["k=3 over Z/8"] = good == trials
    ok = all(rank1.values()) and all(c == 500 for c in kernel.values()) and all(bres.values())
    return _result(8, "transvections: rank-1 symplecticity, kernel decomposition, pair product b", ok,
                   rank1=rank1, kernel_reconstructions=kernel, b_identity=bres)


def c9_peel(seed=0):
    rng = random.Random(seed)
    R = Modular(8)
    replayed = 0
    for k in range(100):
        size = 4 if k < 50 else 6
        alpha = random_word(rng, size, R, rng.randint(1, 12), SYMPL).evaluate()
        reducer = bfs_reducer if size == 4 else euclid_reducer
        res = peel_iterate(alpha, 2, reducer)
        if res.certificate.replay() and res.gamma.nrows == 2 and symplecticity(res.gamma):
            replayed += 1
    rel = {}
    for g in (2, 4):
        I = R.ideal(g)
        good = 0
        for k in range(20):
            size = 4 if k < 10 else 6
            alpha = random_relative_word(rng, size, R, I, rng.randint(1, 4), SYMPL).evaluate()
            res = peel_iterate(alpha, 2, relative_reducer(I), I)
            ok = (res.certificate.replay()
                  and all(I.contains(z) for z in res.word.inner_parameters())
                  and res.gamma.congruent_mod(Matrix.identity(R, 2), I))
            good += ok
        rel[f"({g})"] = good
    ok = replayed == 100 and all(v == 20 for v in rel.values())
    return _result(9, "symplectic peel over Z/8 with replay", ok, absolute_replayed=replayed, relative=rel)


def c10_lifts(seed=0):
    from .rings import ExcisionZ
    rng = random.Random(seed)
    out = {}
    ok = True
    for host, g in ((Modular(9), 3), (ZZ, 2)):
        I = host.ideal(g)
        T = ExcisionZ(host, I)
        good = 0
        for _ in range(50):
            size = rng.randint(2, 4)
            word = random_relative_sl(rng, size, I, length=3, conj_length=1 if host == ZZ else 2)
            alpha = word.evaluate()
            S = lift_matrix(alpha, T)
            good += project_matrix(S, T) == alpha and is_kernel_identity(S, T)
        lifts = {}
        for r in (1, 2):
            checks = [suslin_lift_check(*relative_witness_pair(rng, r, I, length=6), T) for _ in range(5)]
            lifts[str(r)] = all(checks)
        out[str(host)] = {"lifts_ok": good, "suslin_lift": lifts}
        ok &= good == 50 and all(lifts.values())
    if ok:
        # the worked example with a nontrivial pairing
        T = ExcisionZ(ZZ, ZZ.ideal(2))
        ok &= suslin_lift_check((ZZ(3), ZZ(2)), (ZZ(3), ZZ(-4)), T)
    return _result(10, "lifts into Z + J", ok, hosts=out)


def random_unimodular_row(rng, R, n):
    while True:
        if R == ZZ:
            v = [ZZ(rng.randint(-30, 30)) for _ in range(n)]
        else:
            v = [R.random_element(rng, max_degree=3, max_terms=4) for _ in range(n)]
        try:
            unimodular_witness(v)
        except NotUnimodular:
            continue
        return v


def c11_reduce(seed=0):
    rng = random.Random(seed)
    out = {}
    for R in (ZZ, PolyRing(Modular(5), ("x",))):
        good = 0
        for _ in range(200):
            v = random_unimodular_row(rng, R, rng.randint(2, 5))
            cert = reduce_to_e1(v)
            good += cert.replay()
        out[str(R)] = good
    return _result(11, "reduce_to_e1 with replay over Z and F5[x]", all(v == 200 for v in out.values()),
                   replayed=out)


CRITERIA = [c1_product_identity, c2_suslin_identities, c3_det_formula, c4_j_forms, c5_sigma,
            c6_orbits, c7_relative, c8_transvections, c9_peel, c10_lifts, c11_reduce]


def run_selftest(seed: int = 0) -> dict:
    results = [f(seed) for f in CRITERIA]
    return {"seed": seed, "criteria": results, "all_passed": all(r["passed"] for r in results)}


def selftest_json(seed: int = 0) -> str:
    return json.dumps(run_selftest(seed), sort_keys=True, indent=2) + "\n"
