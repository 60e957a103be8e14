"""Verification sweeps shared by the CLI subcommands and the ``all`` run.

Each function returns a JSON-ready dict with an ``ok`` flag; nothing here
reads the clock, so equal inputs give equal reports.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

from . import __version__
from ._rational import point_str, qstr
from .budget import Budgets
from .coboundary import build_weighted_complex, h_k, join_complex, reduced_betti_f2
from .complex_maps import (PLMapInstance, coatom_cover_count, cover_certificate, order_complex,
                           sample_generic_embedding)
from .expander import corradi_lower_bound, expansion_table, incidence, theorem21_rhs
from .extraction import MultipartiteHypergraph, extract_box, max_box_exact
from .lattice import build_subspace_lattice, validate_lattice
from .pach import (affine_selection_suite, box_coatom_analysis, candidate_points_for_faces,
                   tau_workbench, theorem12_chain, witnessed_boxes)


def lattice_section(d: int, q: int, seed: int = 0) -> dict:
    L = build_subspace_lattice(d + 1, q)
    rep = validate_lattice(L, seed=seed)
    G = incidence(L)
    inter = sorted({(G.masks[i] & G.masks[j]).bit_count()
                    for i, j in combinations(range(G.n_atoms), 2)})
    joins_ok = all(L.join_all(L.atoms_below(c)) == c for c in L.coatom_ids)
    ok = rep.ok and joins_ok and len(set(G.degrees)) == 1 and len(inter) <= 1
    return {
        "d": d, "q": q, "rank_profile": list(L.rank_profile()),
        "atom_degrees": sorted(set(G.degrees)), "pair_intersections": inter,
        "coatom_is_join_of_atoms": joins_ok, "validation": rep.as_dict(), "ok": ok,
    }


def expansion_section(d: int, q: int, budgets: Budgets | None = None) -> tuple[dict, list]:
    budgets = budgets or Budgets.from_env()
    L = build_subspace_lattice(d + 1, q)
    G = incidence(L)
    recs = expansion_table(G, budget=budgets.subsets)
    rows = []
    ok = True
    for r in recs:
        cb = corradi_lower_bound(r.m, q, d)
        sound = cb.value <= r.min_gamma
        ok = ok and sound and cb.ok
        rows.append({"m": r.m, "min_gamma": r.min_gamma, "corradi": qstr(cb.value),
                     "corradi_le_min": sound, "chain_ok": cb.ok})
    return {"d": d, "q": q, "rhs21": qstr(theorem21_rhs(L)), "rows": rows, "ok": ok}, recs


def _segment_points(M, rng, count):
    """Random points on embedded edges of proper chains (where images meet)."""
    edges = [ch for ch in M.proper_chains() if len(ch) == 2]
    out = []
    for _ in range(count):
        a, b = (M.point(x) for x in rng.choice(edges))
        t = Fraction(rng.randrange(1 << 12), 1 << 12)
        out.append(tuple(x + t * (y - x) for x, y in zip(a, b)))
    return out


def cover_sweep(M: PLMapInstance, extra: int = 1000, seed: int = 0) -> dict:
    """Coatom cover counts over all candidate points plus seeded extra points."""
    L = M.L
    d = L.d
    G = incidence(L)
    bound = d * max(G.degrees)
    faces = [tuple(L.atoms_below(c)) for c in L.coatom_ids]
    pts = list(dict.fromkeys(candidate_points_for_faces(M, faces)))
    n_cand = len(pts)
    rng = random.Random(seed)
    den = 1 << 12
    half = extra // 2
    pts += _segment_points(M, rng, half)
    pts += [tuple(Fraction(rng.randrange(den + 1), den) for _ in range(d)) for _ in range(extra - half)]
    max_count, over, bad_cert, certs = 0, [], [], 0
    max_tp, max_sum = 0, 0
    for u in pts:
        c = coatom_cover_count(M, u).count
        max_count = max(max_count, c)
        if c > bound:
            over.append(point_str(u))
        if c:
            cert = cover_certificate(M, u)
            certs += 1
            max_tp = max(max_tp, len(cert.t_prime))
            max_sum = max(max_sum, cert.bound_sum)
            if not (cert.valid and len(cert.t_prime) <= d and cert.bound_sum <= bound):
                bad_cert.append(point_str(u))
    return {
        "candidates": n_cand, "extra_points": extra, "bound": bound, "max_count": max_count,
        "certificates": certs, "max_t_prime": max_tp, "max_bound_sum": max_sum,
        "over_bound": over, "bad_certificates": bad_cert, "ok": not over and not bad_cert,
    }


def map_section(d: int, q: int, seed: int, verify_mode: str = "exhaustive", extra: int = 1000,
                budgets: Budgets | None = None) -> tuple[dict, PLMapInstance]:
    budgets = budgets or Budgets.from_env()
    L = build_subspace_lattice(d + 1, q)
    E = sample_generic_embedding(L, d, seed, verify_mode)
    K = order_complex(L, budgets.chains)
    M = PLMapInstance(L, E, budgets.flags)
    sweep = cover_sweep(M, extra, seed)
    out = {
        "d": d, "q": q, "seed": seed,
        "order_complex_f_vector": K.f_vector(),
        "embedding": {"mode": E.verification["mode"], "families_tested": E.verification["families_tested"],
                      "attempts": E.verification.get("attempts"), "failures": E.verification["failures"]},
        "cover_sweep": sweep,
        "ok": not E.verification["failures"] and sweep["ok"],
    }
    return out, M


def tau_section(M: PLMapInstance, n: int, seed: int, budgets: Budgets | None = None,
                chain_n: int | None = None) -> dict:
    budgets = budgets or Budgets.from_env()
    L = M.L
    d = L.d
    rep = tau_workbench(M, n, budgets.partitions, seed)
    boxes = []
    ok = True
    for P, B in witnessed_boxes(M, rep):
        a = box_coatom_analysis(L, P, B, M=M)
        ok = ok and a.ok and a.min_gamma <= a.rhs21
        boxes.append({"parts": [list(V) for V in P.parts], "box": B.as_dict(), "analysis": a.as_dict()})
    chain_n = (2 * d) ** d if chain_n is None else chain_n
    ch = theorem12_chain(chain_n, d)
    summary = rep.as_dict()
    summary.pop("table")
    return {"report": summary, "boxes_checked": len(boxes), "boxes": boxes,
            "chain": ch.as_dict(), "ok": ok and ch.ok and rep.tau_hat >= 1}


def chain_section(pairs) -> dict:
    reps = [theorem12_chain(n, d) for n, d in pairs]
    return {"chains": [r.as_dict() for r in reps], "ok": all(r.ok for r in reps)}


def hk_fixtures() -> dict:
    out = {"hollow triangle": build_weighted_complex([("a", "b"), ("b", "c"), ("a", "c")]),
           "triangle": build_weighted_complex([("a", "b", "c")])}
    for n in (2, 3, 4):
        out[f"K_{n},{n}"] = join_complex(n, 1)
    out["V1*V2*V3 n=2"] = join_complex(2, 2)
    return out


def hk_section(X, ks=None, budgets: Budgets | None = None, backend=None) -> dict:
    budgets = budgets or Budgets.from_env()
    ks = range(0, X.dim + 1) if ks is None else ks
    rows = []
    ok = all(sum(X.weights(k)) == 1 for k in range(-1, X.dim + 1))
    floor = Fraction(1, 2 ** X.dim)
    for k in ks:
        r = h_k(X, k, budgets.cochain_bits, backend)
        betti = reduced_betti_f2(X, k)
        zero_iff = (r.value == 0) == (betti != 0)
        ok = ok and zero_iff
        row = r.as_dict(X)
        row.update({"betti_f2": betti, "zero_iff_cohomology": zero_iff, "floor": qstr(floor)})
        rows.append(row)
    return {"dim": X.dim, "f": {str(k): len(v) for k, v in sorted(X.faces.items())},
            "weights_normalized": all(sum(X.weights(k)) == 1 for k in range(-1, X.dim + 1)),
            "rows": rows, "ok": ok}


def hk_all(budgets: Budgets | None = None) -> dict:
    out = {}
    ok = True
    for name, X in hk_fixtures().items():
        ks = range(0, X.dim + 1)
        if name == "V1*V2*V3 n=2":
            ks = (0, 1)  # h_2 has 2^48 cochains
        sec = hk_section(X, ks, budgets)
        if name.startswith("K_") or name.startswith("V1"):
            floor = Fraction(1, 2 ** X.dim)
            # the 2^-d floor concerns dimensions below the top
            lower_ok = all(Fraction(r["h_num"], r["h_den"]) >= floor for r in sec["rows"] if r["k"] < X.dim)
            sec["above_floor"] = lower_ok
            sec["ok"] = sec["ok"] and lower_ok
        out[name] = sec
        ok = ok and sec["ok"]
    return {"fixtures": out, "ok": ok}


def random_hypergraph(rng: random.Random, sizes, density) -> MultipartiteHypergraph:
    classes = [[f"{chr(97 + i)}{j}" for j in range(s)] for i, s in enumerate(sizes)]
    edges = frozenset(e for e in product(*(range(s) for s in sizes)) if rng.random() < density)
    return MultipartiteHypergraph(tuple(map(tuple, classes)), edges)


def extraction_section(seed: int, count: int = 50) -> dict:
    rng = random.Random(seed)
    rows = []
    ok = True
    for i in range(count):
        sizes = [rng.randint(1, 4) for _ in range(3)]
        density = rng.choice([0.3, 0.5, 0.7, 0.9, 1.0])
        F = random_hypergraph(rng, sizes, density)
        exact = max_box_exact(F).m
        succ = []
        for m in range(1, min(sizes) + 1):
            r = extract_box(F, m)
            if r.m:
                succ.append(m)
                if not F.is_complete_box(r.box) or m > exact:
                    ok = False
        complete = len(F.edges) == len(list(product(*(range(s) for s in sizes))))
        if complete and min(sizes) not in succ:
            ok = False
        rows.append({"sizes": sizes, "edges": len(F.edges), "exact": exact,
                     "extracted": max(succ) if succ else 0})
    agree = sum(1 for r in rows if r["exact"] == r["extracted"])
    return {"instances": count, "agree_with_exact": agree, "rows": rows, "ok": ok}


def baseline_section(seed: int, n: int = 4, count: int = 20) -> dict:
    rng = random.Random(seed)
    interval = [[(Fraction(rng.randrange(1, 1 << 10), 1 << 11),) for _ in range(n)],
                [(Fraction(rng.randrange(1 << 10, 1 << 11), 1 << 11),) for _ in range(n)]]
    iv = affine_selection_suite(interval, "pach", seed)
    fs = []
    for i in range(count):
        k = 5 + i % 3
        pts = [(Fraction(rng.randrange(1 << 10), 1 << 10), Fraction(rng.randrange(1 << 10), 1 << 10))
               for _ in range(k)]
        r = affine_selection_suite([pts], "first_selection", seed + i)
        fs.append({"points": k, "max_depth": r["max_depth"], "oracle_depth": r["oracle_depth"],
                   "match": r["oracle_match"]})
    ok = iv["m"] == n and all(r["match"] for r in fs)
    return {"interval": iv, "first_selection": fs, "ok": ok}


def run_all(seed: int, verify_mode: str = "exhaustive", budgets: Budgets | None = None) -> dict:
    budgets = budgets or Budgets.from_env()
    sections = {}
    sections["lattice"] = {f"L({d + 1},{q})": lattice_section(d, q, seed) for d, q in ((2, 2), (2, 3), (1, 5))}
    sections["expansion"] = {f"L({d + 1},{q})": expansion_section(d, q, budgets)[0] for d, q in ((2, 2), (2, 3))}
    m, M = map_section(2, 2, seed, verify_mode, 1000, budgets)
    sections["map"] = m
    sections["tau"] = tau_section(M, 2, seed, budgets)
    sections["chain"] = chain_section([(16, 2), (81, 2), (256, 2)])
    sections["hk"] = hk_all(budgets)
    sections["extract"] = extraction_section(seed)
    sections["baseline"] = baseline_section(seed)

    def sec_ok(s):
        return s["ok"] if "ok" in s else all(v["ok"] for v in s.values())

    status = {k: sec_ok(v) for k, v in sections.items()}
    return {"version": __version__, "seed": seed, "verify_mode": verify_mode,
            "status": status, "ok": all(status.values()), "sections": sections}
