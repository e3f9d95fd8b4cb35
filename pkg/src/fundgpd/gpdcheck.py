"""Finite verification of the topological-groupoid claims.

Every check is total: it returns a report dict with a ``pass`` flag and, on
failure, the first counterexample under ``witness``.
"""
from __future__ import annotations

import numpy as np

from .errors import NotSimplyConnected
from .finspace import (bits, is_hausdorff, is_locally_compact, mask_of,
                       path_components, subspace)
from .gpdbuild import (FinTopGroupoid, FundamentalGroupoid,
                       _component_arrows, _provenance_index, groupoid_iso_check,
                       r_times_s_morphism)
from .pi1.cover import UniversalCover


def _names(G, *idx):
    return [G.arrows[int(i)] for i in idx]


def _fail(report, key, witness):
    report["pass"] = False
    report.setdefault("witness", {})[key] = witness
    return report


# --- algebra --------------------------------------------------------------------

def check_algebraic_axioms(G: FinTopGroupoid) -> dict:
    rep = {"pass": True, "arrows": G.n, "units": len(G.units)}
    r, s, inv, M = G.r, G.s, G.inv, G.mult
    idx = np.arange(G.n)

    def first(mask):
        return int(np.flatnonzero(mask)[0])

    bad = inv[inv] != idx
    if bad.any():
        return _fail(rep, "inverse_involution", _names(G, first(bad)))
    bad = r != s[inv]
    if bad.any():
        return _fail(rep, "r_equals_s_inv", _names(G, first(bad)))
    bad = (M[idx, inv] != r) | (M[inv, idx] != s)
    if bad.any():
        return _fail(rep, "units_from_inverses", _names(G, first(bad)))
    bad = (M[r, idx] != idx) | (M[idx, s] != idx)
    if bad.any():
        return _fail(rep, "unit_law", _names(G, first(bad)))
    a, b = G.composable_pairs
    ab = M[a, b]
    bad = (r[ab] != r[a]) | (s[ab] != s[b])
    if bad.any():
        k = first(bad)
        return _fail(rep, "range_source_of_product", _names(G, a[k], b[k]))
    for x in range(G.n):
        bs = np.flatnonzero(M[x] >= 0)
        xb = M[x, bs]
        rows = M[bs]
        ok = rows >= 0
        lhs = M[xb][ok]
        rhs = M[x, rows[ok]]
        if not np.array_equal(lhs, rhs):
            k = int(np.flatnonzero(lhs != rhs)[0])
            bi, ci = np.nonzero(ok)
            return _fail(rep, "associativity", _names(G, x, bs[bi[k]], ci[k]))
    rep["composable_pairs"] = int(len(a))
    return rep


# --- topology -------------------------------------------------------------------

def _mult_monotone(G: FinTopGroupoid):
    """Multiplication preserves the order of the composable-pair subspace."""
    L, M = G.leq, G.mult
    ups = [np.flatnonzero(L[a]) for a in range(G.n)]
    comp = [np.flatnonzero(M[a] >= 0) for a in range(G.n)]
    for a in range(G.n):
        B = comp[a]
        AB = M[a, B]
        for a2 in ups[a]:
            B2 = comp[a2]
            sub = L[np.ix_(B, B2)]
            vals = L[AB[:, None], M[a2, B2][None, :]]
            bad = sub & ~vals
            if bad.any():
                i, j = np.argwhere(bad)[0]
                return [G.arrows[a], G.arrows[int(B[i])], G.arrows[int(a2)], G.arrows[int(B2[j])]]
    return None


def _mult_preimages_open(G: FinTopGroupoid) -> bool:
    """Literal form: each preimage of a minimal open is open in the pair subspace."""
    a, b = G.composable_pairs
    L = G.leq
    ab = G.mult[a, b]
    # order on pairs: componentwise
    pair_leq = L[a][:, a] & L[b][:, b]
    for c in range(G.n):
        pre = L[c, ab]
        if (pair_leq[pre] & ~pre[None, :]).any():
            return False
    return True


def _map_open_onto_units(G: FinTopGroupoid, f: np.ndarray) -> list | None:
    unit_mask = mask_of(G.units.tolist())
    for a in range(G.n):
        img = mask_of({int(f[b]) for b in bits(G.space.up[a])})
        if G.space.up_closure(img) & unit_mask != img:
            return [G.arrows[a]]
    return None


def check_topological(G: FinTopGroupoid, literal_limit: int = 400) -> dict:
    rep = {"pass": True}
    L = G.leq
    w = _mult_monotone(G)
    rep["multiplication_continuous"] = w is None
    if w is not None:
        _fail(rep, "multiplication", w)
    if G.n <= literal_limit:
        literal = _mult_preimages_open(G)
        rep["multiplication_preimage_form_agrees"] = literal == (w is None)
        if literal != (w is None):
            _fail(rep, "criteria_disagree", "multiplication")
    inv = G.inv
    bad = L & ~L[np.ix_(inv, inv)]
    rep["inversion_continuous"] = not bad.any()
    if bad.any():
        i, j = np.argwhere(bad)[0]
        _fail(rep, "inversion", _names(G, i, j))
    for name, f in (("r", G.r), ("s", G.s)):
        bad = L & ~L[np.ix_(f, f)]
        cont = not bad.any()
        rep[f"{name}_continuous"] = cont
        if not cont:
            i, j = np.argwhere(bad)[0]
            _fail(rep, name, _names(G, i, j))
        w = _map_open_onto_units(G, f)
        rep[f"{name}_open"] = w is None
        if w is not None:
            _fail(rep, f"{name}_open", w)
    return rep


def _local_homeo(G: FinTopGroupoid, domain: np.ndarray, f: np.ndarray,
                 target: int) -> tuple[bool, list | None]:
    """``f`` restricted to the subspace ``domain`` is a local homeomorphism onto
    the unit bitset ``target``; the minimal open in the subspace decides."""
    dmask = mask_of(domain.tolist())
    img_all = mask_of({int(f[a]) for a in domain})
    if img_all != target:
        return False, ["not surjective"]
    unit_mask = mask_of(G.units.tolist())
    L = G.leq
    for a in domain.tolist():
        U = G.space.up[a] & dmask
        members = list(bits(U))
        imgs = [int(f[b]) for b in members]
        if len(set(imgs)) != len(imgs):
            return False, [G.arrows[a], "not injective on its minimal open"]
        img = mask_of(imgs)
        if G.space.up_closure(img) & unit_mask != img:
            return False, [G.arrows[a], "image not open"]
        sub_dom = L[np.ix_(members, members)]
        sub_img = L[np.ix_(imgs, imgs)]
        if not np.array_equal(sub_dom, sub_img):
            return False, [G.arrows[a], "not a homeomorphism onto its image"]
    return True, None


def _unit_components(G: FinTopGroupoid) -> dict[int, int]:
    """Unit arrow -> bitset (over arrow indices) of its path component in the unit space."""
    U = G.unit_space
    units = G.units.tolist()
    out = {}
    for comp in path_components(U):
        m = mask_of(units[i] for i in bits(comp))
        for i in bits(comp):
            out[units[i]] = m
    return out


def check_local_trivial_etale(G: FinTopGroupoid) -> dict:
    comps = _unit_components(G)
    rep = {"pass": True}
    lt = True
    lt_alt = True
    for u in G.units.tolist():
        ok, w = _local_homeo(G, G.fibre_r(u), G.s, comps[u])
        if not ok and lt:
            rep.setdefault("witness", {})["locally_trivial"] = [G.arrows[u]] + w
        lt &= ok
        ok2, _ = _local_homeo(G, G.fibre_s(u), G.r, comps[u])
        lt_alt &= ok2
    et, w = _local_homeo(G, np.arange(G.n), G.r, mask_of(G.units.tolist()))
    rep["locally_trivial"] = lt
    rep["locally_trivial_range_form"] = lt_alt
    rep["etale"] = et
    if w is not None:
        rep["etale_witness"] = w
    rep["pass"] = lt == lt_alt
    return rep


# --- identifications ------------------------------------------------------------

def check_subspace_identifications(G: FinTopGroupoid, C: UniversalCover) -> dict:
    k = _provenance_index(G, C)
    arrows = _component_arrows(G, k)
    B, T, m, H = C.base, C.total, C.m, C.deck
    L = G.leq
    rep = {"pass": True}

    units = [arrows[(i, i, 0)] for i in range(B.n)]
    ok1 = all(bool(L[units[i], units[j]]) == bool((B.up[i] >> j) & 1)
              for i in range(B.n) for j in range(B.n))
    ok1 &= all(G.is_unit[u] for u in units)
    rep["units_homeomorphic_to_base"] = ok1
    if not ok1:
        _fail(rep, "units", "unit subspace is not order-isomorphic to the base")

    ok2 = True
    sizes = set()
    for i in range(B.n):
        fib = [arrows[(i, j, g)] for j in range(B.n) for g in range(m)]
        pts = [j * m + g for j in range(B.n) for g in range(m)]
        sizes.add(len(fib))
        if sorted(fib) != sorted(G.fibre_r(units[i]).tolist()):
            ok2 = False
        for a, p in zip(fib, pts):
            if G.s[a] != units[p // m]:
                ok2 = False
        sub = L[np.ix_(fib, fib)]
        cov = T.leq_matrix()[np.ix_(pts, pts)]
        if not np.array_equal(sub, cov):
            ok2 = False
        if not ok2:
            _fail(rep, "fibre", [B.points[i]])
            break
    rep["fibre_homeomorphic_to_cover"] = ok2
    rep["fibre_size"] = sorted(sizes)

    ok3 = True
    discrete = True
    for i in range(B.n):
        iso = [arrows[(i, i, H.inv[g])] for g in range(m)]
        sub = L[np.ix_(iso, iso)]
        if not np.array_equal(sub, np.eye(m, dtype=bool)):
            discrete = False
        for g in range(m):
            for h in range(m):
                if G.mult[iso[g], iso[h]] != iso[H.op(g, h)]:
                    ok3 = False
        if sorted(iso) != sorted(G.isotropy(units[i]).tolist()):
            ok3 = False
    rep["isotropy_discrete"] = discrete
    rep["isotropy_isomorphic_to_deck"] = ok3
    rep["isotropy_order"] = m
    rep["isotropy_matches_construction"] = (G.isotropy_discrete is None
                                            or G.isotropy_discrete == discrete)
    if not (discrete and ok3 and rep["isotropy_matches_construction"]):
        _fail(rep, "isotropy", "isotropy group is not a discrete copy of the deck group")
    return rep


def check_r_times_s(G: FinTopGroupoid) -> dict:
    units = G.units.tolist()
    pos = {u: i for i, u in enumerate(units)}
    nu = len(units)
    Lu = G.leq[np.ix_(units, units)]
    L = G.leq
    rs = np.array([pos[int(G.r[a])] * nu + pos[int(G.s[a])] for a in range(G.n)])
    rep = {"pass": True}
    comps = path_components(G.unit_space)
    expected = set()
    for c in comps:
        idx = list(bits(c))
        expected |= {i * nu + j for i in idx for j in idx}
    image = set(rs.tolist())
    rep["surjective_per_component"] = image == expected
    if image != expected:
        _fail(rep, "surjective", sorted(expected - image)[:1])
    local = True
    for a in range(G.n):
        members = list(bits(G.space.up[a]))
        imgs = rs[members]
        if len(set(imgs.tolist())) != len(members):
            local = False
        ri, si = imgs // nu, imgs % nu
        # image open in the product of the unit space with itself
        up_r = set()
        img_set = set(imgs.tolist())
        for x, y in zip(ri.tolist(), si.tolist()):
            for x2 in np.flatnonzero(Lu[x]).tolist():
                for y2 in np.flatnonzero(Lu[y]).tolist():
                    up_r.add(x2 * nu + y2)
        if up_r != img_set:
            local = False
        prod_leq = Lu[np.ix_(ri, ri)] & Lu[np.ix_(si, si)]
        if not np.array_equal(L[np.ix_(members, members)], prod_leq):
            local = False
        if not local:
            _fail(rep, "local_homeomorphism", [G.arrows[a]])
            break
    rep["local_homeomorphism"] = local
    rep["injective"] = len(image) == G.n
    rep["global_homeomorphism"] = local and rep["injective"] and rep["surjective_per_component"]
    fibres = {}
    for v in rs.tolist():
        fibres[v] = fibres.get(v, 0) + 1
    rep["fibre_sizes"] = sorted(set(fibres.values()))
    return rep


def simply_connected_iso(F: FundamentalGroupoid) -> bool:
    """r x s onto the pair groupoid is an isomorphism of topological groupoids."""
    if len(F.covers) != 1 or F.covers[0].m != 1:
        raise NotSimplyConnected(
            f"{len(F.covers)} components, pi_1 orders {[c.m for c in F.covers]}")
    pair, phi = r_times_s_morphism(F.groupoid, F.space, F.unit_point)
    return bool(groupoid_iso_check(F.groupoid, pair, phi))


# --- point-set topology ---------------------------------------------------------

def space_properties(X) -> dict:
    h = is_hausdorff(X)
    return {"hausdorff": h, "locally_compact": is_locally_compact(X),
            "second_countable": True, "paracompact": h}


def point_set_report(G: FinTopGroupoid, C: UniversalCover) -> dict:
    k = _provenance_index(G, C)
    if len(G.provenance) > 1:
        arrows = sorted(_component_arrows(G, k).values())
        arrow_space = subspace(G.space, mask_of(arrows))
    else:
        arrow_space = G.space
    X, Xt, Gd = space_properties(C.base), space_properties(C.total), space_properties(arrow_space)
    finite_pi1 = True

    def imp(a, b):
        return (not a) or b

    items = {
        "haus_fgd_1_iff_4": X["hausdorff"] == Gd["hausdorff"],
        "haus_fgd_1_implies_2": imp(X["hausdorff"], Xt["hausdorff"]),
        "haus_fgd_4_iff_relation_closed": Gd["hausdorff"] == bool(G.meta.get("relation_closed", Gd["hausdorff"])),
        "local_cpt_1_iff_2": X["locally_compact"] == Xt["locally_compact"],
        "local_cpt_3_implies_1_2": imp(Gd["locally_compact"], X["locally_compact"] and Xt["locally_compact"]),
        "local_cpt_hausdorff_all_equivalent": imp(
            X["hausdorff"], X["locally_compact"] == Xt["locally_compact"] == Gd["locally_compact"]),
        "sec_cble_1_2_4_equivalent": X["second_countable"] == Xt["second_countable"] == Gd["second_countable"],
        "paracpt_3_implies_1_2": imp(Gd["paracompact"], X["paracompact"] and Xt["paracompact"]),
        "paracpt_1_implies_2_finite_pi1": imp(X["paracompact"] and finite_pi1, Xt["paracompact"]),
    }
    return {
        "pass": all(items.values()),
        "base": X, "cover": Xt, "groupoid": Gd,
        "items": items,
        "not_evaluated": ["haus_fgd_3_path_space", "haus_fgd_5_path_relation",
                          "sec_cble_3_path_space"],
    }
