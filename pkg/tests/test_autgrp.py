import itertools

import pytest

from ratsurf.autgrp import (
    AutGenerators,
    aut_generators,
    dp4_identities,
    dp6_graph_model,
    dp6_point_count_identity,
    enumerate_orbits,
    graph_involutions,
    group_order,
    map_order,
    permutation_action,
    plane_maps,
    small_orbits,
    verify_permutation_orbits,
)
from ratsurf.gfarith import make_field, parse_field
from ratsurf.lemmas import split_dp6
from ratsurf.projgeom import PglMatrix, ProjPoint, all_points, enumerate_pgl, galois_orbit, pgl_order
from ratsurf.ratmap import RationalMapRep, compose, is_involution, maps_equal
from ratsurf.surfaces import (
    F0Model,
    FnModel,
    P2Model,
    PencilGraphModel,
    QLModel,
    build_dp6,
    extension,
    lift_code,
    lift_point,
)

F2, F4, F8 = make_field(2), make_field(2, 2), make_field(2, 3)


def cyclic_cubic_dp6():
    z = 2
    pts = galois_orbit(ProjPoint.from_codes(F8, [(1, z, F8.pow(z, 4))]))
    return build_dp6(P2Model(F2), [pts]), pts


@pytest.mark.parametrize("q", [2, 3])
def test_plane_group_order(q):
    k = parse_field(str(q))
    assert group_order(aut_generators(P2Model(k))) == pgl_order(2, q) == q**3 * (q**3 - 1) * (q**2 - 1)


@pytest.mark.parametrize("q", [2, 3])
def test_quadric_group_orders(q):
    k = parse_field(str(q))
    assert group_order(aut_generators(F0Model(k))) == 2 * q**2 * (q**2 - 1) ** 2
    assert group_order(aut_generators(QLModel(k))) == 2 * q**2 * (q**4 - 1)


def test_quadric_orders_over_f2_against_brute_force():
    # pairs of PGL_2(F2) elements and the swap
    assert group_order(aut_generators(F0Model(F2))) == 2 * len(enumerate_pgl(1, F2)) ** 2 == 72
    # (A, A^g) with A in PGL_2(F4)
    assert group_order(aut_generators(QLModel(F2))) == 2 * len(enumerate_pgl(1, F4)) == 120


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_hirzebruch_group_orders(n, q):
    k = parse_field(str(q))
    mu = sum(1 for x in range(1, q) if k.pow(x, n) == 1)
    expected = q ** (n + 1) * (q * q - 1) * (q * q - q) // mu
    # shears of degree n > q vanish on P^1(k), so count on points over F_{q^2}
    m = 2 if n > q else 1
    assert group_order(aut_generators(FnModel(k, n)), m) == expected


def test_f1_is_the_plane_stabiliser_of_a_point():
    p = ProjPoint.make(F2, (1, 0, 0))
    stab = [g for g in enumerate_pgl(2, F2) if g(p) == p]
    assert group_order(aut_generators(FnModel(F2, 1))) == len(stab) == 24


@pytest.mark.parametrize("q", [2, 3, 4])
def test_split_dp6_group_order(q):
    k = parse_field(str(q))
    # the torus (k*)^2 extended by the 12 symmetries of the hexagon
    assert group_order(aut_generators(split_dp6(k))) == (q - 1) ** 2 * 12


def test_cyclic_cubic_dp6_group_order():
    X, pts = cyclic_cubic_dp6()
    stab = 0
    for g in enumerate_pgl(2, F2):
        G = PglMatrix(g.rows, F8)
        if {G(p) for p in pts} == set(pts):
            stab += 1
    # the plane stabiliser of the cubic point, doubled by the quadratic involution
    assert stab == 21
    assert group_order(aut_generators(X)) == 2 * stab == 42


@pytest.mark.parametrize("q", [2, 3, 4])
def test_pencil_graph_group_order(q):
    k = parse_field(str(q))
    G = PencilGraphModel.from_quadratic(k)
    E = extension(k, 2)
    roots = {x.coords[0] for x in G.blown_point(E)}
    fix = 0
    for g in enumerate_pgl(1, k):
        A = PglMatrix.from_codes(E, [[lift_code(k, E, c) for c in row] for row in g.rows])
        if all(A(ProjPoint.from_codes(E, [r])) == ProjPoint.from_codes(E, [r]) for r in roots):
            fix += 1
    assert fix == q + 1
    assert group_order(aut_generators(G)) == 12 * fix**2


def test_f0_with_a_diagonal_point_goes_through_the_graph_model():
    diag = galois_orbit(ProjPoint.from_codes(F4, [(1, 2), (1, 2)]))
    X = build_dp6(F0Model(F2), [diag])
    assert isinstance(dp6_graph_model(X), PencilGraphModel)
    assert group_order(aut_generators(X)) == 108


def test_trivial_generator_set():
    assert group_order(AutGenerators(P2Model(F2), [])) == 1


def test_generators_act_by_bijections_commuting_with_frobenius():
    for model in (P2Model(F2), F0Model(F2), QLModel(F2), split_dp6(F2), FnModel(F2, 2),
                  PencilGraphModel.from_quadratic(F2), cyclic_cubic_dp6()[0]):
        gens = aut_generators(model)
        act = permutation_action(gens, 1)
        for p in act.perms:
            assert sorted(p) == list(range(len(act.points)))


def test_orbit_reports_partition_the_points():
    gens = aut_generators(split_dp6(F2))
    for m in (1, 2, 3):
        rep = enumerate_orbits(gens, m, 5)
        assert sum(rep.all_sizes) == rep.total_points == len(split_dp6(F2).points(m))


def test_small_orbits_of_the_split_dp6():
    w = 2
    w2 = F4.mul(w, w)
    orbits = small_orbits(aut_generators(split_dp6(F2)), 5, 5)
    got = [{lift_point(ProjPoint.from_codes(p.field, [p.coords[0]]), F4).coords[0] for p in o.points} for o in orbits]
    assert got == [{(1, 1, 1)}, {(1, w, w2), (1, w2, w)}]
    F3 = make_field(3)
    orbits = small_orbits(aut_generators(split_dp6(F3)), 4, 5)
    assert [o.components for o in orbits] == [4]
    assert {p.coords[0] for p in orbits[0].points} == {(1, a, b) for a in (1, 2) for b in (1, 2)}
    assert small_orbits(aut_generators(split_dp6(F4)), 3, 5) == []


@pytest.mark.parametrize("q", [2, 3, 4])
def test_permutation_orbit_classification(q):
    r = verify_permutation_orbits(parse_field(str(q)))
    assert r["holds"] and not r["counterexamples"]
    if q == 2:
        assert {"fixed", "cube-root pair"} <= set(r["realized"])
    if q == 3:
        assert r["realized"]["triple"] == ["{[1:1:2], [1:2:1], [1:2:2]}"]
        assert "cube-root pair" not in r["realized"]
    if q == 4:
        assert set(r["realized"]) == {"fixed", "cube-root pair", "triple"}


def test_permutation_orbits_against_brute_force():
    """Independent search over F3: orbits of permutations and Frobenius with at
    most 5 points on xyz != 0."""
    k = make_field(3)
    pts = [x for x in all_points(k, (2,)) if all(x.coords[0])]
    seen, small = set(), []
    for x in pts:
        if x in seen:
            continue
        orb = {ProjPoint.from_codes(k, [tuple(x.coords[0][i] for i in s)]) for s in itertools.permutations(range(3))}
        seen |= orb
        if len(orb) <= 5:
            small.append(orb)
    shapes = sorted(len(o) for o in small)
    assert shapes == [1, 3]
    triple = next(o for o in small if len(o) == 3)
    assert triple == {ProjPoint.from_codes(k, [v]) for v in ((1, 2, 2), (2, 2, 1), (2, 1, 2))}


def test_point_count_identity_and_general_position():
    r2, r3 = dp6_point_count_identity(2), dp6_point_count_identity(3)
    assert r2["X_k"] == 3 and r3["X_k"] == 7
    assert r2["identity_holds"] and r3["identity_holds"]
    assert r2["no_two_on_a_ruling"] and r2["no_four_on_a_11_curve"]
    assert r2["max_on_a_11_curve"] == 3


def test_five_points_lie_on_no_11_curve_brute_force():
    """All (1,1)-forms over F4 evaluated on the five rational points of Q^L."""
    pts = QLModel(F2).points()
    best = 0
    for c in itertools.product(range(4), repeat=4):
        if not any(c):
            continue
        on = 0
        for x in pts:
            (u0, u1), (v0, v1) = x.coords
            terms = [F4.mul(c[0], F4.mul(u0, v0)), F4.mul(c[1], F4.mul(u0, v1)),
                     F4.mul(c[2], F4.mul(u1, v0)), F4.mul(c[3], F4.mul(u1, v1))]
            val = 0
            for t in terms:
                val = F4.add(val, t)
            on += val == 0
        best = max(best, on)
    assert best == 3


# -- displayed involutions -------------------------------------------------------------


def test_quadratic_involution_of_a_cubic_point():
    X, _ = cyclic_cubic_dp6()
    maps = plane_maps(X)
    phi = maps["phi_p"]
    assert is_involution(phi)
    assert maps_equal(phi.frobenius(1), phi)
    rot = [m for name, m in maps.items() if name.startswith("perm")]
    assert len(rot) == 2
    for a in rot:
        assert map_order(a) == 3
        assert maps_equal(compose(a, phi), compose(phi, a))
        assert maps_equal(a.frobenius(1), a)


def test_quadratic_involution_of_three_rational_points():
    X = split_dp6(F2)
    maps = plane_maps(X)
    assert is_involution(maps["phi_p"])
    assert len([n for n in maps if n.startswith("perm")]) == 5


@pytest.mark.parametrize("q", [3, 9])
def test_dp4_relations_in_odd_characteristic(q):
    d = dp4_identities(parse_field(str(q)))
    assert d["alpha_order"] == d["beta_order"] == d["phi_order"] == 2
    assert d["psi_is_phi_alpha"]
    assert d["psi_order"] == 2
    assert d["alpha_beta_commute"]
    assert d["alpha_phi_commute"] and d["alpha_psi_commute"]
    assert d["beta_psi_order"] == 3


@pytest.mark.parametrize("q", [2, 4])
def test_dp4_relations_in_characteristic_two(q):
    d = dp4_identities(parse_field(str(q)))
    assert d["alpha_order"] == d["beta_order"] == d["phi_order"] == 2
    assert d["psi_is_phi_alpha"]
    assert d["alpha_beta_commute"]
    assert d["beta_psi_order"] == 3
    # here a = 1 and psi is not an involution
    assert d["a"] == "1"
    assert d["psi_order"] == 2 * (q + 1)


def test_graph_model_lifts_are_automorphisms():
    G = PencilGraphModel.from_quadratic(F2)
    inv = graph_involutions(G)
    for name in ("alpha", "beta", "phi"):
        assert is_involution(inv[name])
    assert maps_equal(inv["psi"], compose(inv["phi"], inv["alpha"]))
    pts = set(G.points(2))
    for name in ("alpha", "beta", "phi", "psi"):
        f = inv[name].change_field(extension(F2, 2))
        from ratsurf.ratmap import evaluate
        imgs = {evaluate(f, x) for x in pts}
        assert None not in imgs and imgs == pts
    assert map_order(RationalMapRep.identity(F2, (1, 1))) == 1
