import itertools
import random

import pytest

from ratsurf.gfarith import make_field, parse_field, quadratic_generator
from ratsurf.projgeom import (
    DegenerateConfiguration,
    GeometryError,
    NotGaloisStable,
    PglMatrix,
    ProjPoint,
    all_points,
    collinear,
    galois_orbit,
)
from ratsurf.ratmap import RationalMapRep, compose, evaluate, maps_equal
from ratsurf.surfaces import (
    D6,
    F0Model,
    HexagonAction,
    P2Model,
    PencilGraphModel,
    QLModel,
    RLModel,
    build_dp6,
    classify_subgroup,
    closure,
    count_rational_points,
    extension,
    hexagon_action,
    lift_point,
    model_from_json,
    normalize_deg2_on_ql,
    normalize_rational_pair_on_ql,
    perm_inv,
    perm_mul,
    preserves_hexagon,
    ql_rl_iso,
    rl_equation,
)

F2, F4 = make_field(2), make_field(2, 2)


# -- hexagon combinatorics ------------------------------------------------------


def all_subgroups():
    return {closure([a, b]) for a in D6 for b in D6}


def test_subgroup_lattice_of_the_hexagon_group():
    subs = all_subgroups()
    assert len(subs) == 16
    classes = {frozenset(frozenset(perm_mul(h, perm_mul(g, perm_inv(h))) for g in s) for h in D6) for s in subs}
    assert len(classes) == 10


def test_classification_is_invariant_under_all_relabelings():
    types = set()
    for s in all_subgroups():
        gens = sorted(s)
        try:
            t = classify_subgroup(gens)
        except GeometryError:
            # the S3 whose reflections fix no side never occurs
            assert len(s) == 6 and not any(all(g[i] == i for i in (0, 3)) for g in s if g in D6[6:])
            continue
        types.add(t)
        action = HexagonAction.from_perms(gens)
        for h in D6:
            assert action.relabel(h).figure_type == t
    assert types == set(range(1, 10))


def oracle_type(g):
    """Type of the cyclic group generated by one hexagon symmetry, from its
    order, fixed sides and displacement."""
    order, p = 1, g
    while p != tuple(range(6)):
        p = tuple(g[i] for i in p)
        order += 1
    fixed = sum(g[i] == i for i in range(6))
    if order == 1:
        return 1
    if order == 2:
        if fixed == 2:
            return 3
        return 4 if all((g[i] - i) % 6 == 3 for i in range(6)) else 2
    return {3: 6, 6: 7}[order]


def oracle_hexagon(base, sigma):
    """Frobenius on the six boundary curves, computed from incidences."""
    if base == "P2":
        curves = [("E", i) for i in range(3)] + [("L", frozenset(p)) for p in itertools.combinations(range(3), 2)]
        meets = {(a, b) for a in curves for b in curves
                 if a[0] != b[0] and (a[1] in b[1] if a[0] == "E" else b[1] in a[1])}

        def act(c):
            return ("E", sigma[c[1]]) if c[0] == "E" else ("L", frozenset(sigma[i] for i in c[1]))
    else:
        swap = base == "QL"
        curves = [(kind, i) for kind in "EAB" for i in range(2)]
        meets = {(a, b) for a in curves for b in curves
                 if (a[0] == "E") != (b[0] == "E") and a[1] == b[1] and "E" in (a[0], b[0])}
        meets |= {(a, b) for a in curves for b in curves if {a[0], b[0]} == {"A", "B"} and a[1] != b[1]}

        def act(c):
            kind = c[0] if c[0] == "E" or not swap else {"A": "B", "B": "A"}[c[0]]
            return (kind, sigma[c[1]])
    cycle = [curves[0]]
    while len(cycle) < 6:
        nxt = [b for (a, b) in meets if a == cycle[-1] and b not in cycle]
        cycle.append(sorted(nxt, key=str)[0])
    pos = {c: i for i, c in enumerate(cycle)}
    return tuple(pos[act(c)] for c in cycle)


def random_dp6(rnd, base_name, k):
    """Blow-up data of total degree 3 (P^2) or 2 (F0, Q^L) in general position."""
    base = {"P2": P2Model, "F0": F0Model, "QL": QLModel}[base_name](k)
    total = 3 if base_name == "P2" else 2
    while True:
        shape = rnd.choice([s for s in ([1, 1, 1], [1, 2], [3]) if sum(s) == total] if total == 3
                           else [[1, 1], [2]])
        orbits = []
        for d in shape:
            m = d * (2 if base_name == "QL" else 1)
            E = extension(k, m) if base_name != "QL" else extension(k, 2 * d if d > 1 else 2)
            pts = base.geometric_points(E) if base_name != "P2" else all_points(E, (2,))
            cand = rnd.choice(pts)
            orb = galois_orbit(cand, action=base.galois)
            if len(orb) != d:
                break
            orbits.append(orb)
        else:
            try:
                return build_dp6(base, orbits)
            except (GeometryError, ValueError):
                continue


@pytest.mark.parametrize("base_name", ["P2", "F0", "QL"])
@pytest.mark.parametrize("q", [2, 3, 4])
def test_hexagon_action_matches_incidence_oracle(base_name, q):
    rnd = random.Random(1000 * q + len(base_name))
    k = parse_field(str(q))
    for _ in range(6):
        X = random_dp6(rnd, base_name, k)
        g = X.hexagon_permutation()
        assert preserves_hexagon(g)
        assert g == oracle_hexagon(base_name, X.sigma)
        action = hexagon_action(X)
        assert action.figure_type == oracle_type(g)
        assert {action.relabel(h).figure_type for h in D6} == {action.figure_type}


def test_hexagon_types_of_the_standard_examples():
    e = [ProjPoint.make(F2, v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    assert hexagon_action(build_dp6(P2Model(F2), [[p] for p in e])).figure_type == 1
    F8 = make_field(2, 3)
    z = 2
    pts = galois_orbit(ProjPoint.from_codes(F8, [(1, z, F8.pow(z, 4))]))
    assert not collinear(*pts)
    assert hexagon_action(build_dp6(P2Model(F2), [pts])).figure_type == 6
    diag = galois_orbit(ProjPoint.from_codes(F4, [(1, 2), (1, 2)]))
    assert hexagon_action(build_dp6(F0Model(F2), [diag])).figure_type == 4


def test_build_dp6_rejects_bad_data():
    line = [[ProjPoint.make(F2, v)] for v in ((1, 0, 0), (0, 1, 0), (1, 1, 0))]
    with pytest.raises(DegenerateConfiguration):
        build_dp6(P2Model(F2), line)
    ruling = [[ProjPoint.make(F2, (1, 0), (1, 0))], [ProjPoint.make(F2, (1, 0), (0, 1))]]
    with pytest.raises(DegenerateConfiguration):
        build_dp6(F0Model(F2), ruling)
    with pytest.raises(GeometryError):
        build_dp6(P2Model(F2), [[ProjPoint.make(F2, (1, 0, 0))]])


# -- point counts ---------------------------------------------------------------


def blowup_count(q, rational_centers, base_count):
    """Each rational center is replaced by its exceptional line."""
    return base_count - rational_centers + rational_centers * (q + 1)


@pytest.mark.parametrize("base_name", ["P2", "F0", "QL"])
@pytest.mark.parametrize("q", [2, 3])
def test_rational_point_counts_of_blowups(base_name, q):
    rnd = random.Random(q)
    k = parse_field(str(q))
    base_count = {"P2": q * q + q + 1, "F0": (q + 1) ** 2, "QL": q * q + 1}[base_name]
    for _ in range(4):
        X = random_dp6(rnd, base_name, k)
        rational = sum(1 for o in X.orbits if len(o) == 1)
        assert count_rational_points(X) == blowup_count(q, rational, base_count)


def test_standard_point_counts():
    assert count_rational_points(P2Model(F2)) == 7
    e = [[ProjPoint.make(F2, v)] for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    assert count_rational_points(build_dp6(P2Model(F2), e)) == 13 == blowup_count(2, 3, 7)


def test_ql_points_over_f2_are_the_listed_ones():
    a, a2 = 2, 3
    listed = {ProjPoint.from_codes(F4, c) for c in
              ([(1, 0), (1, 0)], [(0, 1), (0, 1)], [(1, 1), (1, 1)], [(1, a), (1, a2)], [(1, a2), (1, a)])}
    assert set(QLModel(F2).points()) == listed


@pytest.mark.parametrize("q", [2, 3, 4])
def test_ql_and_rl_point_counts(q):
    k = parse_field(str(q))
    assert count_rational_points(QLModel(k)) == q * q + 1
    # second route: rational points of the quadric W Z = N(X - a1 Y)
    assert count_rational_points(RLModel(k)) == q * q + 1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_ql_rl_isomorphism_round_trips(q):
    k = parse_field(str(q))
    L = extension(k, 2)
    quad = quadratic_generator(L, k.n)
    fwd, inv = ql_rl_iso("forward", quad, k), ql_rl_iso("inverse", quad, k)
    eq = rl_equation(quad)
    assert maps_equal(compose(inv, fwd), RationalMapRep.identity(L, (1, 1)))
    assert maps_equal(compose(fwd, inv), RationalMapRep.identity(L, (3,)), modulo=eq)
    assert maps_equal(inv, ql_rl_iso("inverse-alt", quad, k), modulo=eq)
    # images of the rational points of Q^L are rational points of the quadric
    R = RLModel(k, quad)
    for x in QLModel(k, quad).points():
        y = evaluate(fwd, x)
        if y is not None:
            assert eq.evaluate(list(y.coords[0])) == 0
            assert R.galois(y) == y


def test_normalising_degree_two_points_on_ql():
    Q = QLModel(F2)
    w = 2
    w2 = F4.mul(w, w)
    std = [ProjPoint.make(F4, (1, 0), (0, 1)), ProjPoint.make(F4, (0, 1), (1, 0))]
    alpha = normalize_deg2_on_ql(Q, std)
    assert alpha.A == PglMatrix.identity(F4, 1)
    # the pair ([w:1],[w^2:1]), ([w^2:1],[w:1]) consists of two rational points
    pair = [ProjPoint.from_codes(F4, [(w, 1), (w2, 1)]), ProjPoint.from_codes(F4, [(w2, 1), (w, 1)])]
    assert all(Q.galois(x) == x for x in pair)
    with pytest.raises(NotGaloisStable):
        normalize_deg2_on_ql(Q, pair)
    beta = normalize_rational_pair_on_ql(Q, *pair)
    assert beta(pair[0]) == ProjPoint.make(F4, (1, 0), (1, 0))
    first = ProjPoint.from_codes(F4, [(w, 1), (0, 1)])
    p = [first, Q.galois(first)]
    assert p[1] != p[0] and Q.galois(p[1]) == p[0]
    alpha = normalize_deg2_on_ql(Q, p)
    assert {alpha(x) for x in p} == set(std)
    # alpha commutes with the twisted Galois action
    for x in Q.geometric_points(F4):
        assert alpha(Q.galois(x)) == Q.galois(alpha(x))
    with pytest.raises(DegenerateConfiguration):
        normalize_deg2_on_ql(Q, [ProjPoint.from_codes(F4, [(w, 1), (w, 1)]),
                                 ProjPoint.from_codes(F4, [(w, 1), (w2, 1)])])


def test_normalising_rational_pairs_on_ql():
    Q = QLModel(F2)
    pts = Q.points()
    for r, s in itertools.permutations(pts, 2):
        alpha = normalize_rational_pair_on_ql(Q, r, s)
        assert alpha(r) == ProjPoint.make(F4, (1, 0), (1, 0))
        assert alpha(s) == ProjPoint.make(F4, (0, 1), (0, 1))


def test_pencil_graph_model_blows_up_the_diagonal_point():
    for q in (2, 3, 4):
        k = parse_field(str(q))
        G = PencilGraphModel.from_quadratic(k)
        E = extension(k, 2)
        bp = G.blown_point(E)
        assert len(bp) == 2 and set(galois_orbit(bp[0], base=k.n)) == set(bp)
        # F0 blown up in a degree 2 point: (q+1)^2 rational points
        assert count_rational_points(G) == (q + 1) ** 2


@pytest.mark.parametrize("name", ["dp6_coordinate_points", "dp6_cyclic_cubic", "dp6_f0_diagonal"])
def test_json_round_trip_of_fixtures(name, fixtures):
    import json
    data = json.loads((fixtures / f"{name}.json").read_text())
    X = model_from_json(data)
    assert X.to_json() == data
    assert model_from_json(X.to_json()).sigma == X.sigma


def test_lift_point():
    x = ProjPoint.make(F2, (1, 0, 1))
    assert lift_point(x, F4).coords == ((1, 0, 1),)
