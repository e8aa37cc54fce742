import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ratsurf.gfarith import make_field, parse_field
from ratsurf.projgeom import (
    DegenerateConfiguration,
    NotTransitive,
    PglMatrix,
    ProjPoint,
    all_points,
    closed_point,
    collinear,
    count_pn,
    enumerate_pgl,
    galois_orbit,
    orbit,
    pgl_order,
    pgl_transport,
)

F2, F4, F8 = make_field(2), make_field(2, 2), make_field(2, 3)
Z = 2  # the class of t in F8, a root of t^3 + t + 1


def dp5_orbit():
    z4 = F8.pow(Z, 4)
    z2 = F8.pow(Z, 2)
    return [ProjPoint.from_codes(F8, [c]) for c in ((1, Z, z4), (1, z2, Z), (1, z4, z2))]


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_point_counts(q, n):
    F = parse_field(str(q))
    pts = all_points(F, (n,))
    assert len(pts) == len(set(pts)) == count_pn(q, n) == (q ** (n + 1) - 1) // (q - 1)


def test_normalisation_makes_equal_points_equal():
    F = make_field(5)
    a = ProjPoint.from_codes(F, [(2, 4, 1)])
    b = ProjPoint.from_codes(F, [(1, 2, 3)])
    assert a == b and hash(a) == hash(b)
    assert ProjPoint.from_codes(F, [a.coords[0]]) == a


def test_closed_points():
    assert closed_point([ProjPoint.make(F2, (1, 1, 1))]).degree == 1
    pts = dp5_orbit()
    cp = closed_point(pts)
    assert cp.degree == 3
    for p in pts:
        assert len(galois_orbit(p)) == cp.degree
    with pytest.raises(NotTransitive):
        closed_point([pts[0], ProjPoint.make(F8, (1, 1, 1))])


def test_collinearity():
    e = [ProjPoint.make(F2, v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    assert not collinear(*e)
    assert collinear(e[0], e[1], ProjPoint.make(F2, (1, 1, 0)))
    assert not collinear(*dp5_orbit())


def test_transport_of_frames():
    frame = [ProjPoint.make(F2, v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))]
    assert pgl_transport(frame, frame) == PglMatrix.identity(F2, 2)


def test_transport_along_a_conic_orbit():
    # degree 3 orbit of [z:z^2:1] on x^2 = yz and a cyclic relabelling
    pts = galois_orbit(ProjPoint.from_codes(F8, [(Z, F8.mul(Z, Z), 1)]))
    assert len(pts) == 3
    for p in pts:
        x, y, zz = p.coords[0]
        assert F8.mul(x, x) == F8.mul(y, zz)
    r = ProjPoint.make(F8, (1, 1, 1))
    alpha = pgl_transport(pts + [r], pts[1:] + pts[:1] + [r], base=1)
    assert alpha is not None and alpha.is_rational(1)
    for s, t in zip(pts, pts[1:] + pts[:1]):
        assert alpha(s) == t


def test_transport_incompatible_with_frobenius():
    pts = dp5_orbit()
    rational = [ProjPoint.make(F8, v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    r = ProjPoint.make(F8, (1, 1, 1))
    alpha = pgl_transport(pts + [r], rational + [r], base=1)
    assert alpha is None
    # the oracle: no base-rational matrix at all maps the orbit onto rational points
    for g in enumerate_pgl(2, F2):
        G = PglMatrix(tuple(tuple(c for c in row) for row in g.rows), F8)
        assert {G(p) for p in pts} != set(rational)


def test_transport_rejects_degenerate_input():
    line = [ProjPoint.make(F2, v) for v in ((1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1))]
    with pytest.raises(DegenerateConfiguration):
        pgl_transport(line, line)


@given(st.sampled_from([make_field(3), make_field(2, 2), make_field(5)]), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_transport_maps_sources_to_targets(F, seed):
    rnd = random.Random(seed)
    pts = all_points(F, (2,))

    def frame():
        while True:
            cand = rnd.sample(pts, 4)
            if not any(collinear(*c) for c in itertools.combinations(cand, 3)):
                return cand
    s, t = frame(), frame()
    g = pgl_transport(s, t, base=F.n)
    assert g is not None
    assert [g(p) for p in s] == t
    assert g.is_rational(F.n)


@pytest.mark.parametrize("n,q,expected", [(1, 2, 6), (2, 2, 168), (1, 3, 24), (1, 4, 60)])
def test_enumerate_pgl(n, q, expected):
    F = parse_field(str(q))
    els = enumerate_pgl(n, F)
    assert len(els) == len(set(els)) == expected == pgl_order(n, q)


def test_orbits_of_point_sets():
    perms = [PglMatrix.make(F4, [[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
             PglMatrix.make(F4, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])]
    assert orbit(ProjPoint.make(F4, (1, 1, 1)), perms) == {ProjPoint.make(F4, (1, 1, 1))}
    w = 2
    w2 = F4.mul(w, w)
    assert F4.mul(w2, w) == 1
    assert len(orbit(ProjPoint.from_codes(F4, [(1, w, w2)]), [perms[1]])) == 1
    start = ProjPoint.from_codes(F4, [(1, w, w2)])
    full = orbit(start, perms)
    assert full == {start, ProjPoint.from_codes(F4, [(1, w2, w)])}
    assert len(orbit(ProjPoint.make(F2, (1, 0, 1)), enumerate_pgl(2, F2))) == 7
