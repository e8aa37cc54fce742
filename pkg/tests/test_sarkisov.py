import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ratsurf.gfarith import make_field, parse_field, upoly_is_irreducible
from ratsurf.polys import Poly
from ratsurf.ratmap import ChartMap, MapError, RationalMapRep, compose, is_involution, maps_equal
from ratsurf.sarkisov import (
    FactorizationError,
    FibreMap,
    LinkError,
    PsiVector,
    SarkisovLink,
    SarkisovWord,
    aut_psi_image,
    conjugated_involution,
    degree_word,
    factor_hirzebruch_involution,
    factor_ql_involution,
    galois_compatible,
    hirzebruch_indices,
    hirzebruch_involution,
    hirzebruch_witnesses,
    psi_image,
    ql_involution,
    ql_link,
    ql_witnesses,
    twisted_involution,
)

F2, F3, F4 = make_field(2), make_field(3), make_field(2, 2)
degrees_st = st.lists(st.integers(0, 40), max_size=30)
link_degrees_st = st.lists(st.integers(1, 40), max_size=30)


def parity_oracle(degrees):
    return {d for d in set(degrees) if d >= 16 and list(degrees).count(d) % 2 == 1}


def form(field, coeffs):
    d = len(coeffs) - 1
    return Poly(field, 2, {(j, d - j): c for j, c in enumerate(coeffs) if c})


# -- parity image ----------------------------------------------------------------------


def test_psi_examples():
    assert psi_image([2, 3, 5, 8]).is_zero()
    assert psi_image([]).is_zero()
    assert psi_image([16, 16, 17]).to_json() == {"17": 1}
    assert psi_image([16, 16, 17, 3]).to_json() == {"17": 1}
    assert psi_image([16]).to_json() == {"16": 1}
    with pytest.raises(LinkError):
        psi_image([-1])


@given(degrees_st)
@settings(max_examples=200)
def test_psi_matches_the_odd_multiplicity_oracle(degrees):
    assert set(psi_image(degrees).entries) == parity_oracle(degrees)


@given(degrees_st, st.randoms(use_true_random=False))
@settings(max_examples=200)
def test_psi_is_invariant_under_permutation(degrees, rnd):
    shuffled = list(degrees)
    rnd.shuffle(shuffled)
    assert psi_image(shuffled) == psi_image(degrees)


@given(link_degrees_st, link_degrees_st)
@settings(max_examples=200)
def test_psi_is_additive_and_doubled_words_vanish(a, b):
    wa, wb = degree_word(a), degree_word(b)
    assert psi_image(wa + wa).is_zero()
    assert psi_image(wa + wb) == psi_image(wa) + psi_image(wb)


def test_psi_of_words_ignores_non_conic_links():
    word = SarkisovWord((SarkisovLink("II", "C", "C", 20), SarkisovLink("iso", "C", "C", 0, conic=False),
                         SarkisovLink("II", "C", "D", 18, conic=False), SarkisovLink("IV", "D", "D")))
    assert psi_image(word).to_json() == {"20": 1}


def test_psi_vector_rules():
    with pytest.raises(LinkError):
        PsiVector(frozenset({3}))
    with pytest.raises(LinkError):
        PsiVector(frozenset({16}), "a") + PsiVector(frozenset(), "b")


def test_link_and_word_validation():
    with pytest.raises(LinkError):
        SarkisovLink("V", "A", "B")
    with pytest.raises(LinkError):
        SarkisovLink("II", "A", "B", 0)
    with pytest.raises(LinkError):
        SarkisovLink("I", "A", "B", 0, FibreMap.identity(F2))
    with pytest.raises(LinkError):
        SarkisovWord((SarkisovLink("II", "A", "B", 2), SarkisovLink("II", "A", "B", 2)))


def test_word_json_round_trip():
    word = factor_hirzebruch_involution(3, [2, 2, 2], hirzebruch_witnesses([2, 2, 2])[1], F3)
    back = SarkisovWord.from_json(word.to_json())
    assert [l.to_json() | {"witness": None} for l in back.links] == \
        [l.to_json() | {"witness": None} for l in word.links]
    assert back.base_degrees() == word.base_degrees() == [2, 2, 2]


# -- Hirzebruch involutions --------------------------------------------------------------


def test_hirzebruch_single_link():
    F, w = hirzebruch_witnesses([4])
    assert F == F2
    word = factor_hirzebruch_involution(2, [4], w, F)
    assert len(word) == 1
    assert word.links[0].witness == hirzebruch_involution(2, w, F)


def test_hirzebruch_two_links_through_f0():
    F, w = hirzebruch_witnesses([2, 2])
    # F2 has a single irreducible quadratic, so coprime witnesses need F3
    assert F == F3 and w[0] != w[1]
    word = factor_hirzebruch_involution(2, [2, 2], w, F)
    assert [(l.source, l.target) for l in word.links] == [("F2", "F0"), ("F0", "F2")]


def test_hirzebruch_three_links():
    F, w = hirzebruch_witnesses([2, 2, 2])
    word = factor_hirzebruch_involution(3, [2, 2, 2], w, F)
    assert [l.source for l in word.links] + [word.links[-1].target] == ["F3", "F1", "F1", "F3"]


@pytest.mark.parametrize("n,degrees", [(2, [1, 3]), (2, [3, 1]), (3, [1, 2, 3]), (3, [5, 1]), (3, [2, 4])])
def test_hirzebruch_indices_and_degree_sum(n, degrees):
    F, w = hirzebruch_witnesses(degrees)
    word = factor_hirzebruch_involution(n, degrees, w, F)
    assert sum(word.base_degrees()) == 2 * n
    idx = hirzebruch_indices(n, degrees)
    partial = list(itertools.accumulate(degrees, initial=0))
    assert idx == [n - d if d <= n else d - n for d in partial]
    assert [l.source for l in word.links] == [f"F{i}" for i in idx[:-1]]
    assert [l.target for l in word.links] == [f"F{i}" for i in idx[1:]]


@pytest.mark.parametrize("field", [F2, F3, make_field(5)], ids=["F2", "F3", "F5"])
def test_hirzebruch_involution_squares_to_identity(field):
    w = [[1, 1, 1]] if field.p == 2 else [[1, 0, 1]] if field.p == 3 else [[2, 0, 1]]
    assert upoly_is_irreducible(field, w[0])
    phi = hirzebruch_involution(1, w, field)
    assert phi.compose(phi) == ChartMap.identity(field)


def test_hirzebruch_witness_errors():
    with pytest.raises(LinkError):
        factor_hirzebruch_involution(2, [2, 1], [[1, 1, 1], [1, 1]], F2)
    with pytest.raises(LinkError):
        factor_hirzebruch_involution(1, [2], [[1, 1, 1]], F2)
    with pytest.raises(LinkError):  # shared factor
        factor_hirzebruch_involution(2, [2, 2], [[1, 1, 1], [1, 1, 1]], F2)
    with pytest.raises(LinkError):  # vanishes at z = 0
        factor_hirzebruch_involution(2, [1, 3], [[0, 1], [1, 1, 0, 1]], F2)
    with pytest.raises(LinkError):  # reducible
        factor_hirzebruch_involution(2, [4], [[1, 0, 0, 0, 1]], F2)
    with pytest.raises(LinkError):  # wrong degree
        factor_hirzebruch_involution(2, [4], [[1, 1, 1]], F2)


# -- conic bundles over the exceptional pair --------------------------------------------


def test_ql_single_link():
    z = 2
    # equal witnesses reduce the involution to the factor exchange, with no base point
    with pytest.raises(LinkError):
        factor_ql_involution(F4, [([z, 1], [z, 1])])
    word = factor_ql_involution(F4, [([z, 1], [F4.mul(z, z), 1])], full_check=True)
    assert [l.link_type for l in word.links] == ["II", "iso"]
    assert word.base_degrees() == [2]


def test_ql_two_links():
    # only three linear forms over F4 miss s t = 0, so the second pair is quadratic
    word = factor_ql_involution(F4, [([2, 1], [3, 1]), ([1, 2, 1], [1, 3, 1])], full_check=True)
    assert word.base_degrees() == [2, 4]
    assert psi_image(word).is_zero()


def test_ql_degenerate_witnesses_are_rejected():
    with pytest.raises(LinkError):
        factor_ql_involution(F4, [])
    with pytest.raises(LinkError):
        factor_ql_involution(F4, [([1], [1])])
    with pytest.raises(LinkError):
        factor_ql_involution(F4, [([0, 1], [1, 1])])
    with pytest.raises(LinkError):  # common factor across the pairs
        factor_ql_involution(F4, [([2, 1], [3, 1]), ([2, 1], [1, 1])])


def test_fibre_maps_compose_like_their_representatives():
    maps = [ql_involution(F4, form(F4, [2, 1]), form(F4, [3, 1])), ql_link(F4, form(F4, [1, 1]), form(F4, [2, 1])),
            FibreMap.exchange(F4), ql_link(F4, form(F4, [1, 2, 1]), form(F4, [1, 3, 1]))]
    for f, g in itertools.product(maps, repeat=2):
        assert maps_equal((f @ g).to_rep(), compose(f.to_rep(), g.to_rep()))
    assert ql_involution(F4, form(F4, [2, 1]), form(F4, [3, 1])) @ \
        ql_involution(F4, form(F4, [2, 1]), form(F4, [3, 1])) == FibreMap.identity(F4)
    with pytest.raises(LinkError):
        FibreMap(form(F4, [2, 1]), form(F4, [1]), form(F4, [1]), form(F4, [1]))


@pytest.mark.parametrize("q", ["5", "7", "16"])
def test_twisted_involution_equals_the_conjugate(q):
    F = parse_field(q)
    P1, P2 = form(F, [1, 1]), form(F, [2, 1])
    b1, b2 = 2, 3
    phi = twisted_involution(b1, b2, P1, P2)
    assert maps_equal(phi, conjugated_involution(b1, b2, P1, P2))
    assert is_involution(phi)
    assert maps_equal(compose(phi, phi), RationalMapRep.identity(F, (1, 1)))


def test_twisted_involution_as_printed_is_not_bihomogeneous():
    F = make_field(5)
    with pytest.raises(MapError):
        twisted_involution(2, 3, form(F, [1, 1]), form(F, [2, 1]), corrected=False)


def test_ql_witnesses_are_conjugate():
    k, L, pairs = ql_witnesses([2, 4])
    assert galois_compatible(k, L, pairs)
    assert [len(a) - 1 for a, _ in pairs] == [1, 2]
    with pytest.raises(LinkError):
        ql_witnesses([3])


def test_aut_psi_image_examples():
    assert aut_psi_image("F", [2, 2])[0].is_zero()
    img, word = aut_psi_image("F", [16, 4, 4, 8])
    assert img.to_json() == {"16": 1}
    assert sum(word.base_degrees()) == 32
    img, word = aut_psi_image("S", [16, 16])
    assert img.is_zero() and word.base_degrees() == [16, 16]
    for bad in (("F", [3]), ("F", []), ("S", [3]), ("X", [2])):
        with pytest.raises(LinkError):
            aut_psi_image(*bad)


def test_factorization_error_is_a_geometry_error():
    from ratsurf.projgeom import GeometryError
    assert issubclass(FactorizationError, GeometryError)
