import itertools

import pytest

from yonkit import modules as md
from yonkit.arquiver import enumerate_indecomposables
from yonkit.complexes import (
    BoundedComplex, InfiniteGlobalDimension, ProjectiveComplex, complex_iso,
    coxeter_number, cy_check, derived_hom_dim, derived_nakayama,
    from_bounded_complex, injective_resolution_of_complex, minimal_form,
    nakayama_injective_image, projective_resolution_of_complex, regular_stalk,
    stalk_complex,
)
from yonkit.modules import (
    ProjMap, compose, minimal_projective_resolution, projective_module,
    projective_sum, simple_module,
)


def test_coxeter_table():
    assert coxeter_number("A", 3) == 4
    assert coxeter_number("A", 2) == 3
    assert coxeter_number("D", 4) == 6
    assert coxeter_number("E", 6) == 12
    assert coxeter_number("E", 7) == 18
    assert coxeter_number("E", 8) == 30


def test_minimal_form_identity_summand(a3):
    # P ==id== P in degrees 0 -> 1 cancels to nothing
    e1 = a3.stationary[1]
    pc = ProjectiveComplex(a3, {0: [1], 1: [1]},
                           {0: ProjMap(a3, [1], [1], [[{e1: a3.field.one}]])})
    m = minimal_form(pc)
    assert m.terms == {}


def test_minimal_form_keeps_minimal(a3):
    # P(1) -> P(2)? there is no map; use radical map P(2) -> P(1): a acts
    # Hom(P(2), P(1)) = e2 A e1... over A3, paths 2 -> 1: none.  Use the
    # radical inclusion P(2) -> P(1)?  Instead: d = multiplication by arrow a
    idx = a3.basis_index[(1, ("a",))]
    pc = ProjectiveComplex(a3, {0: [2], 1: [1]},
                           {0: ProjMap(a3, [2], [1], [[{idx: a3.field.one}]])})
    m = minimal_form(pc)
    assert m.terms == {0: [2], 1: [1]}
    assert m.has_radical_differentials()


def test_resolution_of_projective_stalk(a3_rad_square):
    P = projective_module(a3_rad_square, 1)
    res, eps = projective_resolution_of_complex(stalk_complex(P, 0))
    assert sorted(res.terms) == [0]
    assert res.terms[0].proj_summands == [1]


def test_resolution_of_module_stalk(a3_rad_square):
    S1 = simple_module(a3_rad_square, 1)
    res, eps = projective_resolution_of_complex(stalk_complex(S1, 0))
    assert sorted(res.terms) == [-2, -1, 0]
    assert res.cohomology_dims() == {0: 1}


def test_resolution_of_two_term_complex(a3_rad_square):
    # P(2) --incl--> P(1) placed in degrees -1, 0: quasi-iso to its cohomology
    alg = a3_rad_square
    P2, P1 = projective_module(alg, 2), projective_module(alg, 1)
    h = md.hom_basis(P2, P1)
    assert len(h) == 1
    C = BoundedComplex(alg, {-1: P2, 0: P1}, {-1: h[0]})
    res, eps = projective_resolution_of_complex(C)
    assert res.cohomology_dims() == C.cohomology_dims()
    for q, e in eps.items():
        assert e.verify()


def test_injective_resolution_of_stalk(a3_rad_square):
    S3 = simple_module(a3_rad_square, 3)
    J = injective_resolution_of_complex(stalk_complex(S3, 0), depth=4)
    assert J.cohomology_dims() == {0: 1}
    # terms are injective
    for i, t in J.terms.items():
        assert md.is_injective(t)


def test_nakayama_semisimple_is_identity(semisimple):
    c = regular_stalk(semisimple)
    nc = derived_nakayama(c)
    assert complex_iso(nc, c)
    assert cy_check(semisimple, 0, 1)["verdict"]


def test_nakayama_rejects_infinite_gd(dual_numbers):
    with pytest.raises(InfiniteGlobalDimension):
        cy_check(dual_numbers, 1, 1)


def test_nakayama_of_regular_is_injectives(a2):
    c = regular_stalk(a2)
    J = nakayama_injective_image(c)
    assert J.cohomology_dims() == {0: a2.dim}


def test_cy_a2(a2):
    # type A_2: h = 3, (h-2)/h = 1/3
    rep = cy_check(a2, 1, 3)
    assert rep["verdict"]


def test_cy_a3(a3):
    # type A_3: h = 4, (h-2)/h = 2/4
    rep = cy_check(a3, 2, 4)
    assert rep["verdict"]


def test_cy_powers_compatible(a2):
    assert cy_check(a2, 1, 3)["verdict"]
    assert cy_check(a2, 2, 6)["verdict"]


def test_cy_wrong_parameters_fail(a2):
    assert not cy_check(a2, 0, 3)["verdict"]
    assert not cy_check(a2, 2, 3)["verdict"]


def test_nu_commutes_with_shift(a3_rad_square):
    idx = a3_rad_square.basis_index[(2, ("b",))]
    pc = ProjectiveComplex(a3_rad_square, {0: [3], 1: [2]},
                           {0: ProjMap(a3_rad_square, [3], [2],
                                       [[{idx: a3_rad_square.field.one}]])})
    left = derived_nakayama(pc.shift(1))
    right = derived_nakayama(pc).shift(1)
    assert complex_iso(left, right)


def test_serre_duality_dims(a2, a3):
    # dim Hom_D(X, Y) = dim Hom_D(Y, nu X) on stalks of indecomposables
    for alg in (a2, a3):
        indecs = enumerate_indecomposables(alg)
        resolved = {}
        for i, X in enumerate(indecs):
            res, _ = projective_resolution_of_complex(stalk_complex(X, 0))
            resolved[i] = from_bounded_complex(res)
        for i, X in enumerate(indecs):
            nuX = derived_nakayama(resolved[i])
            for j, Y in enumerate(indecs):
                lhs = len(md.hom_basis(X, Y))
                rhs = derived_hom_dim(resolved[j], nuX)
                assert lhs == rhs, (i, j)


def test_complex_iso_basics(a3):
    c = regular_stalk(a3)
    assert complex_iso(c, c)
    assert not complex_iso(c, c.shift(1))
    # adding a contractible summand does not change the class
    e1 = a3.stationary[1]
    pc = ProjectiveComplex(
        a3, {0: list(a3.quiver.vertices) + [1], 1: [1]},
        {0: ProjMap(a3, list(a3.quiver.vertices) + [1], [1],
                    [[{}, {}, {}, {e1: a3.field.one}]])})
    assert complex_iso(c, pc)
