import numpy as np
import pytest

from mlschur import groups as gr
from mlschur import mla


def v4_a_star():
    v4 = gr.klein_four()
    a = v4.generator_labels["a"]
    b = v4.generator_labels["b"]
    return v4, mla.expand_star_from_generators(v4, {(a, b): a}), a, b


def test_v4_a_star_expansion_table():
    v4, star, a, b = v4_a_star()
    ab = v4.mul(a, b)
    e = v4.identity
    # expansion forced by the axioms: every distinct non-identity pair maps to a
    assert star.value(a, b) == a
    assert star.value(b, a) == a  # antisymmetry, a has order 2
    assert star.value(a, ab) == a
    assert star.value(ab, b) == a
    assert star.value(b, ab) == a
    assert star.value(ab, a) == a
    for x in v4.elements():
        assert star.value(x, x) == e
        assert star.value(x, e) == e
        assert star.value(e, x) == e
    assert mla.check_star_axioms(v4, star) is None


def test_bad_star_reports_witness():
    v4 = gr.klein_four()
    n = v4.order
    table = np.tile(np.arange(n)[:, None], (1, n))  # x*y = x
    bad = mla.check_star_axioms(v4, mla.StarTable(v4, table))
    assert bad is not None
    assert bad.axiom.startswith("axiom 1")
    assert bad.witness == (1,)


def test_commutator_star_on_d3():
    d3 = gr.dihedral(3)
    star = mla.commutator_star(d3)
    assert mla.check_star_axioms(d3, star) is None
    a, b = d3.generator_labels["a"], d3.generator_labels["b"]
    assert star.value(a, b) == d3.power(b, -2)
    assert mla.classify_star(d3, star) == "improper"


def test_trivial_and_commutator_stars():
    d4 = gr.dihedral(4)
    assert (mla.trivial_star(d4).star == d4.identity).all()
    v4 = gr.klein_four()
    assert np.array_equal(mla.commutator_star(v4).star, mla.trivial_star(v4).star)


def test_derived_identities_follow_from_axioms():
    v4, star, _, _ = v4_a_star()
    assert mla.check_derived_identities(v4, star) is None
    for g in (gr.dihedral(3), gr.dicyclic(2)):
        assert mla.check_derived_identities(g, mla.trivial_star(g)) is None
        assert mla.check_derived_identities(g, mla.commutator_star(g)) is None


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_dihedral_b_power_structures(n):
    dn = gr.dihedral(n)
    a, b = dn.generator_labels["a"], dn.generator_labels["b"]
    for i in range(1, n + 1):
        star = mla.expand_star_from_generators(dn, {(a, b): dn.power(b, i)})
        assert mla.check_star_axioms(dn, star) is None
        assert mla.check_derived_identities(dn, star) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dicyclic_b_power_structures(n):
    # a*(a^2) = 1 is forced, and a^2 = b^n, so a*b = b^i needs b^{ni} = 1:
    # exactly the even exponents i give structures
    qn = gr.dicyclic(n)
    a, b = qn.generator_labels["a"], qn.generator_labels["b"]
    for i in range(1, 2 * n):
        if (n * i) % (2 * n) == 0:
            star = mla.expand_star_from_generators(qn, {(a, b): qn.power(b, i)})
            assert mla.check_star_axioms(qn, star) is None
            assert mla.check_derived_identities(qn, star) is None
        else:
            with pytest.raises(mla.StarInconsistency):
                mla.expand_star_from_generators(qn, {(a, b): qn.power(b, i)})


def test_star_from_equivariant_hom_inclusion_and_trivial():
    d3 = gr.dihedral(3)
    comm = gr.commutator_subgroup(d3)
    inclusion = {x: x for x in comm.members}
    star = mla.star_from_equivariant_hom(d3, inclusion)
    assert np.array_equal(star.star, mla.commutator_star(d3).star)
    constant = {x: d3.identity for x in comm.members}
    star = mla.star_from_equivariant_hom(d3, constant)
    assert np.array_equal(star.star, mla.trivial_star(d3).star)


def test_sl23_equivariant_homs():
    g = gr.sl_2_3()
    stars = mla.equivariant_hom_stars(g)
    kinds = sorted(mla.classify_star(g, s) for s in stars)
    assert kinds == ["improper", "trivial"]


def test_enumerate_stars_cyclic_only_trivial():
    for n in (1, 2, 5, 7):
        structures = mla.enumerate_stars(gr.cyclic(n))
        assert len(structures) == 1
        assert structures[0].classification == "trivial"


def test_enumerate_stars_v4():
    v4 = gr.klein_four()
    structures = mla.enumerate_stars(v4)
    tables = {s.star.key() for s in structures}
    assert mla.trivial_star(v4).key() in tables
    _, a_star, _, _ = v4_a_star()
    assert a_star.key() in tables
    assert any(s.classification == "proper" for s in structures)
    for s in structures:
        assert mla.check_derived_identities(v4, s.star) is None
        # antisymmetry on every valid table
        n = v4.order
        for x in range(n):
            for y in range(n):
                assert v4.mul(s.star.value(x, y), s.star.value(y, x)) == v4.identity


def test_enumerate_stars_d3():
    d3 = gr.dihedral(3)
    structures = mla.enumerate_stars(d3)
    tables = {s.star.key() for s in structures}
    assert mla.commutator_star(d3).key() in tables
    a, b = d3.generator_labels["a"], d3.generator_labels["b"]
    for i in (1, 2, 3):
        star = mla.expand_star_from_generators(d3, {(a, b): d3.power(b, i)})
        assert star.key() in tables


def test_expand_restriction_round_trip():
    d4 = gr.dihedral(4)
    for structure in mla.enumerate_stars(d4):
        gens = gr.generating_set(d4)
        assignments = {}
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                assignments[(gens[i], gens[j])] = structure.star.value(gens[i], gens[j])
        again = mla.expand_star_from_generators(d4, assignments, gens=gens)
        assert np.array_equal(again.star, structure.star.star)


def test_classify_star():
    v4, a_star, _, _ = v4_a_star()
    assert mla.classify_star(v4, a_star) == "proper"
    assert mla.classify_star(v4, mla.trivial_star(v4)) == "trivial"
    d3 = gr.dihedral(3)
    assert mla.classify_star(d3, mla.commutator_star(d3)) == "improper"


def test_star_image_subgroups():
    v4, a_star, a, _ = v4_a_star()
    img = mla.star_image_subgroup(v4, a_star)
    assert set(img.members) == {v4.identity, a}
    prod = mla.star_commutator_product(v4, a_star)
    assert prod.order == 2
    d3 = gr.dihedral(3)
    a3, b3 = d3.generator_labels["a"], d3.generator_labels["b"]
    star = mla.expand_star_from_generators(d3, {(a3, b3): b3})
    prod = mla.star_commutator_product(d3, star)
    assert set(prod.members) == {d3.identity, b3, d3.power(b3, 2)}
    triv = mla.trivial_star(d3)
    assert mla.star_image_subgroup(d3, triv).order == 1
    assert set(mla.star_commutator_product(d3, triv).members) == set(
        gr.commutator_subgroup(d3).members)


def test_enumeration_budget():
    z2 = gr.cyclic(2)
    g = gr.direct_product(gr.direct_product(z2, z2), gr.direct_product(z2, z2))
    with pytest.raises(mla.BudgetExceeded):
        mla.enumerate_stars(g, budget=100_000)


def test_star_file_round_trip():
    v4, star, _, _ = v4_a_star()
    text = mla.format_star_file(star)
    again = mla.parse_star_file(text, v4)
    assert np.array_equal(again.star, star.star)
    with pytest.raises(ValueError):
        mla.parse_star_file(text, gr.cyclic(5))


def test_star_spec_sugar():
    v4, star, a, b = v4_a_star()
    parsed = mla.parse_star_spec(v4, "a*b=a")
    assert np.array_equal(parsed.star, star.star)
    d4 = gr.dihedral(4)
    s2 = mla.parse_star_spec(d4, "a*b=b^2")
    bb = d4.generator_labels["b"]
    assert s2.value(d4.generator_labels["a"], bb) == d4.power(bb, 2)
    assert (mla.parse_star_spec(d4, "trivial").star == d4.identity).all()
    assert np.array_equal(mla.parse_star_spec(d4, "commutator").star,
                          mla.commutator_star(d4).star)
    with pytest.raises(ValueError):
        mla.parse_star_spec(d4, "a*c=b")
