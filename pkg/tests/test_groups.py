import numpy as np
import pytest

from mlschur import groups as gr


def test_cyclic_basics():
    assert gr.cyclic(1).order == 1
    g5 = gr.cyclic(5)
    assert g5.order == 5
    assert gr.exponent(g5) == 5
    assert gr.abelian_invariants(gr.cyclic(6)).aslist() == [6]


def test_klein_four():
    v4 = gr.klein_four()
    assert v4.order == 4
    assert gr.exponent(v4) == 2
    assert gr.abelian_invariants(v4).aslist() == [2, 2]
    assert gr.commutator_subgroup(v4).order == 1


def test_dihedral_commutator_and_center():
    d3 = gr.dihedral(3)
    assert d3.order == 6
    # direct construction oracle: commutators generate <b> = {1, b, b^2}
    comm = gr.commutator_subgroup(d3)
    assert comm.order == 3
    sub_group, _ = comm.as_group()
    assert gr.abelian_invariants(sub_group).aslist() == [3]
    # brute-force center scan for D4
    d4 = gr.dihedral(4)
    brute = [z for z in d4.elements()
             if all(d4.mul(z, x) == d4.mul(x, z) for x in d4.elements())]
    assert len(brute) == 2
    assert gr.center(d4).order == 2
    # degenerate case agrees with the Klein group
    d2 = gr.dihedral(2)
    assert d2.order == 4
    assert gr.abelian_invariants(d2).aslist() == [2, 2]


def test_dicyclic():
    q2 = gr.dicyclic(2)
    assert q2.order == 8
    involutions = [x for x in q2.elements() if gr.element_order(q2, x) == 2]
    assert len(involutions) == 1
    a = q2.generator_labels["a"]
    b = q2.generator_labels["b"]
    assert gr.element_order(q2, a) == 4
    assert gr.element_order(q2, b) == 4
    # a^2 = b^n and aba^{-1} = b^{-1}
    assert q2.mul(a, a) == q2.power(b, 2)
    assert q2.conj(a, b) == q2.inv(b)
    q3 = gr.dicyclic(3)
    comm = gr.commutator_subgroup(q3)
    assert comm.order == 3
    assert set(comm.members) == {q3.identity, q3.power(b, 2), q3.power(b, 4)}


def test_metacyclic():
    m = gr.metacyclic(8, 3, 2)
    assert m.order == 24
    a, b = m.generator_labels["a"], m.generator_labels["b"]
    assert m.mul(m.mul(m.inv(a), b), a) == m.power(b, 2)
    assert gr.metacyclic(8, 5, 2).order == 40
    for n in (3, 4, 5):
        assert np.array_equal(gr.metacyclic(2, n, n - 1).cayley, gr.dihedral(n).cayley)
    with pytest.raises(ValueError):
        gr.metacyclic(3, 5, 2)  # 2^3 = 8 != 1 mod 5
    with pytest.raises(ValueError):
        gr.metacyclic(2, 4, 2)  # alpha not invertible


def test_direct_product():
    v4 = gr.direct_product(gr.cyclic(2), gr.cyclic(2))
    assert v4.order == 4
    assert gr.abelian_invariants(v4).aslist() == [2, 2]
    q2z3 = gr.direct_product(gr.dicyclic(2), gr.cyclic(3))
    assert q2z3.order == 24
    assert len(q2z3.marked_generators()) == 3
    assert gr.abelian_invariants(gr.direct_product(gr.cyclic(4), gr.cyclic(6))).aslist() == [2, 12]


def test_sl23():
    # independent oracle: count 2x2 matrices over F_3 with det 1
    count = sum(1 for a in range(3) for b in range(3) for c in range(3) for d in range(3)
                if (a * d - b * c) % 3 == 1)
    assert count == 24
    g = gr.sl_2_3()
    assert g.order == 24
    comm = gr.commutator_subgroup(g)
    assert comm.order == 8
    q, _ = gr.quotient(g, comm)
    assert gr.abelian_invariants(q).aslist() == [3]


def test_subgroup_quotient_closure():
    d3 = gr.dihedral(3)
    b = d3.generator_labels["b"]
    sub = gr.subgroup_generated(d3, [b])
    assert sub.order == 3
    q, proj = gr.quotient(d3, sub)
    assert q.order == 2
    assert proj.is_surjective()
    assert set(proj.kernel().members) == set(sub.members)
    # closure oracle: conjugates of the reflection a in D4 are {a, a*b^2},
    # whose closure is the Klein subgroup {1, b^2, a, a*b^2} of order 4
    d4 = gr.dihedral(4)
    a, b = d4.generator_labels["a"], d4.generator_labels["b"]
    ncl = gr.normal_closure(d4, [a])
    assert set(ncl.members) == {d4.identity, d4.power(b, 2), a, d4.mul(a, d4.power(b, 2))}
    # in odd dihedral groups the closure of the reflection is everything
    d5 = gr.dihedral(5)
    assert gr.normal_closure(d5, [d5.generator_labels["a"]]).order == 10


def test_quotient_rejects_non_normal():
    d3 = gr.dihedral(3)
    a = d3.generator_labels["a"]
    sub = gr.subgroup_generated(d3, [a])
    with pytest.raises(ValueError):
        gr.quotient(d3, sub)


def test_abelian_invariants_relabeling_invariant():
    rng = np.random.default_rng(3)
    g = gr.direct_product(gr.cyclic(2), gr.cyclic(4))
    base = gr.abelian_invariants(g).aslist()
    assert base == [2, 4]
    for _ in range(5):
        perm = rng.permutation(g.order)
        inv_perm = np.argsort(perm)
        relabeled = perm[g.cayley[inv_perm[:, None], inv_perm[None, :]]]
        h = gr.FiniteGroup(relabeled, "relabeled")
        assert gr.abelian_invariants(h).aslist() == base


def test_abelian_invariants_rejects_nonabelian():
    with pytest.raises(ValueError):
        gr.abelian_invariants(gr.dihedral(3))


def test_dual_and_hom_invariants():
    a22 = gr.AbelianInvariants((2, 2))
    assert gr.dual_invariants(a22).aslist() == [2, 2]
    assert gr.dual_invariants(gr.AbelianInvariants(())).aslist() == []
    assert gr.hom_invariants_to_cyclic(a22, 2).aslist() == [2, 2]
    # brute-force oracle: homs Z6 -> Z4 are x with 6x = 0 mod 4
    count = sum(1 for x in range(4) if (6 * x) % 4 == 0)
    assert count == 2
    assert gr.hom_invariants_to_cyclic(gr.AbelianInvariants((6,)), 4).aslist() == [2]
    assert gr.hom_invariants_to_cyclic(gr.AbelianInvariants((5,)), 1).aslist() == []


def test_conjugation_convention():
    d3 = gr.dihedral(3)
    a, b = d3.generator_labels["a"], d3.generator_labels["b"]
    assert gr.conjugate(d3, a, b) == d3.inv(b)
    assert gr.conjugate(d3, d3.identity, b) == b
    q2 = gr.dicyclic(2)
    assert gr.element_order(q2, q2.generator_labels["a"]) == 4


def test_conjugation_action_law():
    rng = np.random.default_rng(17)
    for g in (gr.dihedral(4), gr.dicyclic(3), gr.sl_2_3()):
        for _ in range(50):
            x, y, z = (int(v) for v in rng.integers(0, g.order, 3))
            assert g.conj(x, g.conj(y, z)) == g.conj(g.mul(x, y), z)


def test_group_file_round_trip():
    g = gr.dicyclic(2)
    text = gr.format_group_file(g)
    h = gr.parse_group_file(text)
    assert h.order == g.order
    assert np.array_equal(h.cayley, g.cayley)
    assert h.label == g.label
    with pytest.raises(ValueError):
        gr.parse_group_file("group X\norder 2\ntable\n0 1\n")
    with pytest.raises(ValueError):
        gr.parse_group_file("band X\norder 1\ntable\n0\n")


def test_automorphisms_v4():
    v4 = gr.klein_four()
    auts = gr.automorphisms(v4)
    assert len(auts) == 6  # GL(2, 2)


def test_extend_hom():
    d3 = gr.dihedral(3)
    z2 = gr.cyclic(2)
    a, b = d3.generator_labels["a"], d3.generator_labels["b"]
    hom = gr.extend_hom(d3, z2, {a: 1, b: 0})
    assert hom is not None
    assert hom.kernel().order == 3
    assert gr.extend_hom(d3, z2, {a: 0, b: 1}) is None
