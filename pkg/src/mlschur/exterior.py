"""Non-abelian exterior squares, Schur multipliers and the Jacobi subgroup.

The square of K is enumerated from the presentation on |K|^2 symbols
w[x,y] with the defining relator families

    w[x,x],   w[xy,z]^-1 w[xy',xz'] w[x,z],   w[x,yz]^-1 w[x,y] w[yx',yz']

(primed entries conjugated, xy' = x y x^{-1}).  The evaluation map onto
commutators doubles as a self-test of the conjugation convention: with the
opposite convention it fails to be a homomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import groups as gr
from .groups import FiniteGroup, GroupHom, Subgroup
from .mla import StarTable
from .presentation import Presentation, todd_coxeter

_DEFAULT_MAX_COSETS = 200_000
_MAX_BASE_ORDER = 60

_cache: dict[str, "ExteriorSquare"] = {}


@dataclass
class ExteriorSquare:
    base: FiniteGroup
    square: FiniteGroup
    wedge: np.ndarray  # (x, y) -> element index of x wedge y in square
    commutator_hom: GroupHom  # square -> base, x wedge y -> [x, y]

    def wedge_of(self, x: int, y: int) -> int:
        return int(self.wedge[x, y])


@dataclass
class JacobiData:
    generated: Subgroup
    closure: Subgroup
    coincide: bool


def _wedge_relators(k: FiniteGroup):
    n = k.order
    conj = k.conj_table()
    cay = k.cayley
    rels = []
    for x in range(n):
        rels.append((x * n + x + 1,))
    idx = np.arange(n)
    x, y, z = np.meshgrid(idx, idx, idx, indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    # w[xy,z]^-1 · w[^xy, ^xz] · w[x,z]
    first = cay[x, y] * n + z
    second = conj[x, y] * n + conj[x, z]
    third = x * n + z
    for a, b, c in zip(first, second, third):
        rels.append((-(int(a) + 1), int(b) + 1, int(c) + 1))
    # w[x,yz]^-1 · w[x,y] · w[^yx, ^yz]
    first = x * n + cay[y, z]
    second = x * n + y
    third = conj[y, x] * n + conj[y, z]
    for a, b, c in zip(first, second, third):
        rels.append((-(int(a) + 1), int(b) + 1, int(c) + 1))
    return rels


def exterior_square(k: FiniteGroup, max_cosets: int = _DEFAULT_MAX_COSETS) -> ExteriorSquare:
    """The group generated by symbols x^y with the universal commutator relations."""
    if k.order > _MAX_BASE_ORDER:
        raise ValueError(f"exterior square limited to base order <= {_MAX_BASE_ORDER}")
    key = f"{k.digest()}"
    if key in _cache:
        return _cache[key]
    n = k.order
    names = tuple(f"w{i}" for i in range(n * n))
    pres = Presentation(names, tuple(_wedge_relators(k)))
    square, evaluate = todd_coxeter(pres, max_cosets=max_cosets, label=f"wedge2({k.label})")
    wedge = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            wedge[x, y] = evaluate([x * n + y + 1])
    gen_images: dict[int, int] = {}
    for x in range(n):
        for y in range(n):
            el = int(wedge[x, y])
            img = k.commutator(x, y)
            if gen_images.setdefault(el, img) != img:
                raise AssertionError("commutator evaluation is not well defined")
    hom = gr.extend_hom(square, k, gen_images)
    if hom is None:
        raise AssertionError("conjugation-convention self-test failed: evaluation "
                             "onto commutators is not a homomorphism")
    out = ExteriorSquare(k, square, wedge, hom)
    # exactness of 1 -> M(K) -> square -> [K,K] -> 1
    comm = gr.commutator_subgroup(k)
    if hom.kernel().order * comm.order != square.order:
        raise AssertionError("order equation |square| = |M|·|[K,K]| failed")
    if set(hom.image().members) != set(comm.members):
        raise AssertionError("evaluation map does not land onto [K,K]")
    _cache[key] = out
    return out


def schur_multiplier(k: FiniteGroup, max_cosets: int = _DEFAULT_MAX_COSETS) -> gr.AbelianInvariants:
    """M(K) as the kernel of the commutator evaluation on the exterior square."""
    ext = exterior_square(k, max_cosets=max_cosets)
    ker = ext.commutator_hom.kernel()
    sub_group, emb = ker.as_group()
    if not sub_group.is_abelian():
        raise ValueError("kernel of the evaluation map is not abelian (construction bug)")
    # centrality of the multiplier inside the square
    sq = ext.square
    for z in ker.members:
        if not np.array_equal(sq.cayley[z, :], sq.cayley[:, z]):
            raise ValueError("multiplier is not central in the square (construction bug)")
    return gr.abelian_invariants(sub_group)


def attach_phi(ext: ExteriorSquare, star: StarTable) -> GroupHom:
    """The hom square -> base sending x^y to x*y; verifies every defining relator."""
    k = ext.base
    if star.group is not k and star.group.digest() != k.digest():
        raise ValueError("star table belongs to a different group")
    n = k.order
    s = star.star
    cay = k.cayley
    conj = k.conj_table()
    e = k.identity
    if (s[np.arange(n), np.arange(n)] != e).any():
        raise ValueError("star violates relator family w[x,x]: diagonal not trivial")
    idx = np.arange(n)
    x, y, z = np.meshgrid(idx, idx, idx, indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    bad = s[cay[x, y], z] != cay[s[conj[x, y], conj[x, z]], s[x, z]]
    if bad.any():
        w = int(np.argmax(bad))
        wit = tuple(int(v) for v in np.unravel_index(w, (n, n, n)))
        raise ValueError(f"star violates relator family (xy,z) at {wit}")
    bad = s[x, cay[y, z]] != cay[s[x, y], s[conj[y, x], conj[y, z]]]
    if bad.any():
        w = int(np.argmax(bad))
        wit = tuple(int(v) for v in np.unravel_index(w, (n, n, n)))
        raise ValueError(f"star violates relator family (x,yz) at {wit}")
    gen_images: dict[int, int] = {}
    for a in range(n):
        for b in range(n):
            el = int(ext.wedge[a, b])
            img = int(s[a, b])
            if gen_images.setdefault(el, img) != img:
                raise ValueError("star values are not constant on coincident wedge symbols")
    hom = gr.extend_hom(ext.square, k, gen_images)
    if hom is None:
        raise ValueError("star does not define a homomorphism on the square")
    return hom


def j_subgroup(ext: ExteriorSquare, star: StarTable) -> JacobiData:
    """Subgroup generated by ((x*y)^(yz'))((y*z)^(zx'))((z*x)^(xy')) for all triples."""
    k = ext.base
    n = k.order
    s = star.star
    conj = k.conj_table()
    sq = ext.square
    idx = np.arange(n)
    x, y, z = np.meshgrid(idx, idx, idx, indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    t1 = ext.wedge[s[x, y], conj[y, z]]
    t2 = ext.wedge[s[y, z], conj[z, x]]
    t3 = ext.wedge[s[z, x], conj[x, y]]
    prod = sq.cayley[sq.cayley[t1, t2], t3]
    gens = sorted(set(int(v) for v in prod))
    generated = gr.subgroup_generated(sq, gens)
    closure = gr.normal_closure(sq, gens)
    return JacobiData(generated, closure, set(generated.members) == set(closure.members))


def mod_j_dual_invariants(ext: ExteriorSquare, star: StarTable) -> gr.AbelianInvariants:
    """Invariants of Hom(square/J, C^*): abelianized quotient by the closure of J."""
    data = j_subgroup(ext, star)
    q, _ = gr.quotient(ext.square, data.closure)
    derived = gr.commutator_subgroup(q)
    ab, _ = gr.quotient(q, derived)
    return gr.dual_invariants(gr.abelian_invariants(ab))
