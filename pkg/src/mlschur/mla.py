"""Multiplicative Lie brackets on finite groups.

A bracket is an n x n table star[x][y] = x*y subject to five axioms
(alternating, two expansion laws, a Jacobi-type identity, conjugation
equivariance).  Checks are full vectorized scans; enumeration backtracks
over values on pairs of marked generators and validates the expansion.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from . import groups as gr
from .groups import FiniteGroup, Subgroup


class StarInconsistency(ValueError):
    def __init__(self, axiom: str, witness: tuple):
        super().__init__(f"bracket violates {axiom} at {witness}")
        self.axiom = axiom
        self.witness = witness


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class StarTable:
    group: FiniteGroup
    star: np.ndarray  # n x n element indices

    def __post_init__(self):
        arr = np.asarray(self.star, dtype=np.int64)
        if arr.shape != (self.group.order, self.group.order):
            raise ValueError("star table shape does not match the group")
        object.__setattr__(self, "star", arr)

    def value(self, x: int, y: int) -> int:
        return int(self.star[x, y])

    def key(self) -> bytes:
        return self.star.tobytes()


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def __bool__(self):  # a violation is falsy as a "check passed" answer
        return False


@dataclass(frozen=True)
class MlaStructure:
    group: FiniteGroup
    star: StarTable
    classification: str


def _first_witness(mask: np.ndarray, shape) -> tuple:
    flat = int(np.argmax(mask))
    return tuple(int(v) for v in np.unravel_index(flat, shape))


def check_star_axioms(g: FiniteGroup, star) -> Violation | None:
    """None when all five axioms hold; otherwise the first violation.

    Axioms are checked in order 1..5 and witnesses are lexicographically
    first, so the report is deterministic.
    """
    s = star.star if isinstance(star, StarTable) else np.asarray(star, dtype=np.int64)
    n = g.order
    c = g.cayley
    cj = g.conj_table()
    e = g.identity
    diag = s[np.arange(n), np.arange(n)]
    if (diag != e).any():
        x = int(np.argmax(diag != e))
        return Violation("axiom 1 (x*x = 1)", (x,))
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    shape = (n, n, n)
    lhs = s[x, c[y, z]]
    rhs = c[s[x, y], cj[y, s[x, z]]]
    bad = lhs != rhs
    if bad.any():
        return Violation("axiom 2 (x*(yz) expansion)", _first_witness(bad, shape))
    lhs = s[c[x, y], z]
    rhs = c[cj[x, s[y, z]], s[x, z]]
    bad = lhs != rhs
    if bad.any():
        return Violation("axiom 3 ((xy)*z expansion)", _first_witness(bad, shape))
    t1 = s[s[x, y], cj[y, z]]
    t2 = s[s[y, z], cj[z, x]]
    t3 = s[s[z, x], cj[x, y]]
    bad = c[c[t1, t2], t3] != e
    if bad.any():
        return Violation("axiom 4 (Jacobi product)", _first_witness(bad, shape))
    bad = cj[z, s[x, y]] != s[cj[z, x], cj[z, y]]
    if bad.any():
        return Violation("axiom 5 (conjugation equivariance)", _first_witness(bad, shape))
    return None


def check_derived_identities(g: FiniteGroup, star) -> Violation | None:
    """The five consequences of the axioms, scanned on all tuples."""
    s = star.star if isinstance(star, StarTable) else np.asarray(star, dtype=np.int64)
    n = g.order
    c = g.cayley
    cj = g.conj_table()
    inv = g.inverses
    e = g.identity
    if (s[e, :] != e).any() or (s[:, e] != e).any():
        idx = int(np.argmax(s[e, :] != e)) if (s[e, :] != e).any() else int(np.argmax(s[:, e] != e))
        return Violation("derived 1 (1*x = x*1 = 1)", (idx,))
    x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    x, y = x.ravel(), y.ravel()
    bad = c[s[x, y], s[y, x]] != e
    if bad.any():
        return Violation("derived 2 (antisymmetry)", _first_witness(bad, (n, n)))
    comm = g.commutator_table()
    # derived 3 quantifies over 4-tuples; chunk over the first index
    for x0 in range(n):
        u, v, w = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        u, v, w = u.ravel(), v.ravel(), w.ravel()
        lhs = cj[s[x0, u], s[v, w]]
        rhs = cj[comm[x0, u], s[v, w]]
        bad = lhs != rhs
        if bad.any():
            wit = _first_witness(bad, (n, n, n))
            return Violation("derived 3 (conjugation by x*y vs [x,y])", (x0,) + wit)
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    bad = comm[s[x, y], z] != s[comm[x, y], z]
    if bad.any():
        return Violation("derived 4 ([(x*y),z] = [x,y]*z)", _first_witness(bad, (n, n, n)))
    x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    x, y = x.ravel(), y.ravel()
    bad = s[inv[x], y] != cj[inv[x], inv[s[x, y]]]
    if bad.any():
        return Violation("derived 5 (inverse in first slot)", _first_witness(bad, (n, n)))
    bad = s[x, inv[y]] != cj[inv[y], inv[s[x, y]]]
    if bad.any():
        return Violation("derived 5 (inverse in second slot)", _first_witness(bad, (n, n)))
    return None


def trivial_star(g: FiniteGroup) -> StarTable:
    return StarTable(g, np.full((g.order, g.order), g.identity, dtype=np.int64))


def commutator_star(g: FiniteGroup) -> StarTable:
    return StarTable(g, g.commutator_table())


def expand_star_from_generators(g: FiniteGroup, assignments: dict[tuple[int, int], int],
                                gens: list[int] | None = None, validate: bool = True) -> StarTable:
    """Extend bracket values on generator pairs to the whole group.

    Uses the two expansion axioms along breadth-first decompositions, with
    antisymmetry and x*x = 1 filling the generator-pair table.  The result
    is re-validated; an inconsistent seed raises StarInconsistency.
    """
    if gens is None:
        gens = gr.generating_set(g)
    gens = list(dict.fromkeys(int(x) for x in gens))
    if len(gr._closure(g, gens)) != g.order:
        raise ValueError("given generators do not generate the group")
    e = g.identity
    pair: dict[tuple[int, int], int] = {}
    for gi in gens:
        pair[(gi, gi)] = e
    for (a, b), v in assignments.items():
        if a not in gens or b not in gens:
            raise ValueError("assignment uses a non-generator element")
        pair[(a, b)] = int(v)
    for a in gens:
        for b in gens:
            if (a, b) not in pair:
                if (b, a) in pair:
                    pair[(a, b)] = g.inv(pair[(b, a)])
                else:
                    raise ValueError(f"no assignment for generator pair ({a}, {b})")
    # breadth-first decomposition x = parent * gen
    parent = {e: None}
    order_bfs = [e]
    head = 0
    while head < len(order_bfs):
        x = order_bfs[head]
        head += 1
        for gen in gens:
            y = g.mul(x, gen)
            if y not in parent:
                parent[y] = (x, gen)
                order_bfs.append(y)
    n = g.order
    star1 = {}  # (gen, y) -> value
    for gen in gens:
        star1[(gen, e)] = e
        for h in gens:
            star1[(gen, h)] = pair[(gen, h)]
    for y in order_bfs:
        if y == e or y in gens:
            continue
        u, h = parent[y]
        for gen in gens:
            # x*(u h) = (x*u) · u(x*h)u^{-1}
            star1[(gen, y)] = g.mul(star1[(gen, u)], g.conj(u, star1[(gen, h)]))
    table = np.full((n, n), e, dtype=np.int64)
    for y in range(n):
        for gen in gens:
            table[gen, y] = star1[(gen, y)]
    for x in order_bfs:
        if x == e or x in gens:
            continue
        u, h = parent[x]
        # (u h)*y = u(h*y)u^{-1} · (u*y)
        table[x, :] = g.cayley[g.conj_table()[u, table[h, :]], table[u, :]]
    table[e, :] = e
    result = StarTable(g, table)
    if validate:
        bad = check_star_axioms(g, result)
        if bad is not None:
            raise StarInconsistency(bad.axiom, bad.witness)
    return result


def classify_star(g: FiniteGroup, star: StarTable) -> str:
    s = star.star
    if (s == g.identity).all():
        return "trivial"
    if np.array_equal(s, commutator_star(g).star):
        return "improper"
    return "proper"


def enumerate_stars(g: FiniteGroup, budget: int = 1_000_000) -> list[MlaStructure]:
    """All valid bracket tables, by exhausting values on generator pairs."""
    gens = list(dict.fromkeys(gr.generating_set(g)))
    pairs = [(gens[i], gens[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))]
    total = g.order ** len(pairs)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate assignments exceed budget {budget}")
    out = []
    for values in itertools.product(range(g.order), repeat=len(pairs)):
        assignments = {p: v for p, v in zip(pairs, values)}
        try:
            star = expand_star_from_generators(g, assignments, gens=gens)
        except StarInconsistency:
            continue
        out.append(MlaStructure(g, star, classify_star(g, star)))
    return out


def star_from_equivariant_hom(g: FiniteGroup, phi_images: dict[int, int]) -> StarTable:
    """Bracket x*y = phi([x, y]) for an equivariant hom phi on the derived subgroup.

    phi_images maps every element of [G, G] (parent indices) to its image.
    Rejects maps that are not homomorphisms, are not equivariant, or whose
    induced bracket fails an axiom.
    """
    comm = gr.commutator_subgroup(g)
    if set(phi_images) != set(comm.members):
        raise ValueError("phi must be defined exactly on the derived subgroup")
    for a in comm.members:
        for b in comm.members:
            if phi_images[g.mul(a, b)] != g.mul(phi_images[a], phi_images[b]):
                raise ValueError("phi is not a homomorphism")
    for x in g.elements():
        for a in comm.members:
            if phi_images[g.conj(x, a)] != g.conj(x, phi_images[a]):
                raise ValueError("phi is not equivariant")
    n = g.order
    comm_table = g.commutator_table()
    img = np.zeros(n, dtype=np.int64)
    for a, v in phi_images.items():
        img[a] = v
    table = img[comm_table]
    star = StarTable(g, table)
    bad = check_star_axioms(g, star)
    if bad is not None:
        raise StarInconsistency(bad.axiom, bad.witness)
    return star


def equivariant_hom_stars(g: FiniteGroup) -> list[StarTable]:
    """All brackets induced by equivariant homs [G,G] -> G (complete when M(G) = 1)."""
    comm = gr.commutator_subgroup(g)
    sub_group, emb = comm.as_group()
    sub_gens = gr.generating_set(sub_group)
    out = []
    for images in itertools.product(range(g.order), repeat=len(sub_gens)):
        gen_map = {emb[s]: images[i] for i, s in enumerate(sub_gens)}
        # extend over the subgroup by right multiplication
        full = {g.identity: g.identity}
        frontier = [g.identity]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for s_loc, img in zip(sub_gens, images):
                y = g.mul(x, emb[s_loc])
                val = g.mul(full[x], img)
                if y in full:
                    if full[y] != val:
                        ok = False
                        break
                else:
                    full[y] = val
                    frontier.append(y)
        if not ok or set(full) != set(comm.members):
            continue
        try:
            out.append(star_from_equivariant_hom(g, full))
        except (ValueError, StarInconsistency):
            continue
    uniq = {}
    for star in out:
        uniq.setdefault(star.key(), star)
    return list(uniq.values())


def is_lie_simple(g: FiniteGroup, budget: int = 1_000_000) -> bool:
    """True when no bracket on G is proper.

    With trivial Schur multiplier every bracket comes from an equivariant
    hom on the derived subgroup, so that enumeration decides; otherwise the
    generator-pair enumeration runs (budget-guarded).
    """
    from . import exterior

    multiplier = exterior.schur_multiplier(g)
    if not multiplier.factors:
        stars = equivariant_hom_stars(g)
        return all(classify_star(g, star) != "proper" for star in stars)
    gens = list(dict.fromkeys(gr.generating_set(g)))
    npairs = len(gens) * (len(gens) - 1) // 2
    if g.order ** npairs > budget:
        raise BudgetExceeded(
            f"{g.order ** npairs} candidates exceed budget {budget} and M(G) is nontrivial"
        )
    for structure in enumerate_stars(g, budget=budget):
        if structure.classification == "proper":
            return False
    return True


def star_image_subgroup(g: FiniteGroup, star: StarTable) -> Subgroup:
    """The subgroup generated by all bracket values x*y."""
    vals = sorted(set(int(v) for v in star.star.ravel()))
    return gr.subgroup_generated(g, vals)


def star_commutator_product(g: FiniteGroup, star: StarTable) -> Subgroup:
    """The subgroup generated by all bracket values and all commutators."""
    vals = set(int(v) for v in star.star.ravel())
    vals |= {g.commutator(x, y) for x in g.elements() for y in g.elements()}
    return gr.subgroup_generated(g, sorted(vals))


# -- text formats ------------------------------------------------------------


def format_star_file(star: StarTable) -> str:
    g = star.group
    lines = [f"star {g.label}", f"order {g.order}", "table"]
    for row in star.star:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def parse_star_file(text: str, g: FiniteGroup) -> StarTable:
    lines = text.splitlines()
    if len(lines) < 3 or not lines[0].startswith("star "):
        raise ValueError("line 1 must be 'star <group-label>'")
    if not lines[1].rstrip().startswith("order "):
        raise ValueError("line 2 must be 'order <n>'")
    n = int(lines[1].split()[1])
    if n != g.order:
        raise ValueError(f"star table order {n} does not match group order {g.order}")
    if lines[2].rstrip() != "table":
        raise ValueError("line 3 must be 'table'")
    rows = []
    for line in lines[3:3 + n]:
        parts = [int(p) for p in line.split()]
        if len(parts) != n:
            raise ValueError("bad star table row length")
        rows.append(parts)
    if len(rows) != n:
        raise ValueError("incomplete star table")
    return StarTable(g, np.array(rows, dtype=np.int64))


_ASSIGN_RE = re.compile(r"^\s*([A-Za-z_]\w*)\s*\*\s*([A-Za-z_]\w*)\s*=\s*(.+?)\s*$")
_TERM_RE = re.compile(r"([A-Za-z_]\w*)(?:\^(-?\d+))?")


def _eval_generator_word(g: FiniteGroup, text: str) -> int:
    pos = 0
    acc = g.identity
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TERM_RE.match(text, pos)
        if not m:
            raise ValueError(f"bad term in generator word: {text[pos:]!r}")
        name, exp = m.group(1), m.group(2)
        if name == "1" or name.lower() == "e":
            pos = m.end()
            continue
        if name not in g.generator_labels:
            raise ValueError(f"unknown generator {name!r} in star expression")
        k = int(exp) if exp else 1
        acc = g.mul(acc, g.power(g.generator_labels[name], k))
        pos = m.end()
    return acc


def parse_star_spec(g: FiniteGroup, spec: str) -> StarTable:
    """Bracket input sugar: 'trivial', 'commutator'/'improper', or 'a*b=b^2, ...'."""
    text = spec.strip()
    if text in ("trivial", "1"):
        return trivial_star(g)
    if text in ("commutator", "improper"):
        return commutator_star(g)
    assignments: dict[tuple[int, int], int] = {}
    for chunk in re.split(r"[;,]", text):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = _ASSIGN_RE.match(chunk)
        if not m:
            raise ValueError(f"bad bracket assignment {chunk!r}; expected 'a*b=<word>'")
        lhs_a, lhs_b, rhs = m.groups()
        for name in (lhs_a, lhs_b):
            if name not in g.generator_labels:
                raise ValueError(f"unknown generator {name!r} in star expression")
        key = (g.generator_labels[lhs_a], g.generator_labels[lhs_b])
        assignments[key] = _eval_generator_word(g, rhs)
    if not assignments:
        raise ValueError("empty bracket specification")
    return expand_star_from_generators(g, assignments)
