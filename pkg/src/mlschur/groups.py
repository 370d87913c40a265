"""Concrete finite groups as Cayley tables over element indices 0..n-1.

All elements are dense indices; named generators are kept in an ordered
label map so reports can echo presentation-style notation.  Construction
validates the Latin-square property and associativity (fully up to order
64, randomly sampled with a fixed seed above that).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from . import zlinalg as zl

_ASSOC_FULL_LIMIT = 64
_ASSOC_SAMPLE_SEED = 12345


class FiniteGroup:
    """A finite group given by its full multiplication table."""

    def __init__(self, cayley, label: str, generator_labels: dict[str, int] | None = None,
                 check: bool = True):
        table = np.array(cayley, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("Cayley table must be square")
        self.order = int(table.shape[0])
        self.cayley = table
        self.label = label
        self.generator_labels = dict(generator_labels or {})
        if check:
            self._check_latin()
        self.identity = self._find_identity()
        self.inverses = self._find_inverses()
        if check:
            self._check_associativity()
        for name, g in self.generator_labels.items():
            if not 0 <= g < self.order:
                raise ValueError(f"generator {name!r} index out of range")
        self._is_abelian: bool | None = None
        self._digest: str | None = None

    # -- validation ------------------------------------------------------

    def _check_latin(self):
        n = self.order
        want = np.arange(n)
        for i in range(n):
            if not np.array_equal(np.sort(self.cayley[i]), want):
                raise ValueError(f"row {i} is not a permutation")
            if not np.array_equal(np.sort(self.cayley[:, i]), want):
                raise ValueError(f"column {i} is not a permutation")

    def _find_identity(self) -> int:
        n = self.order
        want = np.arange(n)
        for e in range(n):
            if np.array_equal(self.cayley[e], want) and np.array_equal(self.cayley[:, e], want):
                return e
        raise ValueError("table has no identity element")

    def _find_inverses(self) -> np.ndarray:
        inv = np.argmax(self.cayley == self.identity, axis=1)
        bad = self.cayley[np.arange(self.order), inv] != self.identity
        if bad.any():
            raise ValueError("table has an element without an inverse")
        return inv.astype(np.int64)

    def _check_associativity(self):
        n = self.order
        c = self.cayley
        if n <= _ASSOC_FULL_LIMIT:
            x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
            x, y, z = x.ravel(), y.ravel(), z.ravel()
        else:
            rng = np.random.default_rng(_ASSOC_SAMPLE_SEED)
            samples = rng.integers(0, n, size=(10 * n * n, 3))
            x, y, z = samples[:, 0], samples[:, 1], samples[:, 2]
        if not np.array_equal(c[c[x, y], z], c[x, c[y, z]]):
            raise ValueError("table is not associative")

    # -- basic operations --------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return int(self.cayley[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverses[x])

    def conj(self, x: int, y: int) -> int:
        """Left conjugation x·y·x^{-1}."""
        return int(self.cayley[self.cayley[x, y], self.inverses[x]])

    def commutator(self, x: int, y: int) -> int:
        """[x, y] = x·y·x^{-1}·y^{-1}."""
        xy = self.cayley[x, y]
        return int(self.cayley[self.cayley[xy, self.inverses[x]], self.inverses[y]])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(x), -k)
        acc = self.identity
        base = x
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        if self._is_abelian is None:
            self._is_abelian = bool(np.array_equal(self.cayley, self.cayley.T))
        return self._is_abelian

    def marked_generators(self) -> list[int]:
        return list(self.generator_labels.values())

    def conj_table(self) -> np.ndarray:
        """Table c[x, y] = x·y·x^{-1}."""
        n = self.order
        x = np.arange(n)[:, None]
        y = np.arange(n)[None, :]
        return self.cayley[self.cayley[x, y], self.inverses[x]]

    def commutator_table(self) -> np.ndarray:
        """Table k[x, y] = x·y·x^{-1}·y^{-1}."""
        n = self.order
        x = np.arange(n)[:, None]
        y = np.arange(n)[None, :]
        return self.cayley[self.cayley[self.cayley[x, y], self.inverses[x]], self.inverses[y]]

    def digest(self) -> str:
        if self._digest is None:
            self._digest = hashlib.sha1(self.cayley.astype(np.int64).tobytes()).hexdigest()
        return self._digest

    def __repr__(self):
        return f"FiniteGroup({self.label!r}, order={self.order})"


# -- named constructions ---------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    gens = {"a": 1} if n > 1 else {}
    return FiniteGroup(table, f"Z{n}", gens)


def dihedral(n: int) -> FiniteGroup:
    """<a, b | a^2 = b^n = 1, aba = b^{-1}> of order 2n, index = s*n + k for a^s b^k."""
    if n < 2:
        raise ValueError("dihedral parameter must be >= 2")
    return _split_metacyclic_table(2, n, n - 1, f"D{n}")


def metacyclic(m: int, n: int, alpha: int) -> FiniteGroup:
    """<a, b | a^m = b^n = 1, a^{-1} b a = b^alpha> of order m*n."""
    if m < 1 or n < 1:
        raise ValueError("metacyclic parameters must be positive")
    alpha %= n
    if gcd(alpha, n) != 1:
        raise ValueError(f"alpha={alpha} is not invertible mod {n}")
    if pow(alpha, m, n) != 1 % n:
        raise ValueError(f"alpha^m != 1 mod n for (m, n, alpha)=({m}, {n}, {alpha})")
    return _split_metacyclic_table(m, n, alpha, f"M({m},{n},{alpha})")


def _split_metacyclic_table(m: int, n: int, alpha: int, label: str) -> FiniteGroup:
    # a^{-1} b a = b^alpha, hence b^k a^t = a^t b^{k*alpha^t}
    size = m * n
    table = np.zeros((size, size), dtype=np.int64)
    apow = [pow(alpha, t, n) for t in range(m)]
    for s in range(m):
        for k in range(n):
            for t in range(m):
                kk = (k * apow[t]) % n
                for l in range(n):
                    table[s * n + k, t * n + l] = ((s + t) % m) * n + (kk + l) % n
    gens = {"a": n, "b": 1} if n > 1 else {"a": n}
    return FiniteGroup(table, label, gens)


def dicyclic(n: int) -> FiniteGroup:
    """<a, b | a^2 = b^n, aba^{-1} = b^{-1}> of order 4n, index = s*2n + k for a^s b^k."""
    if n < 2:
        raise ValueError("dicyclic parameter must be >= 2")
    two_n = 2 * n
    size = 4 * n
    table = np.zeros((size, size), dtype=np.int64)
    for s in (0, 1):
        for k in range(two_n):
            for t in (0, 1):
                sign = -1 if t else 1
                carry = n if s + t == 2 else 0
                for l in range(two_n):
                    new_s = (s + t) % 2
                    new_k = (k * sign + l + carry) % two_n
                    table[s * two_n + k, t * two_n + l] = new_s * two_n + new_k
    return FiniteGroup(table, f"Q{n}", {"a": two_n, "b": 1})


def klein_four() -> FiniteGroup:
    g = direct_product(cyclic(2), cyclic(2))
    return FiniteGroup(g.cayley, "V4", {"a": 2, "b": 1})


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    ng, nh = g.order, h.order
    gi = np.arange(ng * nh) // nh
    hi = np.arange(ng * nh) % nh
    table = g.cayley[gi[:, None], gi[None, :]] * nh + h.cayley[hi[:, None], hi[None, :]]
    names = "abcdefgh"
    gens: dict[str, int] = {}
    for idx in g.marked_generators():
        gens[names[len(gens)]] = idx * nh + h.identity
    for idx in h.marked_generators():
        gens[names[len(gens)]] = g.identity * nh + idx
    return FiniteGroup(table, f"{g.label}x{h.label}", gens)


def sl_2_3() -> FiniteGroup:
    """2x2 matrices over the 3-element field with determinant 1."""
    mats = []
    for a in range(3):
        for b in range(3):
            for c in range(3):
                for d in range(3):
                    if (a * d - b * c) % 3 == 1:
                        mats.append((a, b, c, d))
    index = {m: i for i, m in enumerate(mats)}
    size = len(mats)
    table = np.zeros((size, size), dtype=np.int64)
    for i, (a, b, c, d) in enumerate(mats):
        for j, (e, f, g, h) in enumerate(mats):
            prod = ((a * e + b * g) % 3, (a * f + b * h) % 3,
                    (c * e + d * g) % 3, (c * f + d * h) % 3)
            table[i, j] = index[prod]
    gens = {"a": index[(1, 1, 0, 1)], "b": index[(0, 2, 1, 0)]}
    grp = FiniteGroup(table, "SL(2,3)", gens)
    if subgroup_generated(grp, gens.values()).order != size:
        raise AssertionError("chosen generators do not generate SL(2,3)")
    return grp


def from_cayley(table, label: str, generator_labels: dict[str, int] | None = None) -> FiniteGroup:
    return FiniteGroup(table, label, generator_labels)


# -- subgroups and homomorphisms -------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]
    generators: tuple[int, ...]

    def __post_init__(self):
        mem = set(self.members)
        g = self.parent
        if g.identity not in mem:
            raise ValueError("subgroup must contain the identity")
        for x in self.members:
            if g.inv(x) not in mem:
                raise ValueError("subgroup not closed under inverses")
            for y in self.members:
                if g.mul(x, y) not in mem:
                    raise ValueError("subgroup not closed under products")
        if not set(self.generators) <= mem:
            raise ValueError("generators must lie inside the subgroup")
        if _closure(g, self.generators) != mem:
            raise ValueError("generators do not generate the stated members")

    @property
    def order(self) -> int:
        return len(self.members)

    def contains(self, x: int) -> bool:
        return x in set(self.members)

    def as_group(self) -> tuple[FiniteGroup, list[int]]:
        """Re-index the subgroup as a standalone group plus the embedding."""
        emb = list(self.members)
        pos = {x: i for i, x in enumerate(emb)}
        k = len(emb)
        table = np.zeros((k, k), dtype=np.int64)
        for i, x in enumerate(emb):
            for j, y in enumerate(emb):
                table[i, j] = pos[self.parent.mul(x, y)]
        return FiniteGroup(table, f"{self.parent.label}-sub{k}", check=False), emb


def _closure(g: FiniteGroup, seed) -> set[int]:
    seen = {g.identity}
    frontier = [g.identity]
    gens = sorted(set(int(x) for x in seed))
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = g.mul(x, s)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def subgroup_generated(g: FiniteGroup, gens) -> Subgroup:
    gens = sorted(set(int(x) for x in gens))
    members = tuple(sorted(_closure(g, gens)))
    return Subgroup(g, members, tuple(gens))


def trivial_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, (g.identity,), ())


def normal_closure(g: FiniteGroup, seed) -> Subgroup:
    gens = set(int(x) for x in seed)
    while True:
        members = _closure(g, gens)
        new = set()
        for x in g.elements():
            for s in members:
                c = g.conj(x, s)
                if c not in members:
                    new.add(c)
        if not new:
            break
        gens |= new
    return subgroup_generated(g, sorted(gens))


def center(g: FiniteGroup) -> Subgroup:
    central = [z for z in g.elements()
               if np.array_equal(g.cayley[z, :], g.cayley[:, z])]
    return subgroup_generated(g, central)


def commutator_subgroup(g: FiniteGroup) -> Subgroup:
    comms = sorted({g.commutator(x, y) for x in g.elements() for y in g.elements()})
    return subgroup_generated(g, comms)


class GroupHom:
    """A homomorphism given by the image of every domain element."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, images, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.images = np.array(images, dtype=np.int64)
        if self.images.shape != (domain.order,):
            raise ValueError("image table has the wrong length")
        if check:
            imgs = self.images
            lhs = imgs[domain.cayley]
            rhs = codomain.cayley[imgs[:, None], imgs[None, :]]
            if not np.array_equal(lhs, rhs):
                raise ValueError("map is not a homomorphism")
            if imgs[domain.identity] != codomain.identity:
                raise ValueError("map does not preserve the identity")

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def kernel(self) -> Subgroup:
        ker = [x for x in self.domain.elements() if self.images[x] == self.codomain.identity]
        return subgroup_generated(self.domain, ker)

    def image(self) -> Subgroup:
        return subgroup_generated(self.codomain, sorted(set(int(i) for i in self.images)))

    def is_surjective(self) -> bool:
        return len(set(int(i) for i in self.images)) == self.codomain.order


def quotient(g: FiniteGroup, n: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """The quotient G/N for a normal subgroup N, plus the projection map."""
    mem = set(n.members)
    for x in g.elements():
        for s in n.members:
            if g.conj(x, s) not in mem:
                raise ValueError("subgroup is not normal")
    coset_of = [-1] * g.order
    reps: list[int] = []

    def assign(rep: int):
        idx = len(reps)
        reps.append(rep)
        for s in n.members:
            coset_of[g.mul(rep, s)] = idx

    assign(g.identity)
    for x in g.elements():
        if coset_of[x] < 0:
            assign(x)
    k = len(reps)
    table = np.zeros((k, k), dtype=np.int64)
    for i, x in enumerate(reps):
        for j, y in enumerate(reps):
            table[i, j] = coset_of[g.mul(x, y)]
    q = FiniteGroup(table, f"{g.label}/N{n.order}")
    return q, GroupHom(g, q, coset_of)


# -- abelian invariants -----------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d1 | d2 | ... of a finite abelian group."""

    factors: tuple[int, ...]

    def __post_init__(self):
        for d in self.factors:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for i in range(len(self.factors) - 1):
            if self.factors[i + 1] % self.factors[i]:
                raise ValueError("invariant factors must form a divisibility chain")

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    def aslist(self) -> list[int]:
        return list(self.factors)

    def __str__(self):
        if not self.factors:
            return "trivial"
        return " x ".join(f"Z{d}" for d in self.factors)


def normalize_cyclic_orders(orders) -> AbelianInvariants:
    """Invariant factors of a direct sum of cyclic groups of the given orders."""
    return AbelianInvariants(tuple(zl._divisor_chain([int(d) for d in orders])))


def dual_invariants(a: AbelianInvariants) -> AbelianInvariants:
    """Hom(A, C^*) of a finite abelian group is isomorphic to A."""
    return a


def hom_invariants_to_cyclic(a: AbelianInvariants, m: int) -> AbelianInvariants:
    """Hom(+Z_{d_i}, Z_m) = +Z_{gcd(d_i, m)}."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    return normalize_cyclic_orders([gcd(d, m) for d in a.factors])


def _min_generating_set(g: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {g.identity}
    for x in g.elements():
        if x not in span:
            gens.append(x)
            span = _closure(g, gens)
            if len(span) == g.order:
                break
    return gens


def generating_set(g: FiniteGroup) -> list[int]:
    """Marked generators when they generate, else a greedy minimal set."""
    marked = g.marked_generators()
    if marked and len(_closure(g, marked)) == g.order:
        return marked
    return _min_generating_set(g)


def abelian_invariants(a) -> AbelianInvariants:
    """Invariant factors via the Smith form of a spanning-tree relation matrix."""
    if isinstance(a, Subgroup):
        grp, _ = a.as_group()
    elif isinstance(a, FiniteGroup):
        grp = a
    else:
        raise TypeError("expected a FiniteGroup or Subgroup")
    if not grp.is_abelian():
        raise ValueError("abelian invariants need an abelian input")
    if grp.order == 1:
        return AbelianInvariants(())
    gens = _min_generating_set(grp)
    k = len(gens)
    coords: dict[int, np.ndarray] = {grp.identity: np.zeros(k, dtype=np.int64)}
    frontier = [grp.identity]
    while frontier:
        x = frontier.pop(0)
        for i, gen in enumerate(gens):
            y = grp.mul(x, gen)
            if y not in coords:
                vec = coords[x].copy()
                vec[i] += 1
                coords[y] = vec
                frontier.append(y)
    rows = []
    units = np.eye(k, dtype=np.int64)
    for x in grp.elements():
        for i, gen in enumerate(gens):
            rows.append(coords[x] + units[i] - coords[grp.mul(x, gen)])
    dec = zl.smith_normal_form(np.array(rows, dtype=np.int64), check=False)
    diag = [d for d in dec.diagonal() if d != 0]
    order = 1
    for d in diag:
        order *= d
    if order != grp.order:
        raise AssertionError("relation lattice does not present the group")
    return AbelianInvariants(tuple(d for d in diag if d > 1))


# -- element helpers --------------------------------------------------------


def conjugate(g: FiniteGroup, x: int, y: int) -> int:
    """Left action convention: x acting on y gives x·y·x^{-1}."""
    return g.conj(x, y)


def element_order(g: FiniteGroup, x: int) -> int:
    order = 1
    acc = x
    while acc != g.identity:
        acc = g.mul(acc, x)
        order += 1
    return order


def exponent(g: FiniteGroup) -> int:
    out = 1
    for x in g.elements():
        out = lcm(out, element_order(g, x))
    return out


# -- homomorphism extension and automorphisms ------------------------------


def extend_hom(domain: FiniteGroup, codomain: FiniteGroup, gen_images: dict[int, int]):
    """Extend images of a generating set to a GroupHom, or None if impossible."""
    gens = list(gen_images)
    if len(_closure(domain, gens)) != domain.order:
        raise ValueError("given elements do not generate the domain")
    images = [-1] * domain.order
    images[domain.identity] = codomain.identity
    frontier = [domain.identity]
    while frontier:
        x = frontier.pop(0)
        for gen in gens:
            y = domain.mul(x, gen)
            img = codomain.mul(images[x], gen_images[gen])
            if images[y] < 0:
                images[y] = img
                frontier.append(y)
            elif images[y] != img:
                return None
    try:
        return GroupHom(domain, codomain, images)
    except ValueError:
        return None


def automorphisms(g: FiniteGroup, limit: int = 16) -> list[np.ndarray]:
    """All automorphisms as permutation arrays (small groups only)."""
    if g.order > limit:
        raise ValueError(f"automorphism enumeration limited to order <= {limit}")
    gens = generating_set(g)
    orders = {x: element_order(g, x) for x in g.elements()}
    candidates = [[y for y in g.elements() if orders[y] == orders[x]] for x in gens]
    out = []
    def rec(i, chosen):
        if i == len(gens):
            hom = extend_hom(g, g, dict(zip(gens, chosen)))
            if hom is not None and len(set(hom.images.tolist())) == g.order:
                out.append(hom.images.copy())
            return
        for cand in candidates[i]:
            rec(i + 1, chosen + [cand])
    rec(0, [])
    return out


# -- text format -------------------------------------------------------------


def format_group_file(g: FiniteGroup) -> str:
    lines = [f"group {g.label}", f"order {g.order}", "table"]
    for row in g.cayley:
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_group_file(text: str) -> FiniteGroup:
    lines = text.splitlines()
    if len(lines) < 3:
        raise ValueError("group file needs at least 3 header lines")
    if not lines[0].startswith("group "):
        raise ValueError("line 1 must be 'group <label>'")
    label = lines[0][len("group "):].strip()
    if not lines[1].rstrip().startswith("order "):
        raise ValueError("line 2 must be 'order <n>'")
    try:
        n = int(lines[1].split()[1])
    except (IndexError, ValueError) as exc:
        raise ValueError("line 2 must be 'order <n>'") from exc
    if lines[2].rstrip() != "table":
        raise ValueError("line 3 must be 'table'")
    rows = []
    for k, line in enumerate(lines[3:3 + n]):
        parts = line.split()
        if len(parts) != n:
            raise ValueError(f"table row {k} has {len(parts)} entries, expected {n}")
        rows.append([int(p) for p in parts])
    if len(rows) != n:
        raise ValueError(f"expected {n} table rows, found {len(rows)}")
    return FiniteGroup(rows, label)
