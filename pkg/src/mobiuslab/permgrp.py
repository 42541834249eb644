"""Permutations of a finite alphabet and small concrete groups.

Composition applies the right factor first, (p * q)(a) = p(q(a)), and every
multiplication table built here follows the same convention.  Element 0 of a
FiniteGroup is always its identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError

CLOSURE_CAP = 10_000
CENTRALIZER_DEGREE_CAP = 8
NORMAL_SUBGROUP_ORDER_CAP = 1_000


class Perm:
    """Permutation of {0..degree-1}, stored as the tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(a) for a in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("not a permutation of 0..%d: %r" % (len(images) - 1, images))
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, *cycles) -> "Perm":
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return all(i == a for i, a in enumerate(self.images))

    def __call__(self, a: int) -> int:
        return self.images[a]

    def __mul__(self, other: "Perm") -> "Perm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch: %d vs %d" % (self.degree, other.degree))
        return Perm(self.images[b] for b in other.images)

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for a, b in enumerate(self.images):
            inv[b] = a
        return Perm(inv)

    def order(self) -> int:
        seen = [False] * self.degree
        result = 1
        for a in range(self.degree):
            if seen[a]:
                continue
            length = 0
            while not seen[a]:
                seen[a] = True
                a = self.images[a]
                length += 1
            result = result * length // _gcd(result, length)
        return result

    def cycle_string(self, names=None) -> str:
        names = names or [str(a) for a in range(self.degree)]
        seen = [False] * self.degree
        parts = []
        for a in range(self.degree):
            if seen[a] or self.images[a] == a:
                seen[a] = True
                continue
            cyc = []
            while not seen[a]:
                seen[a] = True
                cyc.append(names[a])
                a = self.images[a]
            parts.append("(" + " ".join(cyc) + ")")
        return "".join(parts) or "e"

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "Perm%r" % (self.images,)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class FiniteGroup:
    """A finite group given by its full multiplication table.

    element_names are display labels; index 0 is the identity.  Construction
    validates the identity row and column and that rows and columns are
    permutations; full associativity is available through check().
    """

    def __init__(self, element_names, mult):
        self.element_names = tuple(str(s) for s in element_names)
        m = len(self.element_names)
        table = np.asarray(mult, dtype=np.int32)
        if table.shape != (m, m):
            raise ValueError("multiplication table must be %dx%d" % (m, m))
        if table.min(initial=0) < 0 or table.max(initial=0) >= m:
            raise ValueError("table entries out of range 0..%d" % (m - 1))
        if not (np.array_equal(table[0], np.arange(m)) and np.array_equal(table[:, 0], np.arange(m))):
            raise ValueError("element 0 must be the identity")
        # latin square check
        if not all(len(set(map(int, table[a]))) == m for a in range(m)):
            raise ValueError("rows must be permutations")
        if not all(len(set(map(int, table[:, b]))) == m for b in range(m)):
            raise ValueError("columns must be permutations")
        table.flags.writeable = False
        self.table = table
        inv = np.zeros(m, dtype=np.int32)
        for a in range(m):
            hits = np.flatnonzero(table[a] == 0)
            if len(hits) != 1 or table[int(hits[0]), a] != 0:
                raise ValueError("element %d has no two-sided inverse" % a)
            inv[a] = hits[0]
        inv.flags.writeable = False
        self.inverse = inv

    @property
    def order(self) -> int:
        return len(self.element_names)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def product(self, indices) -> int:
        """Left-to-right product of a sequence of element indices."""
        acc = 0
        for a in indices:
            acc = int(self.table[acc, a])
        return acc

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def check(self) -> None:
        """Assert full associativity (O(order^3); for tests)."""
        t = self.table
        # left[a,b,c] = (ab)c, right[a,b,c] = a(bc)
        if not np.array_equal(t[t, :], t[:, t]):
            raise AssertionError("multiplication table is not associative")

    def subgroup_closure(self, subset) -> frozenset:
        """Smallest subgroup containing the given element indices."""
        elems = {0}
        frontier = list({int(a) for a in subset})
        elems.update(frontier)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(elems):
                    for c in (self.mul(a, b), self.mul(b, a)):
                        if c not in elems:
                            elems.add(c)
                            nxt.append(c)
            frontier = nxt
        return frozenset(elems)

    def __repr__(self):
        return "FiniteGroup(order=%d)" % self.order


@dataclass(frozen=True)
class GroupEmbedding:
    """Permutation realization of a FiniteGroup: index -> Perm."""

    group: FiniteGroup
    images: tuple

    @property
    def degree(self) -> int:
        return self.images[0].degree


def trivial_group() -> FiniteGroup:
    return FiniteGroup(("e",), ((0,),))


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("order must be positive, got %d" % n)
    names = tuple(str(a) for a in range(n))
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroup(names, table)


def symmetric_group(degree: int) -> "tuple[FiniteGroup, GroupEmbedding]":
    """Full symmetric group on 0..degree-1; degree <= 6 keeps the table small."""
    if degree < 1:
        raise ValueError("degree must be positive, got %d" % degree)
    if degree > 6:
        raise CapacityError("S_%d multiplication table is too large; capped at degree 6" % degree)
    perms = [Perm(p) for p in itertools.permutations(range(degree))]
    return _group_from_perms(perms)


def _group_from_perms(perms):
    """Build (FiniteGroup, GroupEmbedding) from a closed perm list, identity first."""
    if not perms[0].is_identity:
        raise ValueError("element 0 must be the identity")
    index = {p: i for i, p in enumerate(perms)}
    m = len(perms)
    degree = perms[0].degree
    stack = np.array([p.images for p in perms], dtype=np.int32)
    table = np.zeros((m, m), dtype=np.int32)
    for a in range(m):
        composed = stack[a][stack]  # row b: perms[a] o perms[b]
        for b in range(m):
            table[a, b] = index[Perm(composed[b])]
    names = tuple(p.cycle_string() for p in perms)
    group = FiniteGroup(names, table)
    return group, GroupEmbedding(group, tuple(perms))


def closure(generators, degree=None, size_cap: int = CLOSURE_CAP):
    """BFS closure of permutation generators.

    Returns (FiniteGroup, GroupEmbedding) with elements in discovery order,
    identity first.  Raises CapacityError past size_cap and ValueError on
    mixed degrees.
    """
    gens = [g if isinstance(g, Perm) else Perm(g) for g in generators]
    degrees = {g.degree for g in gens}
    if len(degrees) > 1:
        raise ValueError("generators act on different alphabets: degrees %s" % sorted(degrees))
    if degree is None:
        degree = degrees.pop() if degrees else 1
    elif degrees and degrees.pop() != degree:
        raise ValueError("generator degree does not match degree=%d" % degree)

    ident = Perm.identity(degree)
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                prod = g * h
                if prod not in index:
                    if len(elems) >= size_cap:
                        raise CapacityError("closure exceeded cap of %d elements" % size_cap)
                    index[prod] = len(elems)
                    elems.append(prod)
                    nxt.append(prod)
        frontier = nxt
    return _group_from_perms(elems)


def centralizer_in_sym(perms, degree=None):
    """Centralizer of a set of permutations inside the ambient symmetric group.

    Enumerates the whole symmetric group, so degree is capped at 8.
    Returns (FiniteGroup, GroupEmbedding).
    """
    perms = [p if isinstance(p, Perm) else Perm(p) for p in perms]
    degrees = {p.degree for p in perms}
    if len(degrees) > 1:
        raise ValueError("permutations act on different alphabets: degrees %s" % sorted(degrees))
    if degree is None:
        if not degrees:
            raise ValueError("degree is required when no permutations are given")
        degree = degrees.pop()
    elif degrees and degrees.pop() != degree:
        raise ValueError("permutation degree does not match degree=%d" % degree)
    if degree < 1:
        raise ValueError("degree must be positive, got %d" % degree)
    if degree > CENTRALIZER_DEGREE_CAP:
        raise CapacityError(
            "full enumeration of S_%d is capped at degree %d" % (degree, CENTRALIZER_DEGREE_CAP)
        )

    fixed = [np.array(p.images) for p in perms]
    commuting = []
    for cand in itertools.permutations(range(degree)):
        c = np.array(cand)
        if all(np.array_equal(c[f], f[c]) for f in fixed):
            commuting.append(Perm(cand))
    # lexicographic enumeration starts at the identity
    return _group_from_perms(commuting)


def _enumerate_subgroups(group: FiniteGroup):
    """All subgroups as frozensets of element indices (lattice BFS)."""
    found = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for sub in frontier:
            for g in range(group.order):
                if g in sub:
                    continue
                bigger = group.subgroup_closure(sub | {g})
                if bigger not in found:
                    found.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    return found


def normal_subgroups(group: FiniteGroup):
    """All normal subgroups, sorted by size then by element indices."""
    if group.order > NORMAL_SUBGROUP_ORDER_CAP:
        raise CapacityError("normal subgroup scan capped at order %d, got %d" % (NORMAL_SUBGROUP_ORDER_CAP, group.order))
    normals = []
    for sub in _enumerate_subgroups(group):
        if all(group.mul(group.mul(g, h), group.inv(g)) in sub for g in range(group.order) for h in sub):
            normals.append(sub)
    return sorted(normals, key=lambda s: (len(s), sorted(s)))


def quotient(group: FiniteGroup, normal):
    """Quotient G/H with its projection.

    Returns (FiniteGroup, projection tuple mapping element index to coset
    index).  The coset of the identity is element 0.  Raises ValueError if
    the subset is not a normal subgroup.
    """
    sub = frozenset(int(a) for a in normal)
    if 0 not in sub:
        raise ValueError("a subgroup must contain the identity")
    if group.subgroup_closure(sub) != sub:
        raise ValueError("subset is not closed under multiplication")
    for g in range(group.order):
        if any(group.mul(group.mul(g, h), group.inv(g)) not in sub for h in sub):
            raise ValueError("subgroup is not normal (fails at element %d)" % g)

    coset_of = [-1] * group.order
    reps = []
    for g in range(group.order):
        if coset_of[g] >= 0:
            continue
        members = sorted(group.mul(g, h) for h in sub)
        idx = len(reps)
        reps.append(members[0])
        for member in members:
            coset_of[member] = idx
    # identity coset is discovered first since scanning starts at 0
    m = len(reps)
    table = [[coset_of[group.mul(reps[a], reps[b])] for b in range(m)] for a in range(m)]
    names = tuple("[%s]" % group.element_names[r] for r in reps)
    return FiniteGroup(names, table), tuple(coset_of)
