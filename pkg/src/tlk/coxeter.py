"""Coxeter matrices, diagram automorphisms, index orbits and quotients.

Index labels are opaque strings.  The built-in families A<n>, D<n> and E6
carry Bourbaki numbering: A<n> is the path 1-2-...-n; D<n> is the path
1-...-(n-2) with both n-1 and n attached to n-2; E6 has edges 1-3, 3-4,
4-5, 5-6 and 2-4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

from .errors import NonSphericalSupport, UnsupportedOrbitShape

INFINITY = math.inf

ORDER_CAP = 100  # iterations before declaring a product of infinite order


def _label_key(label: str):
    return (len(label), label)


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric matrix over an ordered index set.

    Entries live in {1, 2, 3, ...} with math.inf for unbounded pairs;
    the diagonal is 1 and m(i, j) = 1 only on the diagonal.
    """

    index_set: tuple
    table: tuple  # row-major entries in index_set order
    name: str = ""

    @classmethod
    def from_entries(cls, labels, entries, name=""):
        """Build from a {(i, j): m} mapping covering all label pairs."""
        labels = tuple(labels)
        table = tuple(tuple(entries[(i, j)] for j in labels) for i in labels)
        return cls(labels, table, name)

    @classmethod
    def from_edges(cls, labels, edges, name=""):
        """Build from labels and {frozenset pair: m} for entries > 2."""
        labels = tuple(labels)
        entries = {}
        for i in labels:
            for j in labels:
                entries[(i, j)] = 1 if i == j else 2
        for pair, m in edges.items():
            i, j = tuple(pair)
            entries[(i, j)] = m
            entries[(j, i)] = m
        return cls.from_entries(labels, entries, name)

    @cached_property
    def _pos(self):
        return {label: k for k, label in enumerate(self.index_set)}

    def m(self, i, j):
        return self.table[self._pos[i]][self._pos[j]]

    def rank(self) -> int:
        return len(self.index_set)

    def is_small_type(self) -> bool:
        return all(
            self.m(i, j) in (2, 3)
            for i in self.index_set
            for j in self.index_set
            if i != j
        )

    def neighbors(self, i):
        """Labels j with m(i, j) >= 3."""
        return tuple(j for j in self.index_set if j != i and self.m(i, j) >= 3)

    def submatrix(self, labels) -> "CoxeterMatrix":
        labels = tuple(sorted(labels, key=_label_key))
        entries = {(i, j): self.m(i, j) for i in labels for j in labels}
        return CoxeterMatrix.from_entries(labels, entries)

    def is_connected(self) -> bool:
        if not self.index_set:
            return True
        seen = {self.index_set[0]}
        frontier = [self.index_set[0]]
        while frontier:
            i = frontier.pop()
            for j in self.neighbors(i):
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
        return len(seen) == len(self.index_set)


@dataclass(frozen=True)
class Diagnostics:
    valid: bool
    problems: tuple
    small_type: bool
    connected: bool

    def as_dict(self):
        return {
            "valid": self.valid,
            "problems": list(self.problems),
            "small_type": self.small_type,
            "connected": self.connected,
        }


def validate(matrix: CoxeterMatrix) -> Diagnostics:
    """Report symmetry/diagonal violations, small-type status, connectivity."""
    problems = []
    for i in matrix.index_set:
        if matrix.m(i, i) != 1:
            problems.append(f"diagonal entry m({i},{i}) = {matrix.m(i, i)} must be 1")
        for j in matrix.index_set:
            if i == j:
                continue
            if matrix.m(i, j) != matrix.m(j, i):
                problems.append(f"m({i},{j}) != m({j},{i})")
            mij = matrix.m(i, j)
            if mij != INFINITY and (not isinstance(mij, int) or mij < 2):
                problems.append(f"off-diagonal m({i},{j}) = {mij} must be >= 2 or inf")
    return Diagnostics(
        valid=not problems,
        problems=tuple(problems),
        small_type=matrix.is_small_type(),
        connected=matrix.is_connected(),
    )


# ---------------------------------------------------------------------------
# Built-in types and spec parsing.
# ---------------------------------------------------------------------------


def type_a(n: int) -> CoxeterMatrix:
    if n < 1:
        raise ValueError("A<n> needs n >= 1")
    labels = [str(i) for i in range(1, n + 1)]
    edges = {frozenset((str(i), str(i + 1))): 3 for i in range(1, n)}
    return CoxeterMatrix.from_edges(labels, edges, name=f"A{n}")


def type_d(n: int) -> CoxeterMatrix:
    if n < 4:
        raise ValueError("D<n> needs n >= 4")
    labels = [str(i) for i in range(1, n + 1)]
    edges = {frozenset((str(i), str(i + 1))): 3 for i in range(1, n - 1)}
    edges[frozenset((str(n - 2), str(n)))] = 3
    return CoxeterMatrix.from_edges(labels, edges, name=f"D{n}")


def type_e6() -> CoxeterMatrix:
    labels = [str(i) for i in range(1, 7)]
    edges = {
        frozenset(("1", "3")): 3,
        frozenset(("3", "4")): 3,
        frozenset(("4", "5")): 3,
        frozenset(("5", "6")): 3,
        frozenset(("2", "4")): 3,
    }
    return CoxeterMatrix.from_edges(labels, edges, name="E6")


def parse_type_spec(spec: str) -> CoxeterMatrix:
    """Parse "A<n>" (n >= 2), "D<n>" (n >= 4) or "E6"."""
    spec = spec.strip()
    if spec.upper() == "E6":
        return type_e6()
    kind, num = spec[:1].upper(), spec[1:]
    if kind in ("A", "D") and num.isdigit():
        n = int(num)
        if kind == "A" and n >= 2:
            return type_a(n)
        if kind == "D" and n >= 4:
            return type_d(n)
    raise ValueError(f"unsupported type spec {spec!r} (want A<n> n>=2, D<n> n>=4, E6)")


# ---------------------------------------------------------------------------
# Diagram automorphisms.
# ---------------------------------------------------------------------------


def _perm_key(perm: dict):
    return tuple(perm[i] for i in sorted(perm, key=_label_key))


def _compose(p, q):
    """p after q."""
    return {i: p[q[i]] for i in q}


def _inverse(p):
    return {v: k for k, v in p.items()}


def _perm_order(p):
    labels = list(p)
    order = 1
    q = dict(p)
    while any(q[i] != i for i in labels):
        q = _compose(p, q)
        order += 1
    return order


@dataclass(frozen=True)
class GraphAutomorphismGroup:
    """All label permutations preserving the Coxeter entries."""

    matrix: CoxeterMatrix
    elements: tuple  # tuples of images in index_set order
    generators: tuple

    def as_maps(self):
        idx = self.matrix.index_set
        return [dict(zip(idx, images)) for images in self.elements]

    def order(self) -> int:
        return len(self.elements)

    def subgroup_of_order(self, k: int) -> "GraphAutomorphismGroup":
        """Cyclic subgroup generated by the least element of order k."""
        idx = self.matrix.index_set
        candidates = []
        for images in self.elements:
            perm = dict(zip(idx, images))
            if _perm_order(perm) == k:
                candidates.append(images)
        if not candidates:
            raise ValueError(f"no diagram automorphism of order {k}")
        gen = dict(zip(idx, sorted(candidates)[0]))
        elems = {tuple(idx)}
        cur = gen
        while tuple(cur[i] for i in idx) not in elems:
            elems.add(tuple(cur[i] for i in idx))
            cur = _compose(gen, cur)
        return GraphAutomorphismGroup(
            self.matrix, tuple(sorted(elems)), (tuple(gen[i] for i in idx),)
        )

    def trivial(self) -> "GraphAutomorphismGroup":
        idx = self.matrix.index_set
        return GraphAutomorphismGroup(self.matrix, (tuple(idx),), ())


def automorphism_group(matrix: CoxeterMatrix) -> GraphAutomorphismGroup:
    """Exhaustive backtracking search for entry-preserving permutations."""
    idx = matrix.index_set
    n = len(idx)
    found = []

    def extend(assigned):
        k = len(assigned)
        if k == n:
            found.append(tuple(assigned))
            return
        i = idx[k]
        used = set(assigned)
        for cand in idx:
            if cand in used:
                continue
            ok = all(
                matrix.m(i, idx[t]) == matrix.m(cand, assigned[t]) for t in range(k)
            )
            if ok:
                assigned.append(cand)
                extend(assigned)
                assigned.pop()

    extend([])
    elements = tuple(sorted(found))
    # greedy generating set
    generators = []
    span = {tuple(idx)}
    for images in elements:
        if images not in span:
            generators.append(images)
            span = _generated(idx, generators)
    return GraphAutomorphismGroup(matrix, elements, tuple(generators))


def _generated(idx, gens):
    """Closure of the generators under composition, as image tuples."""
    gen_maps = [dict(zip(idx, g)) for g in gens]
    closed = {tuple(idx): dict(zip(idx, idx))}
    work = list(closed.values())
    while work:
        cur = work.pop()
        for g in gen_maps:
            nxt = _compose(g, cur)
            key = tuple(nxt[i] for i in idx)
            if key not in closed:
                closed[key] = nxt
                work.append(nxt)
    return set(closed)


def parse_sigma_spec(matrix: CoxeterMatrix, spec: str) -> GraphAutomorphismGroup:
    """Resolve "full" | "order2" | "order3" | "trivial" to a subgroup."""
    aut = automorphism_group(matrix)
    spec = spec.strip().lower()
    if spec == "full":
        return aut
    if spec == "trivial":
        return aut.trivial()
    if spec == "order2":
        return aut.subgroup_of_order(2)
    if spec == "order3":
        return aut.subgroup_of_order(3)
    raise ValueError(f"unsupported sigma spec {spec!r}")


# ---------------------------------------------------------------------------
# Index orbits.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexOrbit:
    members: tuple  # sorted labels
    orbit_type: str  # "A" | "B" | "C" | "D"
    spherical: bool = True

    @property
    def key(self) -> str:
        return ",".join(self.members)

    def delta_word(self) -> tuple:
        """Generator word for the lcm of the members, by orbit type."""
        m = self.members
        if self.orbit_type == "A":
            return (m[0],)
        if self.orbit_type in ("B", "C"):
            return m
        return (m[0], m[1], m[0])  # type D: longest element of the pair


def index_orbits(matrix: CoxeterMatrix, sigma: GraphAutomorphismGroup):
    """Partition of the index set into orbits, classified A/B/C/D."""
    maps = sigma.as_maps()
    seen = set()
    orbits = []
    for i in matrix.index_set:
        if i in seen:
            continue
        orbit = sorted({m[i] for m in maps}, key=_label_key)
        seen.update(orbit)
        orbits.append(tuple(orbit))
    out = []
    for orbit in orbits:
        if len(orbit) == 1:
            kind = "A"
        elif len(orbit) == 2 and matrix.m(orbit[0], orbit[1]) == 2:
            kind = "B"
        elif len(orbit) == 2 and matrix.m(orbit[0], orbit[1]) == 3:
            kind = "D"
        elif len(orbit) == 3 and all(
            matrix.m(i, j) == 2 for i, j in itertools.combinations(orbit, 2)
        ):
            kind = "C"
        else:
            raise UnsupportedOrbitShape(f"orbit {orbit} is not of shape A-D")
        out.append(IndexOrbit(orbit, kind))
    return out


# ---------------------------------------------------------------------------
# Quotient matrix.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientMatrix(CoxeterMatrix):
    orbits: tuple = ()

    def orbit_by_key(self, key: str) -> IndexOrbit:
        for orbit in self.orbits:
            if orbit.key == key:
                return orbit
        raise KeyError(key)


def _reflection_matrix(sub: CoxeterMatrix, i):
    """Matrix of s_i on the basis (alpha_j), small type only."""
    labels = sub.index_set
    cols = []
    for j in labels:
        col = [1 if r == j else 0 for r in labels]
        if j == i:
            col[labels.index(i)] = -1
        elif sub.m(i, j) == 3:
            col[labels.index(i)] += 1
        cols.append(col)
    n = len(labels)
    return [[cols[j][r] for j in range(n)] for r in range(n)]


def _matmul_int(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _word_matrix(sub: CoxeterMatrix, word):
    n = len(sub.index_set)
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for letter in word:
        M = _matmul_int(M, _reflection_matrix(sub, letter))
    return M


def _matrix_order(M, cap=ORDER_CAP):
    n = len(M)
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    P = M
    for order in range(1, cap + 1):
        if P == ident:
            return order
        P = _matmul_int(P, M)
    return None


def quotient_entry(matrix: CoxeterMatrix, J: IndexOrbit, K: IndexOrbit) -> int:
    """Order of r_J r_K acting on the reflection representation of the
    parabolic on J union K; that representation is faithful precisely when
    the parabolic is finite, so a missing order signals non-spherical
    support."""
    if J.members == K.members:
        return 1
    sub = matrix.submatrix(set(J.members) | set(K.members))
    M = _word_matrix(sub, J.delta_word() + K.delta_word())
    order = _matrix_order(M)
    if order is None:
        raise NonSphericalSupport(
            f"r_J r_K has no order <= {ORDER_CAP} on {sub.index_set}"
        )
    return order


def quotient_matrix(matrix: CoxeterMatrix, sigma: GraphAutomorphismGroup) -> QuotientMatrix:
    """Coxeter matrix of the fixed-point submonoid, one row per orbit."""
    orbits = index_orbits(matrix, sigma)
    labels = tuple(orbit.key for orbit in orbits)
    table = tuple(
        tuple(quotient_entry(matrix, J, K) for K in orbits) for J in orbits
    )
    name = f"{matrix.name}^sigma" if matrix.name else ""
    return QuotientMatrix(labels, table, name, tuple(orbits))
