"""Positive root systems with depth grading, orbit structure and meshes.

Roots are integer coordinate vectors over the index set; for small type the
reflection s_i changes only the i-th coordinate, replacing c_i by
(sum of c_j over neighbors j of i) - c_i.  Depth is one plus the breadth
first distance to the simple-root layer along reflection edges, which
matches the least length of an element sending the root negative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import CoxeterMatrix, GraphAutomorphismGroup, IndexOrbit
from .errors import RootBudgetExceeded, UnrecognizedConfiguration

DEFAULT_ROOT_CAP = 10_000


@dataclass(frozen=True)
class PositiveRootSystem:
    matrix: CoxeterMatrix
    roots: tuple  # coordinate tuples, sorted by (depth, coords)
    depth: tuple  # depth per root index
    reflections: dict  # label -> tuple mapping root index to root index or -1

    @property
    def size(self) -> int:
        return len(self.roots)

    def root_index(self, coords) -> int:
        return self.roots.index(tuple(coords))

    def simple_index(self, label) -> int:
        pos = self.matrix.index_set.index(label)
        coords = tuple(1 if k == pos else 0 for k in range(len(self.matrix.index_set)))
        return self.roots.index(coords)

    def reflect(self, label, root_idx) -> int:
        """Index of s_label(root), or -1 when the image is negative."""
        return self.reflections[label][root_idx]

    def edges(self):
        """Triples (upper, label, lower) with depth(upper) = depth(lower)+1."""
        out = []
        for label in self.matrix.index_set:
            table = self.reflections[label]
            for i, j in enumerate(table):
                if j >= 0 and self.depth[i] == self.depth[j] + 1:
                    out.append((i, label, j))
        return out

    def sigma_perm(self, sigma_map: dict) -> tuple:
        """Permutation of root indices induced by a diagram automorphism."""
        idx = self.matrix.index_set
        positions = {label: k for k, label in enumerate(idx)}
        out = []
        for coords in self.roots:
            image = [0] * len(idx)
            for k, label in enumerate(idx):
                image[positions[sigma_map[label]]] = coords[k]
            out.append(self.roots.index(tuple(image)))
        return tuple(out)


def _reflect_coords(matrix: CoxeterMatrix, coords, label):
    pos = matrix.index_set.index(label)
    new = list(coords)
    total = sum(
        coords[matrix.index_set.index(j)] for j in matrix.neighbors(label)
    )
    new[pos] = total - coords[pos]
    return tuple(new)


def generate(matrix: CoxeterMatrix, root_cap: int = DEFAULT_ROOT_CAP) -> PositiveRootSystem:
    """Close the simple roots under reflections, keeping nonnegative vectors.

    Raises RootBudgetExceeded past root_cap, which signals a non-spherical
    input.
    """
    if not matrix.is_small_type():
        raise ValueError("root generation requires a small-type matrix")
    n = len(matrix.index_set)
    simples = [tuple(1 if k == p else 0 for k in range(n)) for p in range(n)]
    depth = {coords: 1 for coords in simples}
    layer = list(simples)
    while layer:
        nxt = []
        for coords in layer:
            for label in matrix.index_set:
                image = _reflect_coords(matrix, coords, label)
                if min(image) < 0 or image in depth:
                    continue
                depth[image] = depth[coords] + 1
                nxt.append(image)
                if len(depth) > root_cap:
                    raise RootBudgetExceeded(
                        f"more than {root_cap} positive roots; non-spherical input?"
                    )
        layer = nxt
    roots = tuple(sorted(depth, key=lambda r: (depth[r], r)))
    index = {coords: k for k, coords in enumerate(roots)}
    reflections = {}
    for label in matrix.index_set:
        table = []
        for coords in roots:
            image = _reflect_coords(matrix, coords, label)
            table.append(index[image] if min(image) >= 0 else -1)
        reflections[label] = tuple(table)
    return PositiveRootSystem(matrix, roots, tuple(depth[r] for r in roots), reflections)


# ---------------------------------------------------------------------------
# Orbits of roots under a diagram automorphism group.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaOrbit:
    members: tuple  # sorted root indices
    depth: int

    @property
    def size(self) -> int:
        return len(self.members)


def sigma_orbits(rs: PositiveRootSystem, sigma: GraphAutomorphismGroup):
    """Partition of the positive roots, sorted by (depth, least member)."""
    perms = [rs.sigma_perm(m) for m in sigma.as_maps()]
    seen = set()
    orbits = []
    for i in range(rs.size):
        if i in seen:
            continue
        members = tuple(sorted({perm[i] for perm in perms}))
        seen.update(members)
        depths = {rs.depth[m] for m in members}
        assert len(depths) == 1, "automorphisms must preserve depth"
        orbits.append(SigmaOrbit(members, depths.pop()))
    orbits.sort(key=lambda o: (o.depth, rs.roots[o.members[0]]))
    return orbits


def j_mesh(rs: PositiveRootSystem, J: IndexOrbit, theta: SigmaOrbit, orbits):
    """Orbits inside the closure of theta under the reflections of J."""
    owner = {}
    for orbit in orbits:
        for m in orbit.members:
            owner[m] = orbit
    reached = set(theta.members)
    work = list(theta.members)
    while work:
        r = work.pop()
        for label in J.members:
            image = rs.reflect(label, r)
            if image >= 0 and image not in reached:
                reached.add(image)
                work.append(image)
    mesh = {owner[r] for r in reached}
    return sorted(mesh, key=lambda o: (o.depth, rs.roots[o.members[0]]))


@dataclass(frozen=True)
class MeshConfiguration:
    tag: str
    orbits: tuple  # depth-sorted, bottom first


def _fixed_by_all(rs, J, orbit) -> bool:
    return all(rs.reflect(j, r) == r for j in J.members for r in orbit.members)


def classify_mesh(J: IndexOrbit, mesh, rs: PositiveRootSystem) -> MeshConfiguration:
    """Match a J-mesh against the 19 configuration diagrams.

    The key is the orbit type of J, the number of orbits, their relative
    depth profile and sizes, plus loop checks for the diagonal shapes; the
    full edge pattern is certified downstream when the block of the twisted
    generator is compared entry-wise against the reference matrix.
    """
    orbits = tuple(mesh)
    depths = [o.depth for o in orbits]
    base = min(depths)
    profile = tuple(sorted(x - base for x in depths))
    sizes = tuple(o.size for o in orbits)
    kind = J.orbit_type
    simple_indices = {rs.simple_index(j) for j in J.members}

    def fail(reason):
        raise UnrecognizedConfiguration(
            f"J={J.members} ({kind}) mesh profile={profile} sizes={sizes}: {reason}"
        )

    def is_theta_j(orbit):
        return set(orbit.members) == simple_indices

    if kind == "A":
        if len(orbits) == 1:
            if is_theta_j(orbits[0]):
                return MeshConfiguration("A1", orbits)
            if _fixed_by_all(rs, J, orbits[0]):
                return MeshConfiguration("A2", orbits)
            fail("single orbit neither simple nor fixed")
        if len(orbits) == 2 and profile == (0, 1) and sizes[0] == sizes[1]:
            return MeshConfiguration("A3", orbits)
        fail("no type-A diagram matches")
    if kind == "B":
        if len(orbits) == 1:
            if is_theta_j(orbits[0]):
                return MeshConfiguration("B1", orbits)
            if _fixed_by_all(rs, J, orbits[0]):
                return MeshConfiguration("B2", orbits)
            fail("single orbit neither simple nor fixed")
        if len(orbits) == 2 and profile == (0, 1) and sizes == (2, 2):
            return MeshConfiguration("B3", orbits)
        if len(orbits) == 3 and profile == (0, 1, 2) and sizes == (1, 2, 1):
            return MeshConfiguration("B4", orbits)
        if len(orbits) == 4 and profile == (0, 1, 1, 2) and sizes == (2, 2, 2, 2):
            return MeshConfiguration("B5", orbits)
        fail("no type-B diagram matches")
    if kind == "C":
        if len(orbits) == 1:
            if is_theta_j(orbits[0]):
                return MeshConfiguration("C1", orbits)
            if _fixed_by_all(rs, J, orbits[0]):
                return MeshConfiguration("C2", orbits)
            fail("single orbit neither simple nor fixed")
        if len(orbits) == 2 and profile == (0, 1) and sizes == (3, 3):
            return MeshConfiguration("C3", orbits)
        if len(orbits) == 4 and profile == (0, 1, 1, 2) and sizes == (3, 3, 3, 3):
            return MeshConfiguration("C4", orbits)
        if len(orbits) == 4 and profile == (0, 1, 2, 3) and sizes == (1, 3, 3, 1):
            return MeshConfiguration("C5", orbits)
        if len(orbits) == 8 and profile == (0, 1, 1, 1, 2, 2, 2, 3):
            if sizes == (3,) * 8:
                return MeshConfiguration("C6", orbits)
        fail("no type-C diagram matches")
    if kind == "D":
        if len(orbits) == 2:
            if any(is_theta_j(o) for o in orbits) and profile == (0, 1):
                return MeshConfiguration("D1", orbits)
            fail("two orbits without the simple pair")
        if len(orbits) == 1:
            if _fixed_by_all(rs, J, orbits[0]):
                return MeshConfiguration("D2", orbits)
            fail("single orbit not fixed")
        if len(orbits) == 3 and profile == (0, 1, 2) and sizes == (2, 2, 2):
            return MeshConfiguration("D3", orbits)
        if len(orbits) == 4 and profile == (0, 1, 2, 3) and sizes == (1, 2, 2, 1):
            return MeshConfiguration("D4", orbits)
        if len(orbits) == 6 and profile == (0, 1, 1, 2, 2, 3) and sizes == (2,) * 6:
            return MeshConfiguration("D5", orbits)
        fail("no type-D diagram matches")
    fail(f"unknown orbit type {kind}")


#: Orbits per configuration diagram, for census sanity checks.
ORBITS_PER_TAG = {
    "A1": 1, "A2": 1, "A3": 2,
    "B1": 1, "B2": 1, "B3": 2, "B4": 3, "B5": 4,
    "C1": 1, "C2": 1, "C3": 2, "C4": 4, "C5": 4, "C6": 8,
    "D1": 2, "D2": 1, "D3": 3, "D4": 4, "D5": 6,
}


def meshes_for(rs: PositiveRootSystem, orbits, J: IndexOrbit):
    """Deduplicated J-meshes covering all orbits, as MeshConfigurations."""
    seen = set()
    out = []
    for theta in orbits:
        mesh = j_mesh(rs, J, theta, orbits)
        key = frozenset(o.members for o in mesh)
        if key in seen:
            continue
        seen.add(key)
        out.append(classify_mesh(J, mesh, rs))
    return out


def census(matrix: CoxeterMatrix, sigma: GraphAutomorphismGroup, J: IndexOrbit):
    """Count configurations among the J-meshes, each mesh counted once."""
    rs = generate(matrix)
    orbits = sigma_orbits(rs, sigma)
    counts = {}
    for conf in meshes_for(rs, orbits, J):
        counts[conf.tag] = counts.get(conf.tag, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# Exports.
# ---------------------------------------------------------------------------


def root_label(coords) -> str:
    return "".join(str(x) for x in coords)


def graph_json(rs: PositiveRootSystem, sigma: GraphAutomorphismGroup) -> dict:
    """Graded root graph: nodes with coordinates/depth/orbit, labeled edges."""
    orbits = sigma_orbits(rs, sigma)
    orbit_of = {}
    for k, orbit in enumerate(orbits):
        for m in orbit.members:
            orbit_of[m] = k
    nodes = [
        {
            "id": i,
            "coordinates": list(rs.roots[i]),
            "depth": rs.depth[i],
            "orbit": orbit_of[i],
        }
        for i in range(rs.size)
    ]
    edges = [
        {"from": upper, "to": lower, "label": label}
        for (upper, label, lower) in sorted(rs.edges())
    ]
    return {"nodes": nodes, "edges": edges, "orbit_count": len(orbits)}
