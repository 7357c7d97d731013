"""The twisted representation on the fixed subspace of V.

The basis of the fixed subspace is indexed by root orbits, each basis
vector being the member sum.  Generator images restrict to this subspace;
their basic parts are block diagonal along the meshes, the blocks match
the reference configuration matrices, and explicit polynomials annihilate the
generators.  This module also certifies irreducibility by spanning the
generated matrix algebra at a rational point and discriminates
non-equivalent parameter choices through eigenvalue tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import permutations as _permutations, product as _product
from math import gcd

import numpy as np

from . import scalars
from .coxeter import (
    CoxeterMatrix,
    GraphAutomorphismGroup,
    IndexOrbit,
    QuotientMatrix,
    parse_sigma_spec,
    parse_type_spec,
    quotient_matrix,
)
from .errors import (
    BudgetExceeded,
    DecompositionMismatch,
    NotSigmaStable,
    UnsupportedOrbitType,
)
from .lkrep import (
    LKContext,
    RepMatrix,
    build_lk_context,
    charpoly,
    outer,
    poly_at_matrix,
    rank,
    row_times_matrix,
)
from .rootsys import meshes_for, sigma_orbits
from .scalars import ONE, ZERO, Poly, Scalar, Specialization, as_fraction, specialize

MODULAR_PRIMES = (469762049, 167772161, 104857601)  # < 2^29: safe in int64 matmul


# ---------------------------------------------------------------------------
# Orbit basis and restriction.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitBasis:
    """Ordered root orbits spanning the fixed subspace."""

    orbits: tuple  # SigmaOrbit, sorted by (depth, least member coords)
    labels: tuple  # printable names

    @classmethod
    def from_orbits(cls, rs, orbits):
        labels = tuple(
            "+".join(str(rs.roots[m]) for m in o.members[:1])
            + (f"(x{o.size})" if o.size > 1 else "")
            for o in orbits
        )
        return cls(tuple(orbits), labels)

    @property
    def size(self):
        return len(self.orbits)

    def position_of_members(self, members: frozenset) -> int:
        for k, o in enumerate(self.orbits):
            if set(o.members) == set(members):
                return k
        raise KeyError(f"no orbit with members {sorted(members)}")


def restrict(matrix_on_v: RepMatrix, basis: OrbitBasis, sigma_perms) -> RepMatrix:
    """Induced matrix on orbit-sum coordinates.

    The input must commute with every basis permutation of the
    automorphism action; otherwise the fixed subspace is not stabilized.
    """
    rows = matrix_on_v.rows
    n = matrix_on_v.size
    for perm in sigma_perms:
        for i in range(n):
            pi = perm[i]
            for j in range(n):
                if rows[pi][perm[j]] != rows[i][j]:
                    raise NotSigmaStable(
                        f"entry ({i},{j}) breaks commutation with the orbit action"
                    )
    out = []
    for target in basis.orbits:
        rep = target.members[0]
        row = []
        for source in basis.orbits:
            row.append(sum((rows[rep][alpha] for alpha in source.members), ZERO))
        out.append(row)
    return RepMatrix(tuple(range(basis.size)), out)


def restrict_row(row, basis: OrbitBasis):
    """Restriction of a linear form given by root-coordinate values."""
    return tuple(sum((row[alpha] for alpha in o.members), ZERO) for o in basis.orbits)


# ---------------------------------------------------------------------------
# Reference blocks, one per configuration diagram.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _block_table():
    a, b, c, d = scalars.a, scalars.b, scalars.c, scalars.d
    dk = scalars.dcheck
    x2_plus_cube = Poly([(d * dk) ** 3, ZERO, ONE])
    table = {
        "A1": ([[0]], Poly.from_factors([ZERO])),
        "A2": ([[d]], Poly.from_factors([d])),
        "A3": ([[a, b], [c, 0]], Poly.from_factors([d, dk])),
        "B1": ([[0]], Poly.from_factors([ZERO])),
        "B2": ([[d * d]], Poly.from_factors([d * d])),
        "B3": ([[a * d, b * d], [c * d, 0]], Poly.from_factors([d * d, d * dk])),
        "B4": (
            [[a * a, 2 * a * b, b * b], [a * c, b * c, 0], [c * c, 0, 0]],
            Poly.from_factors([d * d, d * dk, dk * dk]),
        ),
        "B5": (
            [
                [a * a, a * b, a * b, b * b],
                [a * c, 0, b * c, 0],
                [a * c, b * c, 0, 0],
                [c * c, 0, 0, 0],
            ],
            Poly.from_factors([d * d, d * dk, d * dk, dk * dk]),
        ),
        "C1": ([[0]], Poly.from_factors([ZERO])),
        "C2": ([[d ** 3]], Poly.from_factors([d ** 3])),
        "C3": (
            [[a * d * d, b * d * d], [c * d * d, 0]],
            Poly.from_factors([d ** 3, d * d * dk]),
        ),
        "C4": (
            [
                [a * a * d, a * b * d, a * b * d, b * b * d],
                [a * c * d, 0, b * c * d, 0],
                [a * c * d, b * c * d, 0, 0],
                [c * c * d, 0, 0, 0],
            ],
            Poly.from_factors([d ** 3, d * d * dk, d * d * dk, d * dk * dk]),
        ),
        "C5": (
            [
                [a ** 3, 3 * a * a * b, 3 * a * b * b, b ** 3],
                [a * a * c, 2 * a * b * c, b * b * c, 0],
                [a * c * c, b * c * c, 0, 0],
                [c ** 3, 0, 0, 0],
            ],
            Poly.from_factors([d ** 3, d * d * dk, d * dk * dk, dk ** 3]),
        ),
        "C6": (
            [
                [a ** 3, a * a * b, a * a * b, a * a * b, a * b * b, a * b * b, a * b * b, b ** 3],
                [a * a * c, 0, a * b * c, a * b * c, 0, 0, b * b * c, 0],
                [a * a * c, a * b * c, 0, a * b * c, 0, b * b * c, 0, 0],
                [a * a * c, a * b * c, a * b * c, 0, b * b * c, 0, 0, 0],
                [a * c * c, 0, 0, b * c * c, 0, 0, 0, 0],
                [a * c * c, 0, b * c * c, 0, 0, 0, 0, 0],
                [a * c * c, b * c * c, 0, 0, 0, 0, 0, 0],
                [c ** 3, 0, 0, 0, 0, 0, 0, 0],
            ],
            Poly.from_factors(
                [d ** 3] + [d * d * dk] * 3 + [d * dk * dk] * 3 + [dk ** 3]
            ),
        ),
        "D1": ([[0, 0], [0, 0]], Poly.from_factors([ZERO, ZERO])),
        "D2": ([[d ** 3]], Poly.from_factors([d ** 3])),
        "D3": (
            [
                [a * d * d, a * b * d, b * b * d],
                [a * c * d, b * c * d, 0],
                [c * c * d, 0, 0],
            ],
            Poly.from_factors([d ** 3, x2_plus_cube]),
        ),
        "D4": (
            [
                [a * (a * a + b * c), 2 * a * a * b, 2 * a * b * b, b ** 3],
                [a * a * c, 2 * a * b * c, b * b * c, 0],
                [a * c * c, b * c * c, 0, 0],
                [c ** 3, 0, 0, 0],
            ],
            Poly.from_factors([d ** 3, x2_plus_cube, dk ** 3]),
        ),
        "D5": (
            [
                [a * (a * a + b * c), a * a * b, a * a * b, a * b * b, a * b * b, b ** 3],
                [a * a * c, a * b * c, a * b * c, 0, b * b * c, 0],
                [a * a * c, a * b * c, a * b * c, b * b * c, 0, 0],
                [a * c * c, 0, b * c * c, 0, 0, 0],
                [a * c * c, b * c * c, 0, 0, 0, 0],
                [c ** 3, 0, 0, 0, 0, 0],
            ],
            Poly.from_factors([d ** 3, x2_plus_cube, x2_plus_cube, dk ** 3]),
        ),
    }
    out = {}
    for tag, (entries, chi) in table.items():
        rows = tuple(
            tuple(x if isinstance(x, Scalar) else scalars.FIELD(x) for x in row)
            for row in entries
        )
        out[tag] = (rows, chi)
    return out


def expected_block(tag: str, spec: Specialization | None = None):
    """Reference configuration matrix and its characteristic polynomial."""
    rows, chi = _block_table()[tag]
    if spec is not None and spec.values:
        rows = tuple(tuple(specialize(x, spec) for x in row) for row in rows)
        chi = Poly([specialize(x, spec) for x in chi.coeffs])
    matrix = RepMatrix(tuple(range(len(rows))), rows)
    return matrix, chi


#: Polynomials that annihilate larger blocks than their own ("already
#: annihilates" facts): tag -> factor list of the smaller polynomial.
SPARE_ANNIHILATORS = {
    "B5": "B4",
    "C6": "C5",
    "D5": "D4",
}


def c4_cubic() -> Poly:
    d, dk = scalars.d, scalars.dcheck
    return Poly.from_factors([d ** 3, d * d * dk, d * dk * dk])


# ---------------------------------------------------------------------------
# Annihilating polynomials by orbit type.
# ---------------------------------------------------------------------------


def type_polynomial(orbit_type: str) -> Poly:
    d, dk = scalars.d, scalars.dcheck
    if orbit_type == "A":
        return Poly.from_factors([d, dk])
    if orbit_type == "B":
        return Poly.from_factors([d * d, d * dk, dk * dk])
    if orbit_type == "C":
        return Poly.from_factors([d ** 3, d * d * dk, d * dk * dk, dk ** 3])
    if orbit_type == "D":
        return Poly.from_factors(
            [d ** 3, Poly([(d * dk) ** 3, ZERO, ONE]), dk ** 3]
        )
    raise UnsupportedOrbitType(orbit_type)


def expected_form_value(orbit_type: str) -> Scalar:
    """f_J at the sum of simple roots of J, as a multiple of the diagonal."""
    d = scalars.d
    mult = {"A": ONE, "B": d, "C": d * d, "D": scalars.b * scalars.c}[orbit_type]
    return mult * scalars.f


def cochain_polynomial(p: Poly, form_value: Scalar) -> Poly:
    """The degree-lowering companion of p for a rank-one update.

    Coefficients follow the recurrence q_{deg-1} = p_deg and
    q_{n-1} = p_n + q_n * form_value.
    """
    deg = p.degree
    q = [ZERO] * deg
    q[deg - 1] = p.coeffs[deg]
    for n in range(deg - 1, 0, -1):
        q[n - 1] = p.coeffs[n] + q[n] * form_value
    return Poly(q)


# ---------------------------------------------------------------------------
# Twisted generators.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistedGenerator:
    orbit: IndexOrbit
    delta_word: tuple
    psi: RepMatrix
    phi: RepMatrix
    form_row: tuple  # f_J on the orbit basis
    second_form_row: tuple | None  # f'_J, type D only
    theta_pos: int  # basis position of the simple-root orbit
    theta_prime_pos: int | None  # type D only


@dataclass(frozen=True, eq=False)
class TwistedContext:
    matrix: CoxeterMatrix
    sigma: GraphAutomorphismGroup
    lk: LKContext
    orbits: tuple
    basis: OrbitBasis
    quotient: QuotientMatrix
    gens: dict  # orbit key -> TwistedGenerator
    spec: Specialization
    sigma_perms: tuple
    _mesh_cache: dict = dc_field(default_factory=dict, repr=False)
    _ann_cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def rs(self):
        return self.lk.rs

    @property
    def dimension(self) -> int:
        return self.basis.size

    def index_orbits(self):
        return self.quotient.orbits

    def gen(self, key_or_orbit) -> TwistedGenerator:
        key = key_or_orbit.key if isinstance(key_or_orbit, IndexOrbit) else key_or_orbit
        return self.gens[key]

    def scalar(self, x: Scalar) -> Scalar:
        return specialize(x, self.spec) if self.spec.values else x

    def meshes(self, J: IndexOrbit):
        if J.key not in self._mesh_cache:
            self._mesh_cache[J.key] = tuple(meshes_for(self.rs, self.orbits, J))
        return self._mesh_cache[J.key]

    def image_of_quotient_word(self, word) -> RepMatrix:
        out = RepMatrix.identity(tuple(range(self.dimension)))
        for key in word:
            out = out * self.gens[key].psi
        return out


def _build_generator(
    lk: LKContext, basis: OrbitBasis, sigma_perms, J: IndexOrbit
) -> TwistedGenerator:
    rs = lk.rs
    word = J.delta_word()
    psi = restrict(lk.image_of_word(word), basis, sigma_perms)
    phi = restrict(lk.phi_of_word(word), basis, sigma_perms)
    theta_pos = basis.position_of_members(
        frozenset(rs.simple_index(i) for i in J.members)
    )
    theta_prime_pos = None
    spec = lk.spec
    d = specialize(scalars.d, spec)
    if J.orbit_type == "A":
        row = restrict_row(lk.family.row(J.members[0]), basis)
        second = None
    elif J.orbit_type in ("B", "C"):
        base = restrict_row(lk.family.row(J.members[0]), basis)
        factor = d if J.orbit_type == "B" else d * d
        row = tuple(factor * x for x in base)
        second = None
    else:  # type D
        i, j = J.members
        bc = specialize(scalars.b * scalars.c, spec)
        a = specialize(scalars.a, spec)
        c = specialize(scalars.c, spec)
        fj = lk.family.row(j)
        fj_phi_i = row_times_matrix(fj, lk.phi[i])
        full_row = tuple(bc * x + a * y for x, y in zip(fj, fj_phi_i))
        row = restrict_row(full_row, basis)
        second = tuple(c * x for x in restrict_row(fj_phi_i, basis))
        pair_coords = tuple(
            x + y
            for x, y in zip(
                rs.roots[rs.simple_index(i)], rs.roots[rs.simple_index(j)]
            )
        )
        theta_prime_pos = basis.position_of_members(
            frozenset({rs.root_index(pair_coords)})
        )
    expected = phi + outer(theta_pos, row, phi.labels)
    if second is not None:
        expected = expected + outer(theta_prime_pos, second, phi.labels)
    if expected != psi:
        raise DecompositionMismatch(
            f"twisted generator for {J.members} does not split as restriction "
            "plus form terms"
        )
    return TwistedGenerator(
        J, word, psi, phi, row, second, theta_pos, theta_prime_pos
    )


@lru_cache(maxsize=None)
def _build_cached(
    matrix: CoxeterMatrix, sigma: GraphAutomorphismGroup, spec_key: tuple
) -> TwistedContext:
    spec = Specialization(dict(spec_key))
    lk = build_lk_context(matrix, spec)
    rs = lk.rs
    orbits = tuple(sigma_orbits(rs, sigma))
    basis = OrbitBasis.from_orbits(rs, orbits)
    sigma_perms = tuple(rs.sigma_perm(m) for m in sigma.as_maps())
    quotient = quotient_matrix(matrix, sigma)
    gens = {
        J.key: _build_generator(lk, basis, sigma_perms, J)
        for J in quotient.orbits
    }
    return TwistedContext(
        matrix, sigma, lk, orbits, basis, quotient, gens, spec, sigma_perms
    )


def build_twisted_context(
    matrix: CoxeterMatrix,
    sigma: GraphAutomorphismGroup,
    spec: Specialization | None = None,
) -> TwistedContext:
    spec = spec or Specialization()
    return _build_cached(matrix, sigma, spec.key())


@lru_cache(maxsize=None)
def _cached_context(type_spec: str, sigma_spec: str, spec_key: tuple) -> TwistedContext:
    matrix = parse_type_spec(type_spec)
    sigma = parse_sigma_spec(matrix, sigma_spec)
    return build_twisted_context(matrix, sigma, Specialization(dict(spec_key)))


def build_context(
    type_spec: str, sigma_spec: str = "full", params: dict | None = None
) -> TwistedContext:
    """Resolve type/sigma text specs and build (with caching)."""
    spec = Specialization(params or {})
    return _cached_context(type_spec, sigma_spec, spec.key())


# ---------------------------------------------------------------------------
# Block verification.
# ---------------------------------------------------------------------------


def _tie_permutations(positions, orbits):
    """All reorderings of equal-depth orbits, bottom-up order preserved."""
    groups = []
    k = 0
    while k < len(positions):
        j = k
        while j < len(positions) and orbits[j].depth == orbits[k].depth:
            j += 1
        groups.append(list(range(k, j)))
        k = j
    for combo in _product(*[_permutations(g) for g in groups]):
        flat = [i for group in combo for i in group]
        yield [positions[i] for i in flat]


def verify_blocks(ctx: TwistedContext, J: IndexOrbit) -> dict:
    """Check block-diagonality of the basic part along meshes and match
    each diagonal block against its reference configuration matrix and
    characteristic polynomial (exact equality)."""
    gen = ctx.gen(J)
    meshes = ctx.meshes(J)
    position = {o.members: k for k, o in enumerate(ctx.basis.orbits)}
    mesh_of = {}
    for mi, conf in enumerate(meshes):
        for o in conf.orbits:
            mesh_of[position[o.members]] = mi
    off_block_zero = all(
        not gen.phi.rows[i][j]
        for i in range(ctx.dimension)
        for j in range(ctx.dimension)
        if mesh_of[i] != mesh_of[j]
    )
    blocks = []
    for conf in meshes:
        positions = [position[o.members] for o in conf.orbits]
        template, chi = expected_block(conf.tag, ctx.spec)
        matched_order = None
        for candidate in _tie_permutations(positions, conf.orbits):
            sub = gen.phi.submatrix(candidate)
            if sub.rows == template.rows:
                matched_order = candidate
                break
        sub = gen.phi.submatrix(positions)
        chi_computed = charpoly(sub)
        blocks.append(
            {
                "tag": conf.tag,
                "orbit_positions": positions,
                "matches_template": matched_order is not None,
                "matched_order": matched_order,
                "charpoly_ok": chi_computed == chi,
            }
        )
    return {
        "J": list(J.members),
        "off_block_zero": off_block_zero,
        "blocks": blocks,
        "pass": off_block_zero
        and all(x["matches_template"] and x["charpoly_ok"] for x in blocks),
    }


# ---------------------------------------------------------------------------
# Annihilators.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnihilatorData:
    orbit: IndexOrbit
    p: Poly
    q: Poly
    form_value: Scalar
    eigen_table: dict | None


def annihilator(ctx: TwistedContext, J: IndexOrbit) -> tuple:
    """Annihilating data for one twisted generator plus its verification.

    Checks: the type polynomial maps everything into the line(s) spanned by
    the simple-orbit vector(s); appending the form-value root kills the
    generator; and the evaluation splits as basic part plus rank-one (or
    rank-two) form terms with the companion polynomial.
    """
    if J.key in ctx._ann_cache:
        return ctx._ann_cache[J.key]
    gen = ctx.gen(J)
    p = Poly([ctx.scalar(x) for x in type_polynomial(J.orbit_type).coeffs])
    form_value = gen.form_row[gen.theta_pos]
    expected_value = ctx.scalar(expected_form_value(J.orbit_type))
    q = cochain_polynomial(p, form_value)
    p_at_psi = poly_at_matrix(p, gen.psi)
    allowed = {gen.theta_pos}
    if gen.theta_prime_pos is not None:
        allowed.add(gen.theta_prime_pos)
    image_ok = all(
        not p_at_psi.rows[i][j]
        for i in range(ctx.dimension)
        for j in range(ctx.dimension)
        if i not in allowed
    )
    killer = p.shifted_by_root(form_value)
    annihilates = poly_at_matrix(killer, gen.psi).is_zero()
    q_at_phi = poly_at_matrix(q, gen.phi)
    decomposition = poly_at_matrix(p, gen.phi) + outer(
        gen.theta_pos, row_times_matrix(gen.form_row, q_at_phi), gen.phi.labels
    )
    if gen.second_form_row is not None:
        decomposition = decomposition + outer(
            gen.theta_prime_pos,
            row_times_matrix(gen.second_form_row, q_at_phi),
            gen.phi.labels,
        )
    split_ok = decomposition == p_at_psi
    try:
        table = spectrum(ctx, J, validate=False)
    except UnsupportedOrbitType:
        table = None
    data = AnnihilatorData(J, p, q, form_value, table)
    report = {
        "J": list(J.members),
        "form_value_ok": form_value == expected_value,
        "image_in_span_ok": image_ok,
        "annihilates": annihilates,
        "split_ok": split_ok,
        "pass": form_value == expected_value and image_ok and annihilates and split_ok,
    }
    ctx._ann_cache[J.key] = (data, report)
    return data, report


def spare_annihilator_report(ctx: TwistedContext, J: IndexOrbit) -> list:
    """Facts of the form "the smaller polynomial already kills the bigger
    block", checked on any occurring blocks of the basic part."""
    gen = ctx.gen(J)
    position = {o.members: k for k, o in enumerate(ctx.basis.orbits)}
    out = []
    for conf in ctx.meshes(J):
        extra = None
        if conf.tag in SPARE_ANNIHILATORS:
            extra = Poly(
                [ctx.scalar(x) for x in _block_table()[SPARE_ANNIHILATORS[conf.tag]][1].coeffs]
            )
            name = f"P_{SPARE_ANNIHILATORS[conf.tag]}"
        elif conf.tag == "C4":
            extra = Poly([ctx.scalar(x) for x in c4_cubic().coeffs])
            name = "cubic"
        if extra is None:
            continue
        positions = [position[o.members] for o in conf.orbits]
        sub = gen.phi.submatrix(positions)
        out.append(
            {
                "tag": conf.tag,
                "polynomial": name,
                "annihilates": poly_at_matrix(extra, sub).is_zero(),
            }
        )
    return out


# ---------------------------------------------------------------------------
# Coupling coefficients.
# ---------------------------------------------------------------------------


def closed_coupling_form(orbit_type: str, k_size: int) -> Scalar | None:
    a, d, dk, f = scalars.a, scalars.d, scalars.dcheck, scalars.f
    if orbit_type == "A":
        return -k_size * a * f
    if orbit_type == "B":
        return a * d * d * f * (dk * dk - d * f)
    if orbit_type == "C":
        return a * d ** 5 * f * (-(d ** 3) * f * f + a * d * dk * dk * f - dk ** 5)
    return None


def coupling_coefficient(ctx: TwistedContext, J: IndexOrbit, K: IndexOrbit) -> dict:
    """Value of the form composed with the companion polynomial of the
    basic part, at the simple-orbit vector of the other generator."""
    gen = ctx.gen(J)
    data, _ = annihilator(ctx, J)
    q_at_phi = poly_at_matrix(data.q, gen.phi)
    row = row_times_matrix(gen.form_row, q_at_phi)
    value = row[ctx.gen(K).theta_pos]
    m = ctx.quotient.m(J.key, K.key)
    closed = closed_coupling_form(J.orbit_type, len(K.members))
    if closed is not None:
        closed = ctx.scalar(closed)
    if m == 2:
        matches = value == ZERO
        comparison = "zero"
    elif closed is not None:
        matches = value == closed
        comparison = "closed-form"
    else:
        matches = None
        comparison = "none"
    return {
        "J": list(J.members),
        "K": list(K.members),
        "m": m,
        "value": value,
        "closed_form": closed,
        "comparison": comparison,
        "matches": matches,
    }


# ---------------------------------------------------------------------------
# Spectra.
# ---------------------------------------------------------------------------


def census_counts(ctx: TwistedContext, J: IndexOrbit) -> dict:
    counts = {}
    for conf in ctx.meshes(J):
        counts[conf.tag] = counts.get(conf.tag, 0) + 1
    return counts


def spectrum(ctx: TwistedContext, J: IndexOrbit, validate: bool = True) -> dict:
    """Eigenvalue -> multiplicity for a type A or B generator.

    Multiplicities come from the configuration census; when validating,
    the product of the distinct linear factors annihilates the generator
    exactly and the rank of each shifted generator at the default star
    point confirms every multiplicity.
    """
    if J.orbit_type not in ("A", "B"):
        raise UnsupportedOrbitType(
            f"spectrum is only computed for types A and B, not {J.orbit_type}"
        )
    counts = census_counts(ctx, J)
    n = lambda tag: counts.get(tag, 0)
    d, dk, f = scalars.d, scalars.dcheck, scalars.f
    if J.orbit_type == "A":
        raw = [
            (d, n("A2") + n("A3")),
            (dk, n("A3")),
            (f, n("A1")),
        ]
    else:
        raw = [
            (d * d, n("B2") + n("B3") + n("B4")),
            (d * dk, n("B3") + n("B4")),
            (dk * dk, n("B4")),
            (d * f, n("B1")),
        ]
    table = {ctx.scalar(value): mult for value, mult in raw if mult > 0}
    if len(table) != sum(1 for _, m in raw if m > 0):
        raise ValueError("eigenvalues are not pairwise distinct under these parameters")
    if validate:
        gen = ctx.gen(J)
        minimal = Poly.from_factors(list(table))
        if not poly_at_matrix(minimal, gen.psi).is_zero():
            raise AssertionError("distinct-eigenvalue product fails to annihilate")
        work_ctx, work_gen = ctx, gen
        if not ctx.spec.values:
            work_ctx = build_twisted_context(
                ctx.matrix, ctx.sigma, scalars.DEFAULT_STAR
            )
            work_gen = work_ctx.gen(J)
        for value, mult in spectrum(work_ctx, J, validate=False).items():
            shifted = work_gen.psi - RepMatrix.identity(work_gen.psi.labels).scale(value)
            if rank(shifted) != work_ctx.dimension - mult:
                raise AssertionError(f"rank check fails for eigenvalue {value}")
    return table


# ---------------------------------------------------------------------------
# Burnside certificate.
# ---------------------------------------------------------------------------


def _integer_matrix(M: RepMatrix):
    entries = [[as_fraction(x) for x in row] for row in M.rows]
    denom = 1
    for row in entries:
        for x in row:
            denom = denom * x.denominator // gcd(denom, x.denominator)
    return [[int(x * denom) for x in row] for row in entries]


def burnside_certificate(
    ctx: TwistedContext, max_products: int = 64
) -> dict:
    """Dimension of the unital algebra generated by the twisted generators.

    Runs at a rational point with the diagonal value nonzero; vectors are
    reduced modulo a large prime, so the reported dimension is a lower
    bound for the generic one and the certificate is exact when it reaches
    the full matrix-algebra dimension.
    """
    spec = ctx.spec
    v = spec.values
    if not all(k in v for k in ("a", "b", "d", "f")):
        raise ValueError("certificate needs numeric a, b, d, f")
    if not (v["b"] > 0 and v["d"] > v["a"] > 0 and v["f"] != 0):
        raise ValueError("certificate needs d > a > 0, b > 0 and nonzero f")
    n = ctx.dimension
    gens = [_integer_matrix(ctx.gens[k].psi) for k in sorted(ctx.gens)]
    # row accumulations in the modular matmul must stay inside int64
    usable = [p for p in MODULAR_PRIMES if n * (p - 1) ** 2 < 2 ** 63]
    if not usable:
        raise ValueError(f"quotient dimension {n} too large for the modular span")
    last_error = None
    for prime in usable:
        try:
            return _burnside_mod(gens, n, prime, max_products)
        except ZeroDivisionError as exc:  # prime divided a pivot scale
            last_error = exc
    raise last_error


def _burnside_mod(gens, n, prime, max_products):
    gens = [
        np.array([[x % prime for x in row] for row in g], dtype=np.int64)
        for g in gens
    ]
    dim_target = n * n
    pivots = []  # (column, reduced row)

    def reduce_vec(vec):
        for col, row in pivots:
            coeff = int(vec[col])
            if coeff:
                vec = (vec - coeff * row) % prime
        return vec

    def insert(vec):
        vec = reduce_vec(vec)
        nz = np.nonzero(vec)[0]
        if nz.size == 0:
            return False
        col = int(nz[0])
        inv = pow(int(vec[col]), prime - 2, prime)
        pivots.append((col, (vec * inv) % prime))
        return True

    ident = np.eye(n, dtype=np.int64)
    queue = [ident]
    insert(ident.flatten().copy())
    level = 0
    while queue and len(pivots) < dim_target:
        level += 1
        if level > max_products:
            raise BudgetExceeded(
                f"algebra span not stabilized within {max_products} product rounds"
            )
        nxt = []
        for M in queue:
            for g in gens:
                prod = (g @ M) % prime
                if insert(prod.flatten().copy()):
                    nxt.append(prod)
                    if len(pivots) == dim_target:
                        break
            if len(pivots) == dim_target:
                break
        queue = nxt
    dimension = len(pivots)
    return {
        "n": n,
        "algebra_dimension": dimension,
        "full_dimension": dim_target,
        "irreducible": dimension == dim_target,
        "prime": prime,
        "rounds": level,
    }


# ---------------------------------------------------------------------------
# Non-equivalence discriminant.
# ---------------------------------------------------------------------------


def _quotient_isomorphisms(qa: QuotientMatrix, qb: QuotientMatrix):
    la, lb = qa.index_set, qb.index_set
    if len(la) != len(lb):
        return
    for image in _permutations(lb):
        mapping = dict(zip(la, image))
        if all(
            qa.m(i, j) == qb.m(mapping[i], mapping[j]) for i in la for j in la
        ):
            yield mapping


def equivalence_discriminant(ctx_a: TwistedContext, ctx_b: TwistedContext) -> dict:
    """Compare eigenvalue tables generator-by-generator across all
    identifications of the two quotient presentations.

    Returns a not-equivalent verdict with a witness, or inconclusive when
    some identification matches on every comparable generator.
    """
    if ctx_a.dimension != ctx_b.dimension:
        return {
            "verdict": "NotEquivalent",
            "reason": "dimension",
            "witness": {"dim_a": ctx_a.dimension, "dim_b": ctx_b.dimension},
        }
    isos = list(_quotient_isomorphisms(ctx_a.quotient, ctx_b.quotient))
    if not isos:
        return {
            "verdict": "NotEquivalent",
            "reason": "quotient-type",
            "witness": {
                "quotient_a": ctx_a.quotient.index_set,
                "quotient_b": ctx_b.quotient.index_set,
            },
        }
    first_witness = None
    for mapping in isos:
        witness = None
        for J in ctx_a.quotient.orbits:
            K = ctx_b.quotient.orbit_by_key(mapping[J.key])
            known_a = J.orbit_type in ("A", "B")
            known_b = K.orbit_type in ("A", "B")
            if not (known_a and known_b):
                continue
            table_a = spectrum(ctx_a, J, validate=False)
            table_b = spectrum(ctx_b, K, validate=False)
            multiset_a = sorted((scalars.render(v), m) for v, m in table_a.items())
            multiset_b = sorted((scalars.render(v), m) for v, m in table_b.items())
            if multiset_a != multiset_b:
                witness = {
                    "generator_a": list(J.members),
                    "generator_b": list(K.members),
                    "spectrum_a": multiset_a,
                    "spectrum_b": multiset_b,
                }
                break
        if witness is None:
            return {"verdict": "Inconclusive", "reason": "all comparable spectra agree"}
        if first_witness is None:
            first_witness = witness
    return {"verdict": "NotEquivalent", "reason": "spectrum", "witness": first_witness}


# ---------------------------------------------------------------------------
# Quotient braid relations and miscellaneous checks.
# ---------------------------------------------------------------------------


def verify_quotient_braid(ctx: TwistedContext) -> list:
    """Alternating products of twisted generators agree at the quotient
    Coxeter entries."""
    out = []
    orbits = ctx.quotient.orbits
    for a_pos, J in enumerate(orbits):
        for K in orbits[a_pos + 1 :]:
            m = ctx.quotient.m(J.key, K.key)
            left_word = ((J.key, K.key) * ((m + 1) // 2))[:m]
            right_word = ((K.key, J.key) * ((m + 1) // 2))[:m]
            lhs = ctx.image_of_quotient_word(left_word)
            rhs = ctx.image_of_quotient_word(right_word)
            out.append(
                {"pair": [J.key, K.key], "m": m, "pass": lhs == rhs}
            )
    return out


def intermediate_form_identities(ctx: TwistedContext) -> list:
    """Row identities feeding the type-D forms: composing with
    bc*Id + a*phi_i equals composing with phi_i twice, and for an edge
    pair the double composition is symmetric."""
    lk = ctx.lk
    rs = ctx.rs
    a = ctx.scalar(scalars.a)
    bc = ctx.scalar(scalars.b * scalars.c)
    out = []
    for i in rs.matrix.index_set:
        for j in rs.matrix.index_set:
            if i == j:
                continue
            fj = lk.family.row(j)
            lhs = tuple(
                bc * x + a * y
                for x, y in zip(fj, row_times_matrix(fj, lk.phi[i]))
            )
            rhs = row_times_matrix(row_times_matrix(fj, lk.phi[i]), lk.phi[i])
            ok = lhs == rhs
            entry = {"pair": [i, j], "first": ok}
            if rs.matrix.m(i, j) == 3:
                fi = lk.family.row(i)
                sym = row_times_matrix(
                    row_times_matrix(fi, lk.phi[j]), lk.phi[i]
                )
                entry["second"] = rhs == sym
            out.append(entry)
    return out
