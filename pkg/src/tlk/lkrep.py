"""The untwisted representation on the root-indexed module V.

Generator images split as psi_i = phi_i + f_i (x) e_{alpha_i}: phi_i acts
through the graded root graph (zero on e_{alpha_i}, d on reflection-fixed
roots, the a/b/c exchange on edge pairs) and the linear forms f_i are the
unique family with prescribed diagonal value solving the commutation
constraints, found by constraint propagation in depth order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import scalars
from .coxeter import CoxeterMatrix, GraphAutomorphismGroup
from .errors import InconsistentFamily, UnderdeterminedFamily
from .rootsys import PositiveRootSystem, generate
from .scalars import FIELD, ONE, ZERO, Poly, Scalar, Specialization, specialize


class RepMatrix:
    """Dense square matrix over the scalar field with labeled basis."""

    __slots__ = ("labels", "rows")

    def __init__(self, labels, rows):
        self.labels = tuple(labels)
        self.rows = tuple(tuple(r) for r in rows)
        assert len(self.rows) == len(self.labels)

    @classmethod
    def identity(cls, labels):
        n = len(labels)
        return cls(labels, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, labels):
        n = len(labels)
        return cls(labels, [[ZERO] * n for _ in range(n)])

    @classmethod
    def from_columns(cls, labels, columns):
        n = len(labels)
        return cls(labels, [[columns[j][i] for j in range(n)] for i in range(n)])

    @property
    def size(self):
        return len(self.rows)

    def entry(self, i, j) -> Scalar:
        return self.rows[i][j]

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def __eq__(self, other):
        return isinstance(other, RepMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __mul__(self, other):
        if isinstance(other, RepMatrix):
            n = self.size
            out = [[ZERO] * n for _ in range(n)]
            for i in range(n):
                row_a = self.rows[i]
                out_i = out[i]
                for k in range(n):
                    aik = row_a[k]
                    if not aik:
                        continue
                    row_b = other.rows[k]
                    for j in range(n):
                        bkj = row_b[j]
                        if bkj:
                            out_i[j] = out_i[j] + aik * bkj
            return RepMatrix(self.labels, out)
        return self.scale(other)

    def scale(self, s: Scalar):
        return RepMatrix(self.labels, [[x * s for x in row] for row in self.rows])

    def __add__(self, other):
        return RepMatrix(
            self.labels,
            [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)],
        )

    def __sub__(self, other):
        return RepMatrix(
            self.labels,
            [[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)],
        )

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def apply(self, vector):
        """Matrix times coordinate column."""
        return tuple(
            sum((row[j] * v for j, v in enumerate(vector) if v), ZERO)
            for row in self.rows
        )

    def submatrix(self, indices):
        return RepMatrix(
            [self.labels[i] for i in indices],
            [[self.rows[i][j] for j in indices] for i in indices],
        )

    def map_entries(self, fn):
        return RepMatrix(self.labels, [[fn(x) for x in row] for row in self.rows])

    def transpose(self):
        n = self.size
        return RepMatrix(self.labels, [[self.rows[j][i] for j in range(n)] for i in range(n)])

    def dump(self) -> dict:
        return {
            "labels": list(self.labels),
            "entries": [[scalars.render(x) for x in row] for row in self.rows],
        }

    def __repr__(self):
        return f"RepMatrix({self.size}x{self.size} on {self.labels[:4]}...)"


def row_times_matrix(row, M: RepMatrix):
    n = M.size
    out = [ZERO] * n
    for k, rk in enumerate(row):
        if not rk:
            continue
        mrow = M.rows[k]
        for j in range(n):
            if mrow[j]:
                out[j] = out[j] + rk * mrow[j]
    return tuple(out)


def outer(column_index: int, row, labels) -> RepMatrix:
    """Rank-one matrix sending e_j to row[j] * e_{column_index}."""
    n = len(labels)
    rows = [[ZERO] * n for _ in range(n)]
    rows[column_index] = list(row)
    return RepMatrix(labels, rows)


def charpoly(M: RepMatrix) -> Poly:
    """Characteristic polynomial det(X*I - M) by the division-free
    Berkowitz recursion on trailing principal submatrices."""
    n = M.size
    if n == 0:
        return Poly([ONE])
    rows = M.rows
    poly = [ONE, -rows[n - 1][n - 1]]  # 1x1 bottom-right block, highest first
    for size in range(2, n + 1):
        i0 = n - size
        pivot = rows[i0][i0]
        R = rows[i0][i0 + 1 :]
        C = [rows[r][i0] for r in range(i0 + 1, n)]
        B = [rows[r][i0 + 1 :] for r in range(i0 + 1, n)]
        col = [ONE, -pivot]
        v = list(C)
        for _ in range(size - 1):
            col.append(-sum((x * y for x, y in zip(R, v) if x and y), ZERO))
            v = [sum((brow[k] * v[k] for k in range(len(v)) if brow[k] and v[k]), ZERO) for brow in B]
        new = [ZERO] * (size + 1)
        for shift, cval in enumerate(col):
            if not cval:
                continue
            for k, pval in enumerate(poly):
                if shift + k <= size and pval:
                    new[shift + k] = new[shift + k] + cval * pval
        poly = new
    return Poly(list(reversed(poly)))


def poly_at_matrix(p: Poly, M: RepMatrix) -> RepMatrix:
    """Horner evaluation of p at a square matrix."""
    ident = RepMatrix.identity(M.labels)
    acc = RepMatrix.zero(M.labels)
    for coeff in reversed(p.coeffs):
        acc = acc * M + ident.scale(coeff)
    return acc


def rank(M: RepMatrix) -> int:
    """Row rank by Gaussian elimination over the field."""
    rows = [list(r) for r in M.rows]
    n = len(rows)
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, n) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = ONE / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == n:
            break
    return r


def determinant(M: RepMatrix) -> Scalar:
    """Exact determinant via the characteristic polynomial constant term."""
    chi = charpoly(M)
    chi0 = chi.coeffs[0] if chi.coeffs else ONE
    return chi0 if M.size % 2 == 0 else -chi0


# ---------------------------------------------------------------------------
# phi matrices.
# ---------------------------------------------------------------------------


def phi_matrix(rs: PositiveRootSystem, label, spec: Specialization | None = None) -> RepMatrix:
    """Action of the basic map for one generator on the root basis.

    Column cases: zero on the simple root itself; d on reflection-fixed
    roots; on an edge pair the lower root maps to a*(itself) + c*(upper)
    and the upper root maps to b*(lower).
    """
    a, b, c, d = scalars.a, scalars.b, scalars.c, scalars.d
    if spec is not None and spec.values:
        a, b, c, d = (specialize(x, spec) for x in (a, b, c, d))
    n = rs.size
    simple = rs.simple_index(label)
    cols = []
    for r in range(n):
        col = [ZERO] * n
        image = rs.reflect(label, r)
        if r == simple:
            pass  # image is the negative root: column stays zero
        elif image == r:
            col[r] = d
        elif rs.depth[image] == rs.depth[r] + 1:
            col[r] = a
            col[image] = c
        else:
            col[image] = b
        cols.append(col)
    return RepMatrix.from_columns(list(range(n)), cols)


# ---------------------------------------------------------------------------
# LK family.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LKFamily:
    """Values of the linear forms: (generator label, root index) -> scalar."""

    rs: PositiveRootSystem
    values: tuple  # row-major: one tuple per generator label, over root indices
    diagonal: Scalar

    def value(self, label, root_idx) -> Scalar:
        return self.values[self.rs.matrix.index_set.index(label)][root_idx]

    def row(self, label):
        return self.values[self.rs.matrix.index_set.index(label)]

    def with_value(self, label, root_idx, new_value) -> "LKFamily":
        """Copy with one table entry replaced (for corruption experiments)."""
        li = self.rs.matrix.index_set.index(label)
        rows = [list(r) for r in self.values]
        rows[li][root_idx] = new_value
        return LKFamily(self.rs, tuple(tuple(r) for r in rows), self.diagonal)

    def specialized(self, spec: Specialization) -> "LKFamily":
        rows = tuple(
            tuple(specialize(x, spec) for x in row) for row in self.values
        )
        return LKFamily(self.rs, rows, specialize(self.diagonal, spec))

    def sigma_symmetric(self, sigma: GraphAutomorphismGroup) -> bool:
        """f_i(e_alpha) = f_{sigma(i)}(e_{sigma(alpha)}) for all inputs."""
        for smap in sigma.as_maps():
            perm = self.rs.sigma_perm(smap)
            for label in self.rs.matrix.index_set:
                for r in range(self.rs.size):
                    if self.value(label, r) != self.value(smap[label], perm[r]):
                        return False
        return True


def _phi_column_terms(rs, label, r):
    """phi_label(e_r) as [(root index, coefficient)] over the symbolic field."""
    image = rs.reflect(label, r)
    if r == rs.simple_index(label):
        return []
    if image == r:
        return [(r, scalars.d)]
    if rs.depth[image] == rs.depth[r] + 1:
        return [(r, scalars.a), (image, scalars.c)]
    return [(image, scalars.b)]


def _constraint_instances(rs):
    """All evaluations of the pair conditions at basis vectors.

    Each instance is a list of (generator label, root index, coefficient)
    whose table-weighted sum must vanish.
    """
    matrix = rs.matrix
    out = []
    for i in matrix.index_set:
        for j in matrix.index_set:
            if i == j:
                continue
            m = matrix.m(i, j)
            for r in range(rs.size):
                terms = [(i, rr, cc) for rr, cc in _phi_column_terms(rs, j, r)]
                if m == 2:
                    terms.append((i, r, -scalars.d))
                else:
                    terms.extend(
                        (j, rr, -cc) for rr, cc in _phi_column_terms(rs, i, r)
                    )
                if terms:
                    out.append(terms)
    return out


def solve_lk_family(rs: PositiveRootSystem, diagonal: Scalar = scalars.f) -> LKFamily:
    """Unique family with the given diagonal value on a connected matrix.

    Depth-one values are pinned by definition; deeper values are pinned by
    scanning constraint instances with a single unknown until a fixpoint,
    then all instances are re-verified.
    """
    matrix = rs.matrix
    labels = matrix.index_set
    table = {}
    for label in labels:
        for r in range(rs.size):
            if rs.depth[r] == 1:
                table[(label, r)] = diagonal if r == rs.simple_index(label) else ZERO
            else:
                table[(label, r)] = None
    instances = _constraint_instances(rs)
    pending = list(instances)
    progress = True
    while progress and pending:
        progress = False
        still = []
        for terms in pending:
            known = ZERO
            unknowns = []
            for label, r, coeff in terms:
                val = table[(label, r)]
                if val is None:
                    unknowns.append((label, r, coeff))
                else:
                    known = known + coeff * val
            if not unknowns:
                continue  # verified later
            if len(unknowns) == 1:
                label, r, coeff = unknowns[0]
                table[(label, r)] = -known / coeff
                progress = True
            else:
                still.append(terms)
        pending = still
    missing = sorted(k for k, v in table.items() if v is None)
    if missing:
        raise UnderdeterminedFamily(f"values never pinned: {missing[:5]}...")
    for terms in instances:
        residual = sum((coeff * table[(label, r)] for label, r, coeff in terms), ZERO)
        if residual:
            raise InconsistentFamily(f"residual {residual} on instance {terms}")
    rows = tuple(tuple(table[(label, r)] for r in range(rs.size)) for label in labels)
    return LKFamily(rs, rows, diagonal)


def family_residuals(family: LKFamily, spec: Specialization | None = None):
    """All constraint residuals for an arbitrary (possibly edited) table.

    When the table holds specialized values, pass the same assignment so
    that the instance coefficients are evaluated consistently.
    """
    rs = family.rs
    out = []
    for terms in _constraint_instances(rs):
        residual = ZERO
        for label, r, coeff in terms:
            if spec is not None and spec.values:
                coeff = specialize(coeff, spec)
            residual = residual + coeff * family.value(label, r)
        out.append(residual)
    return out


# ---------------------------------------------------------------------------
# Context: generator images and word products.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LKContext:
    rs: PositiveRootSystem
    family: LKFamily
    spec: Specialization
    phi: dict  # label -> RepMatrix
    psi: dict  # label -> RepMatrix

    def image_of_word(self, word) -> RepMatrix:
        """Ordered product of generator images; empty word is the identity."""
        out = RepMatrix.identity(tuple(range(self.rs.size)))
        for letter in word:
            out = out * self.psi[letter]
        return out

    def phi_of_word(self, word) -> RepMatrix:
        out = RepMatrix.identity(tuple(range(self.rs.size)))
        for letter in word:
            out = out * self.phi[letter]
        return out


def psi_matrix(rs: PositiveRootSystem, family: LKFamily, label) -> RepMatrix:
    """phi plus the rank-one update writing the form row into the simple
    root coordinate."""
    phi = phi_matrix(rs, label)
    return phi + outer(rs.simple_index(label), family.row(label), phi.labels)


@lru_cache(maxsize=None)
def _symbolic_family(matrix: CoxeterMatrix) -> LKFamily:
    return solve_lk_family(generate(matrix))


def build_lk_context(
    matrix: CoxeterMatrix, spec: Specialization | None = None
) -> LKContext:
    """Solve the family symbolically, then apply the parameter assignment."""
    spec = spec or Specialization()
    family = _symbolic_family(matrix)
    rs = family.rs
    if spec.values:
        family = family.specialized(spec)
    phi = {label: phi_matrix(rs, label, spec) for label in matrix.index_set}
    psi = {
        label: phi[label]
        + outer(rs.simple_index(label), family.row(label), phi[label].labels)
        for label in matrix.index_set
    }
    return LKContext(rs, family, spec, phi, psi)


# ---------------------------------------------------------------------------
# Verification reports.
# ---------------------------------------------------------------------------


def verify_braid_relations(ctx: LKContext):
    """Check the defining relations pairwise on generator images."""
    matrix = ctx.rs.matrix
    report = []
    labels = matrix.index_set
    for i_pos, i in enumerate(labels):
        for j in labels[i_pos + 1 :]:
            m = matrix.m(i, j)
            left = ctx.image_of_word((i, j) * (m // 2) + ((i,) if m % 2 else ()))
            right = ctx.image_of_word((j, i) * (m // 2) + ((j,) if m % 2 else ()))
            report.append(
                {"pair": [i, j], "relation": f"m={m}", "pass": left == right}
            )
    return report


def verify_equivariance(ctx: LKContext, sigma: GraphAutomorphismGroup):
    """sigma_V . psi_i = psi_{sigma(i)} . sigma_V for each generator."""
    rs = ctx.rs
    report = []
    for smap in sigma.as_maps():
        perm = rs.sigma_perm(smap)
        sigma_v = RepMatrix.from_columns(
            tuple(range(rs.size)),
            [
                [ONE if i == perm[j] else ZERO for i in range(rs.size)]
                for j in range(rs.size)
            ],
        )
        for label in rs.matrix.index_set:
            lhs = sigma_v * ctx.psi[label]
            rhs = ctx.psi[smap[label]] * sigma_v
            report.append(
                {
                    "sigma": [smap[i] for i in rs.matrix.index_set],
                    "generator": label,
                    "pass": lhs == rhs,
                }
            )
    return report


def rank_one_power_check(seed: int = 0, trials: int = 5, size: int = 4, max_power: int = 4) -> bool:
    """Power identities for rank-one and rank-two updates of a map killing
    the update directions, on seeded random matrices over the field.

    With phi(e) = phi(e') = 0, f(e') = f'(e) = 0, f_e = f(e), f'_e = f'(e'):
    (phi + f(x)e)^n = phi^n + f[sum_k f_e^k phi^(n-1-k)](x)e, and the
    two-term analogue with the mirrored f' sum.
    """
    import random as _random

    rng = _random.Random(seed)
    pool = [ZERO, ONE, FIELD(2), -ONE, scalars.a, scalars.b, scalars.d, scalars.f,
            scalars.a + scalars.d, scalars.b * scalars.f]
    labels = tuple(range(size))
    for _ in range(trials):
        rows = [[rng.choice(pool) for _ in range(size)] for _ in range(size)]
        for r in range(size):
            rows[r][0] = ZERO  # phi kills e
            rows[r][1] = ZERO  # and e'
        phi = RepMatrix(labels, rows)
        f_row = [rng.choice(pool) for _ in range(size)]
        f_row[1] = ZERO
        fp_row = [rng.choice(pool) for _ in range(size)]
        fp_row[0] = ZERO
        f_e = f_row[0]
        fp_e = fp_row[1]
        one_term = phi + outer(0, f_row, labels)
        two_term = one_term + outer(1, fp_row, labels)
        for n in range(1, max_power + 1):
            phi_pow = RepMatrix.identity(labels)
            powers = []
            for _k in range(n):
                powers.append(phi_pow)
                phi_pow = phi_pow * phi
            lhs = RepMatrix.identity(labels)
            for _k in range(n):
                lhs = lhs * one_term
            series_f = RepMatrix.zero(labels)
            coeff = ONE
            for k in range(n):
                series_f = series_f + powers[n - 1 - k].scale(coeff)
                coeff = coeff * f_e
            rhs = phi_pow + outer(0, row_times_matrix(f_row, series_f), labels)
            if lhs != rhs:
                return False
            lhs2 = RepMatrix.identity(labels)
            for _k in range(n):
                lhs2 = lhs2 * two_term
            series_fp = RepMatrix.zero(labels)
            coeff = ONE
            for k in range(n):
                series_fp = series_fp + powers[n - 1 - k].scale(coeff)
                coeff = coeff * fp_e
            rhs2 = (
                phi_pow
                + outer(0, row_times_matrix(f_row, series_f), labels)
                + outer(1, row_times_matrix(fp_row, series_fp), labels)
            )
            if lhs2 != rhs2:
                return False
    return True


def phi_quadratic_image_in_line(ctx: LKContext, label) -> bool:
    """phi_i^2 - a*phi_i - b*c has image inside the simple-root line."""
    phi = ctx.phi[label]
    a = specialize(scalars.a, ctx.spec)
    bc = specialize(scalars.b * scalars.c, ctx.spec)
    ident = RepMatrix.identity(phi.labels)
    M = phi * phi - phi.scale(a) - ident.scale(bc)
    simple = ctx.rs.simple_index(label)
    return all(
        not M.rows[i][j] for i in range(M.size) for j in range(M.size) if i != simple
    )
