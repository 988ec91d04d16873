"""Symmetric formal Fourier-Jacobi families.

A family of degree g and cogenus l stores, per semi-integral PSD l x l
index matrix m, a coefficient table keyed by pairs (n, r) with n a
(g-l) x (g-l) semi-integral PSD matrix and r a (g-l) x l matrix over E; the
assembled block

    (n  r)
    (r* m)

is the corresponding full degree-g Fourier index.  The family is the single
source of truth; the full series, other cogenus arrangements, the psi_0
slice and formal theta components are all derived views.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import linalg
from .errors import ConsistencyError
from .field import FieldElement, FieldTag
from .hermitian import CosetClass, HermMatrix, UnitMatrix, delta_classes, reduce_class, small_rep
from .jacobi import shift_matrix
from .series import FourierSeries, RhoMap, Vec, _zero_vec, check_symmetry

RMat = tuple[tuple[FieldElement, ...], ...]


def join_block(n: HermMatrix, r: RMat, m: HermMatrix) -> HermMatrix:
    a = n.g
    l = m.g
    rows = []
    for i in range(a):
        rows.append(tuple(n.entries[i]) + tuple(r[i]))
    r_ct = linalg.conj_transpose(r)
    for i in range(l):
        rows.append(tuple(r_ct[i]) + tuple(m.entries[i]))
    return HermMatrix(rows, n.tag)


def split_block(t: HermMatrix, l: int) -> tuple[HermMatrix, RMat, HermMatrix]:
    g = t.g
    a = g - l
    n = HermMatrix(tuple(tuple(t.entries[i][j] for j in range(a)) for i in range(a)), t.tag)
    r = tuple(tuple(t.entries[i][a + j] for j in range(l)) for i in range(a))
    m = HermMatrix(tuple(tuple(t.entries[a + i][a + j] for j in range(l)) for i in range(l)), t.tag)
    return n, r, m


def _freeze_r(r) -> RMat:
    return tuple(tuple(row) for row in r)


class FJFamily:
    """A symmetric formal Fourier-Jacobi series held by its cogenus-l tables."""

    __slots__ = ("g", "l", "k", "tag", "trunc", "dim", "tables")

    def __init__(
        self,
        g: int,
        l: int,
        k: int,
        tag: FieldTag,
        trunc,
        tables: Mapping[HermMatrix, Mapping],
        dim: int = 1,
    ):
        if not 1 <= l <= g - 1:
            raise ValueError("cogenus must satisfy 1 <= l <= g-1")
        trunc = trunc if isinstance(trunc, Fraction) else Fraction(trunc)
        clean: dict[HermMatrix, dict[tuple[HermMatrix, RMat], Vec]] = {}
        for m, table in tables.items():
            if m.g != l or m.tag != tag:
                raise ValueError("index size or field mismatch at %r" % (m,))
            body: dict[tuple[HermMatrix, RMat], Vec] = {}
            for (n, r), vec in table.items():
                r = _freeze_r(r)
                vec = tuple(vec)
                if len(vec) != dim:
                    raise ValueError("coefficient dimension mismatch")
                if all(v.is_zero() for v in vec):
                    continue
                block = join_block(n, r, m)
                if not block.is_semi_integral():
                    raise ValueError("assembled key %r is not semi-integral" % (block,))
                if not block.is_psd():
                    raise ValueError("assembled key %r is not positive semidefinite" % (block,))
                if block.trace() > trunc:
                    raise ValueError("assembled key exceeds truncation %s" % trunc)
                body[(n, r)] = vec
            if body:
                clean[m] = body
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "tables", clean)

    def __setattr__(self, name, value):
        raise AttributeError("FJFamily is immutable")

    def indices(self) -> list[HermMatrix]:
        return sorted(self.tables, key=HermMatrix.sort_key)

    def table(self, m: HermMatrix) -> dict:
        return dict(self.tables.get(m, {}))

    def coefficient(self, m: HermMatrix, n: HermMatrix, r) -> Vec:
        body = self.tables.get(m)
        if body is None:
            return _zero_vec(self.dim, self.tag)
        vec = body.get((n, _freeze_r(r)))
        return vec if vec is not None else _zero_vec(self.dim, self.tag)

    def is_zero(self) -> bool:
        return not self.tables

    def __eq__(self, other):
        return (
            isinstance(other, FJFamily)
            and (other.g, other.l, other.k, other.trunc, other.dim) ==
                (self.g, self.l, self.k, self.trunc, self.dim)
            and other.tag == self.tag
            and other.tables == self.tables
        )

    def __repr__(self):
        return "FJFamily(g=%d, l=%d, k=%d, d=%d, trunc=%s, %d indices)" % (
            self.g, self.l, self.k, self.tag.d, self.trunc, len(self.tables)
        )


def assemble(fam: FJFamily) -> FourierSeries:
    """The degree-g series with c(f; (n r; r* m)) = c(phi_m; n, r)."""
    coeffs: dict[HermMatrix, Vec] = {}
    for m, body in fam.tables.items():
        for (n, r), vec in body.items():
            coeffs[join_block(n, r, m)] = vec
    return FourierSeries(fam.g, fam.k, fam.tag, fam.trunc, coeffs, fam.dim)


def disassemble(f: FourierSeries, l: int) -> FJFamily:
    """Partition the support of f by the lower-right l x l block."""
    if not 1 <= l <= f.g - 1:
        raise ValueError("cogenus must satisfy 1 <= l <= g-1")
    tables: dict[HermMatrix, dict] = {}
    for t, vec in f.coeffs.items():
        n, r, m = split_block(t, l)
        tables.setdefault(m, {})[(n, r)] = vec
    return FJFamily(f.g, l, f.k, f.tag, f.trunc, tables, f.dim)


def rearrange_cogenus(fam: FJFamily, l_prime: int) -> FJFamily:
    """The cogenus-l' arrangement of the same coefficients: an exact
    re-indexing through the assembled series."""
    if not 1 <= l_prime < fam.l:
        raise ValueError("target cogenus must satisfy 1 <= l' < l")
    return disassemble(assemble(fam), l_prime)


def extract_psi0(fam: FJFamily) -> FJFamily:
    """The index-0 coefficient of the cogenus-1 rearrangement, re-identified
    as a family of degree g-1 and cogenus l-1.

    Keeps the indices m whose lower-right corner vanishes; positive
    semidefiniteness forces the rest of the corner row and column of both m
    and every key to vanish, which is re-verified and reported as a
    consistency error on violation.
    """
    if fam.l < 2:
        raise ValueError("psi_0 extraction needs cogenus >= 2")
    l = fam.l
    zero = FieldElement.zero(fam.tag)
    tables: dict[HermMatrix, dict] = {}
    for m, body in fam.tables.items():
        if m.entries[l - 1][l - 1].as_rational() != 0:
            continue
        for i in range(l):
            if m.entries[i][l - 1] != zero or m.entries[l - 1][i] != zero:
                raise ConsistencyError(
                    "degenerate index with nonzero corner row", witness=m
                )
        m_new = HermMatrix(
            tuple(tuple(m.entries[i][j] for j in range(l - 1)) for i in range(l - 1)),
            fam.tag,
        )
        new_body = tables.setdefault(m_new, {})
        for (n, r), vec in body.items():
            for row in r:
                if row[l - 1] != zero:
                    raise ConsistencyError(
                        "nonzero coefficient in the removed column",
                        witness=(m, n, r),
                    )
            r_new = tuple(row[: l - 1] for row in r)
            new_body[(n, r_new)] = vec
    return FJFamily(fam.g - 1, fam.l - 1, fam.k, fam.tag, fam.trunc, tables, fam.dim)


def zero_pad(fam: FJFamily) -> FJFamily:
    """Inverse of extract_psi0 on its image: raises degree and cogenus by one
    by adjoining a zero corner row and column."""
    zero = FieldElement.zero(fam.tag)
    tables: dict[HermMatrix, dict] = {}
    for m, body in fam.tables.items():
        m_new = HermMatrix(
            tuple(tuple(m.entries[i]) + (zero,) for i in range(m.g))
            + ((zero,) * (m.g + 1),),
            fam.tag,
        )
        new_body = tables.setdefault(m_new, {})
        for (n, r), vec in body.items():
            r_new = tuple(row + (zero,) for row in r)
            new_body[(n, r_new)] = vec
    return FJFamily(fam.g + 1, fam.l + 1, fam.k, fam.tag, fam.trunc, tables, fam.dim)


# ----------------------------------------------------------------------
# formal theta decomposition (cogenus step l -> l' = l - 1 = 1)


def _column_vector(r: RMat) -> tuple[FieldElement, ...]:
    return tuple(row[0] for row in r)


def _as_column(vec: Sequence[FieldElement]) -> RMat:
    return tuple((x,) for x in vec)


def _index_value(m_prime, tag: FieldTag) -> int:
    if isinstance(m_prime, HermMatrix):
        if m_prime.g != 1:
            raise ValueError("only 1x1 decomposition indices are supported "
                             "(coset classes are built for cogenus 1)")
        value = m_prime.entries[0][0].as_rational()
    else:
        value = Fraction(m_prime)
    if value.denominator != 1 or value <= 0:
        raise ValueError("decomposition index must be a positive integer")
    return int(value)


def formal_theta_coeffs(
    fam: FJFamily, m_prime, strict: bool = False
) -> dict[CosetClass, FourierSeries]:
    """Theta components of the cogenus-1 coefficient of index m' > 0.

    Returns one shifted series per class of the (g-1)-component coset group,
    reading through canonical small representatives.  Cross-representative
    consistency is probed exactly as in the cogenus-1 module; violations
    raise ConsistencyError with the witness (n', r', r'').
    """
    if fam.l < 2:
        raise ValueError("formal theta decomposition needs cogenus >= 2")
    if fam.l != 2:
        raise ValueError("only the cogenus step 2 -> 1 is supported "
                         "(coset classes are built for cogenus 1)")
    tag = fam.tag
    m_val = _index_value(m_prime, tag)
    psi = rearrange_cogenus(fam, 1)
    idx = HermMatrix.from_rational(m_val, tag)
    body = psi.tables.get(idx, {})
    g1 = fam.g - 1
    classes = delta_classes(g1, m_val, tag)
    reps = {s: small_rep(s) for s in classes}
    by_class: dict[CosetClass, dict[HermMatrix, Vec]] = {s: {} for s in classes}

    def read(n: HermMatrix, rv) -> Optional[Vec]:
        if n.trace() + m_val > psi.trunc:
            return None
        vec = body.get((n, _as_column(rv)))
        return vec if vec is not None else _zero_vec(fam.dim, tag)

    for (n, rmat), vec in body.items():
        rv = _column_vector(rmat)
        s = reduce_class(rv, m_val)
        nprime = n.sub(shift_matrix(rv, m_val))
        r0 = reps[s]
        canonical = read(nprime.add(shift_matrix(r0, m_val)), r0)
        if canonical is not None and canonical != vec:
            raise ConsistencyError(
                "formal theta decomposition is not well defined",
                witness=(nprime, rv, r0),
            )
        by_class[s][nprime] = vec

    components: dict[CosetClass, FourierSeries] = {}
    for s in classes:
        r0 = reps[s]
        shift0 = shift_matrix(r0, m_val)
        h_trunc = fam.trunc - m_val - shift0.trace()
        table = by_class[s]
        r1 = tuple(
            x + FieldElement(m_val if i == 0 else 0, 0, tag) for i, x in enumerate(r0)
        )
        for nprime, vec in table.items():
            spare = read(nprime.add(shift_matrix(r1, m_val)), r1)
            if spare is not None and spare != vec:
                raise ConsistencyError(
                    "formal theta decomposition is not well defined",
                    witness=(nprime, r0, r1),
                )
        if strict:
            from .jacobi import _class_points

            for nprime, vec in table.items():
                budget = (psi.trunc - m_val - nprime.trace()) * m_val
                for r_any in _class_points(CosetClass(m_val, r0, tag), budget):
                    got = read(nprime.add(shift_matrix(r_any, m_val)), r_any)
                    if got is not None and got != vec:
                        raise ConsistencyError(
                            "formal theta decomposition is not well defined",
                            witness=(nprime, r0, r_any),
                        )
        components[s] = FourierSeries(
            g1, fam.k - 1, tag, h_trunc, table, fam.dim, semi_integral=False
        )
    return components


def partial_decomposition_check(fam: FJFamily, m_prime, s2: CosetClass, r_prime: FieldElement) -> bool:
    """Verifies the partial theta decomposition identity for the fixed shift
    class s2 and representative r': every stored coefficient whose index
    block ends in r' must agree with the read through the canonical
    representative of its full class, and conversely.  True exactly when the
    identity holds at this truncation."""
    tag = fam.tag
    m_val = _index_value(m_prime, tag)
    if s2.m != m_val or s2.g != 1:
        raise ValueError("shift class does not match the index")
    if not ((r_prime - s2.rep[0]) / m_val).is_integral():
        raise ValueError("r' is not a representative of the shift class")
    psi = rearrange_cogenus(fam, 1)
    idx = HermMatrix.from_rational(m_val, tag)
    body = psi.tables.get(idx, {})

    def value(n: HermMatrix, rv) -> Optional[Vec]:
        if n.trace() + m_val > psi.trunc:
            return None
        vec = body.get((n, _as_column(rv)))
        return vec if vec is not None else _zero_vec(fam.dim, tag)

    for (n, rmat), vec in body.items():
        rv = _column_vector(rmat)
        s = reduce_class(rv, m_val)
        r0 = small_rep(s)
        shift_r = shift_matrix(rv, m_val)
        if rv[-1] == r_prime:
            # phi-side key; compare against the canonical read
            canonical = value(n.sub(shift_r).add(shift_matrix(r0, m_val)), r0)
            if canonical is not None and canonical != vec:
                return False
        if rv == r0 and reduce_class(rv[-1:], m_val) == s2:
            # canonical h-data; compare against the r'-side read
            r_side = rv[:-1] + (r_prime,)
            got = value(n.sub(shift_r).add(shift_matrix(r_side, m_val)), r_side)
            if got is not None and got != vec:
                return False
    return True


# ----------------------------------------------------------------------
# symmetry report


def shear_generators(g: int, l: int, tag: FieldTag) -> list[UnitMatrix]:
    """The index-preserving unit matrices (I 0; lambda* I) for lambda a
    single-entry matrix over the integral basis."""
    gens = []
    a = g - l
    w = FieldElement.omega(tag)
    for p in range(a):
        for q in range(l):
            for v in (FieldElement.one(tag), w):
                rows = [list(row) for row in linalg.identity(g, tag)]
                rows[a + q][p] = v.conj()
                gens.append(UnitMatrix(rows, tag))
    return gens


class FamilyReport:
    """Outcome of check_family: empty lists mean a symmetric family."""

    __slots__ = ("symmetry_violations", "subaction_violations")

    def __init__(self, symmetry_violations, subaction_violations):
        object.__setattr__(self, "symmetry_violations", list(symmetry_violations))
        object.__setattr__(self, "subaction_violations", list(subaction_violations))

    def __setattr__(self, name, value):
        raise AttributeError("FamilyReport is immutable")

    @property
    def ok(self) -> bool:
        return not self.symmetry_violations and not self.subaction_violations

    def __repr__(self):
        return "FamilyReport(symmetry=%d, subaction=%d)" % (
            len(self.symmetry_violations), len(self.subaction_violations)
        )


def check_family(
    fam: FJFamily,
    units: Sequence[UnitMatrix],
    rho: Optional[RhoMap] = None,
) -> FamilyReport:
    """Runs the unimodular symmetry check on the assembled series and the
    index-preserving sub-action instances; collects all violations."""
    f = assemble(fam)
    sym = check_symmetry(f, units, rho)
    shears = shear_generators(fam.g, fam.l, fam.tag)
    sub = check_symmetry(f, shears, rho)
    return FamilyReport(sym, sub)
