"""Exact Hermitian matrices over E and the lattice machinery built on them.

Covers semi-integrality and definiteness tests, the GL_g(O) action,
deterministic enumeration of semi-integral positive semidefinite matrices,
minimal represented values, and the coset groups O^#^g / m O^g with their
small canonical representatives.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, isqrt
from typing import Iterator, Sequence

from . import linalg
from .field import (
    FieldElement,
    FieldTag,
    coset_points,
    euclidean_round,
    sqrt_disc,
)

Vector = tuple[FieldElement, ...]


class HermMatrix:
    """A g x g Hermitian matrix over E with exact entries.

    The constructor checks hermicity (and hence rationality of the
    diagonal).  Semi-integrality (integer diagonal, off-diagonal entries in
    the inverse different) is a separate queryable property, since theta
    supports carry rational diagonals.
    """

    __slots__ = ("g", "entries", "tag", "_hash", "_trace")

    def __init__(self, entries: Sequence[Sequence[FieldElement]], tag: FieldTag):
        rows = linalg.freeze(entries)
        n, m = linalg.shape(rows)
        if n != m or n == 0:
            raise ValueError("expected a nonempty square matrix, got %dx%d" % (n, m))
        if not linalg.is_hermitian(rows):
            raise ValueError("matrix is not Hermitian")
        object.__setattr__(self, "g", n)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_trace", None)

    def __setattr__(self, name, value):
        raise AttributeError("HermMatrix is immutable")

    @classmethod
    def from_rational(cls, x, tag: FieldTag) -> "HermMatrix":
        """The 1x1 matrix [x] for a rational x."""
        return cls(((FieldElement(Fraction(x), 0, tag),),), tag)

    @classmethod
    def zero(cls, g: int, tag: FieldTag) -> "HermMatrix":
        return cls(linalg.zeros(g, g, tag), tag)

    @classmethod
    def identity(cls, g: int, tag: FieldTag) -> "HermMatrix":
        return cls(linalg.identity(g, tag), tag)

    @classmethod
    def diagonal(cls, values: Sequence, tag: FieldTag) -> "HermMatrix":
        g = len(values)
        rows = [[FieldElement.zero(tag)] * g for _ in range(g)]
        for i, v in enumerate(values):
            rows[i][i] = v if isinstance(v, FieldElement) else FieldElement(Fraction(v), 0, tag)
        return cls(rows, tag)

    def entry(self, i: int, j: int) -> FieldElement:
        return self.entries[i][j]

    def trace(self) -> Fraction:
        t = self._trace
        if t is None:
            t = linalg.trace_rational(self.entries)
            object.__setattr__(self, "_trace", t)
        return t

    def is_semi_integral(self) -> bool:
        for i in range(self.g):
            e = self.entries[i][i]
            if e.b or e.a.denominator != 1:
                return False
            for j in range(i + 1, self.g):
                if not self.entries[i][j].is_dual_integral():
                    return False
        return True

    def _principal_minor(self, idx: tuple[int, ...]) -> Fraction:
        sub = tuple(tuple(self.entries[i][j] for j in idx) for i in idx)
        d = linalg.det(sub)
        # determinants of Hermitian matrices are rational
        return d.as_rational()

    def is_psd(self) -> bool:
        """Positive semidefinite: every principal minor is >= 0.

        Leading minors are not enough for semidefiniteness, so all 2^g - 1
        index subsets are tested.
        """
        n = self.g
        for mask in range(1, 1 << n):
            idx = tuple(i for i in range(n) if mask >> i & 1)
            if self._principal_minor(idx) < 0:
                return False
        return True

    def is_pd(self) -> bool:
        """Positive definite: leading principal minors are > 0."""
        for k in range(1, self.g + 1):
            if self._principal_minor(tuple(range(k))) <= 0:
                return False
        return True

    def add(self, other: "HermMatrix") -> "HermMatrix":
        if other.g != self.g or other.tag != self.tag:
            raise ValueError("matrix size or field mismatch")
        return HermMatrix(linalg.mat_add(self.entries, other.entries), self.tag)

    def sub(self, other: "HermMatrix") -> "HermMatrix":
        if other.g != self.g or other.tag != self.tag:
            raise ValueError("matrix size or field mismatch")
        return HermMatrix(linalg.mat_sub(self.entries, other.entries), self.tag)

    def __eq__(self, other):
        return (
            isinstance(other, HermMatrix)
            and other.tag == self.tag
            and other.entries == self.entries
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.entries, self.tag.d))
            object.__setattr__(self, "_hash", h)
        return h

    def to_text(self) -> str:
        """Row-major entries in the field-element text format."""
        return ",".join(e.to_text() for row in self.entries for e in row)

    @classmethod
    def from_text(cls, text: str, g: int, tag: FieldTag) -> "HermMatrix":
        parts = text.split(",")
        if len(parts) != g * g:
            raise ValueError("expected %d entries, got %d" % (g * g, len(parts)))
        vals = [FieldElement.from_text(p, tag) for p in parts]
        rows = [vals[i * g : (i + 1) * g] for i in range(g)]
        return cls(rows, tag)

    def sort_key(self) -> tuple:
        return (self.trace(), self.to_text())

    def __repr__(self):
        return "HermMatrix(%s, g=%d, d=%d)" % (self.to_text(), self.g, self.tag.d)


class UnitMatrix:
    """An element of GL_g(O): integral entries and unit determinant."""

    __slots__ = ("g", "entries", "tag", "det_unit")

    def __init__(self, entries: Sequence[Sequence[FieldElement]], tag: FieldTag):
        rows = linalg.freeze(entries)
        n, m = linalg.shape(rows)
        if n != m or n == 0:
            raise ValueError("expected a nonempty square matrix")
        for row in rows:
            for e in row:
                if not e.is_integral():
                    raise ValueError("unit matrix entries must lie in O")
        d = linalg.det(rows)
        if d.norm() != 1:
            raise ValueError("determinant is not a unit of O")
        object.__setattr__(self, "g", n)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "det_unit", d)

    def __setattr__(self, name, value):
        raise AttributeError("UnitMatrix is immutable")

    @classmethod
    def identity(cls, g: int, tag: FieldTag) -> "UnitMatrix":
        return cls(linalg.identity(g, tag), tag)

    @classmethod
    def permutation(cls, perm: Sequence[int], tag: FieldTag) -> "UnitMatrix":
        g = len(perm)
        one = FieldElement.one(tag)
        z = FieldElement.zero(tag)
        return cls(
            tuple(tuple(one if perm[i] == j else z for j in range(g)) for i in range(g)),
            tag,
        )

    @classmethod
    def elementary(cls, g: int, i: int, j: int, value: FieldElement) -> "UnitMatrix":
        """I + value * E_ij for i != j."""
        if i == j:
            raise ValueError("elementary matrix requires i != j")
        rows = [list(r) for r in linalg.identity(g, value.tag)]
        rows[i][j] = value
        return cls(rows, value.tag)

    @classmethod
    def diagonal_units(cls, units: Sequence[FieldElement], tag: FieldTag) -> "UnitMatrix":
        g = len(units)
        z = FieldElement.zero(tag)
        return cls(
            tuple(tuple(units[i] if i == j else z for j in range(g)) for i in range(g)),
            tag,
        )

    def inverse(self) -> "UnitMatrix":
        # det is a unit, so det^-1 = conj(det)/N(det) stays integral
        inv_det = self.det_unit.inv()
        adj = linalg.adjugate(self.entries)
        return UnitMatrix(linalg.scalar_mul(inv_det, adj), self.tag)

    def mul(self, other: "UnitMatrix") -> "UnitMatrix":
        if other.g != self.g or other.tag != self.tag:
            raise ValueError("matrix size or field mismatch")
        return UnitMatrix(linalg.mat_mul(self.entries, other.entries), self.tag)

    __mul__ = mul

    def conj_transpose_entries(self) -> linalg.Matrix:
        return linalg.conj_transpose(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, UnitMatrix)
            and other.tag == self.tag
            and other.entries == self.entries
        )

    def __hash__(self):
        return hash((self.entries, self.tag.d))

    def __repr__(self):
        return "UnitMatrix(%s, g=%d, d=%d)" % (
            ",".join(e.to_text() for row in self.entries for e in row),
            self.g,
            self.tag.d,
        )


def is_psd(t: HermMatrix) -> bool:
    return t.is_psd()


def is_pd(t: HermMatrix) -> bool:
    return t.is_pd()


def gl_action(u: UnitMatrix, t: HermMatrix) -> HermMatrix:
    """u* t u; preserves semi-integrality and positive semidefiniteness."""
    if u.g != t.g or u.tag != t.tag:
        raise ValueError("matrix size or field mismatch")
    product = linalg.mat_mul(linalg.mat_mul(u.conj_transpose_entries(), t.entries), u.entries)
    return HermMatrix(product, t.tag)


# ----------------------------------------------------------------------
# enumeration of semi-integral PSD matrices


def _dual_points_bounded(tag: FieldTag, bound: Fraction) -> list[FieldElement]:
    """All x in O^# with N(x) <= bound."""
    sd = sqrt_disc(tag)
    inv_sd = sd.inv()
    scaled = coset_points(FieldElement.zero(tag), 1, bound * abs(tag.disc))
    return [y * inv_sd for y in scaled]


def _diagonal_tuples(g: int, total: int) -> Iterator[tuple[int, ...]]:
    if g == 1:
        for v in range(total + 1):
            yield (v,)
        return
    for v in range(total + 1):
        for rest in _diagonal_tuples(g - 1, total - v):
            yield (v,) + rest


def enumerate_semi_integral(g: int, trace_bound: int, tag: FieldTag) -> list[HermMatrix]:
    """All semi-integral PSD matrices with trace <= trace_bound, each once,
    ordered by (trace, lexicographic serialization)."""
    if trace_bound < 0:
        raise ValueError("trace_bound must be >= 0")
    zero = FieldElement.zero(tag)
    results: list[HermMatrix] = []
    pairs = [(i, j) for i in range(g) for j in range(i + 1, g)]
    for diag in _diagonal_tuples(g, trace_bound):
        # candidates per off-diagonal slot, limited by the 2x2 minor bound
        slot_candidates = []
        feasible = True
        for (i, j) in pairs:
            cap = Fraction(diag[i] * diag[j])
            cands = _dual_points_bounded(tag, cap) if cap > 0 else [zero]
            if not cands:
                feasible = False
                break
            slot_candidates.append(cands)
        if not feasible:
            continue

        def fill(k: int, rows):
            if k == len(pairs):
                mat = HermMatrix(rows, tag)
                if mat.is_psd():
                    results.append(mat)
                return
            i, j = pairs[k]
            for x in slot_candidates[k]:
                rows[i][j] = x
                rows[j][i] = x.conj()
                fill(k + 1, rows)
            rows[i][j] = zero
            rows[j][i] = zero

        base = [[zero] * g for _ in range(g)]
        for i in range(g):
            base[i][i] = FieldElement(diag[i], 0, tag)
        fill(0, base)
    results.sort(key=HermMatrix.sort_key)
    return results


# ----------------------------------------------------------------------
# minimal represented values


def _real_gram(t: HermMatrix) -> list[list[Fraction]]:
    """The rational Gram matrix of omega* t omega on the coordinate lattice
    Z^{2g}, with basis e_i and w*e_i interleaved."""
    g = t.g
    tag = t.tag
    w = FieldElement.omega(tag)
    basis = []
    for i in range(g):
        basis.append((i, FieldElement.one(tag)))
        basis.append((i, w))
    n = 2 * g
    gram = [[Fraction(0)] * n for _ in range(n)]
    for r in range(n):
        i, x = basis[r]
        for c in range(r, n):
            j, y = basis[c]
            # Re(conj(x) t_ij y) = Tr(.)/2
            val = (x.conj() * t.entries[i][j] * y).trace() / 2
            gram[r][c] = val
            gram[c][r] = val
    return gram


def _ldl(gram: list[list[Fraction]]):
    """LDL^T of a positive definite rational matrix; L unit lower triangular."""
    n = len(gram)
    L = [[Fraction(0)] * n for _ in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        s = gram[j][j]
        for k in range(j):
            s -= L[j][k] * L[j][k] * D[k]
        if s <= 0:
            raise ValueError("matrix is not positive definite")
        D[j] = s
        L[j][j] = Fraction(1)
        for i in range(j + 1, n):
            v = gram[i][j]
            for k in range(j):
                v -= L[i][k] * L[j][k] * D[k]
            L[i][j] = v / D[j]
    return L, D


def _short_vectors(L, D, bound: Fraction) -> Iterator[tuple[Fraction, tuple[int, ...]]]:
    """All nonzero integer vectors u with q(u) <= bound for q = L D L^T."""
    n = len(D)
    u = [0] * n

    def recurse(i: int, rem: Fraction):
        if i < 0:
            if any(u):
                yield (bound - rem, tuple(u))
            return
        s = Fraction(0)
        for j in range(i + 1, n):
            s += L[j][i] * u[j]
        radius2 = rem / D[i]
        r_int = isqrt(radius2.numerator * radius2.denominator) // radius2.denominator + 1
        lo = ceil(-s - r_int)
        hi = floor(-s + r_int)
        for v in range(lo, hi + 1):
            w = v + s
            used = D[i] * w * w
            if used <= rem:
                u[i] = v
                yield from recurse(i - 1, rem - used)

    yield from recurse(n - 1, bound)


def min_represented(t: HermMatrix) -> Fraction:
    """min over nonzero omega in O^g of omega* t omega, for PSD t.

    Degenerate t represents 0: a kernel vector over E scales to an integral
    one by clearing denominators.  For definite t the search is certified by
    the smallest diagonal entry, which e_i attains.
    """
    if linalg.rank(t.entries) < t.g:
        return Fraction(0)
    bound = min(t.entries[i][i].as_rational() for i in range(t.g))
    gram = _real_gram(t)
    L, D = _ldl(gram)
    best = bound
    for q, _u in _short_vectors(L, D, bound):
        if q < best:
            best = q
    return best


# ----------------------------------------------------------------------
# coset classes Delta_g(m) = (O^#)^g / m O^g


class _SublatticeData:
    """Reduction data for m*sqrt(D)*O inside O, in basis coordinates.

    Basis of the sublattice brought to the shape v1 = (p, q), v2 = (ell, 0)
    with q, ell > 0; the canonical box is 0 <= a < ell, 0 <= b < q.
    """

    __slots__ = ("p", "q", "ell")

    def __init__(self, tag: FieldTag, m: int):
        sd = sqrt_disc(tag)
        w = FieldElement.omega(tag)
        c1 = (sd * m).a, (sd * m).b
        gen2 = sd * w * m
        c2 = gen2.a, gen2.b
        a1, b1 = int(c1[0]), int(c1[1])
        a2, b2 = int(c2[0]), int(c2[1])
        # zero the b-component of the second generator via Bezout
        x, y = _bezout(b1, b2)
        gcd = x * b1 + y * b2
        v1 = (x * a1 + y * a2, gcd)
        k1, k2 = b2 // gcd, -b1 // gcd
        v2 = (k1 * a1 + k2 * a2, 0)
        ell = abs(v2[0])
        q = v1[1]
        p = v1[0] % ell
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "ell", ell)

    def __setattr__(self, name, value):
        raise AttributeError("_SublatticeData is immutable")

    def reduce(self, a: int, b: int) -> tuple[int, int]:
        k = b // self.q
        a1 = a - k * self.p
        b1 = b - k * self.q
        return a1 % self.ell, b1

    def box(self) -> Iterator[tuple[int, int]]:
        for a in range(self.ell):
            for b in range(self.q):
                yield a, b


def _bezout(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    return old_s, old_t


_SUBLATTICE_CACHE: dict[tuple[int, int], _SublatticeData] = {}


def _sublattice(tag: FieldTag, m: int) -> _SublatticeData:
    key = (tag.d, m)
    data = _SUBLATTICE_CACHE.get(key)
    if data is None:
        data = _SublatticeData(tag, m)
        _SUBLATTICE_CACHE[key] = data
    return data


class CosetClass:
    """A class in (O^#)^g / m O^g, held by its canonical representative."""

    __slots__ = ("m", "rep", "tag")

    def __init__(self, m: int, rep: Vector, tag: FieldTag):
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "rep", tuple(rep))
        object.__setattr__(self, "tag", tag)

    def __setattr__(self, name, value):
        raise AttributeError("CosetClass is immutable")

    @property
    def g(self) -> int:
        return len(self.rep)

    def __eq__(self, other):
        return (
            isinstance(other, CosetClass)
            and other.m == self.m
            and other.tag == self.tag
            and other.rep == self.rep
        )

    def __hash__(self):
        return hash((self.m, self.rep, self.tag.d))

    def sort_key(self) -> tuple:
        return tuple(e.sort_key() for e in self.rep)

    def to_text(self) -> str:
        return ",".join(e.to_text() for e in self.rep)

    def __repr__(self):
        return "CosetClass(m=%d, rep=[%s], d=%d)" % (self.m, self.to_text(), self.tag.d)


def _reduce_component(x: FieldElement, m: int) -> FieldElement:
    tag = x.tag
    y = x * sqrt_disc(tag)
    if not y.is_integral():
        raise ValueError("%r does not lie in the inverse different" % (x,))
    data = _sublattice(tag, m)
    a, b = data.reduce(int(y.a), int(y.b))
    return FieldElement(a, b, tag) * sqrt_disc(tag).inv()


def reduce_class(r: Sequence[FieldElement], m: int) -> CosetClass:
    """Canonical representative of the class of r in (O^#)^g / m O^g."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rep = tuple(_reduce_component(x, m) for x in r)
    return CosetClass(m, rep, rep[0].tag)


_CLASSES_CACHE: dict[tuple[int, int, int], tuple[CosetClass, ...]] = {}


def delta_classes(g: int, m: int, tag: FieldTag) -> list[CosetClass]:
    """Complete duplicate-free list of classes; |result| = (m^2 |D|)^g."""
    if m < 1:
        raise ValueError("m must be >= 1")
    cached = _CLASSES_CACHE.get((g, m, tag.d))
    if cached is not None:
        return list(cached)
    data = _sublattice(tag, m)
    inv_sd = sqrt_disc(tag).inv()
    component = [FieldElement(a, b, tag) * inv_sd for a, b in data.box()]

    def build(k: int):
        if k == 0:
            yield ()
            return
        for prefix in build(k - 1):
            for x in component:
                yield prefix + (x,)

    result = tuple(CosetClass(m, rep, tag) for rep in build(g))
    _CLASSES_CACHE[(g, m, tag.d)] = result
    return list(result)


_SMALL_REP_CACHE: dict[CosetClass, Vector] = {}


def small_rep(s: CosetClass) -> Vector:
    """A representative r of s with |r_i|^2 <= (1 - c) m^2 componentwise,
    built by rounding each coordinate of rep/m back into the fundamental
    cell.  Rounding minimizes each component norm over the class."""
    cached = _SMALL_REP_CACHE.get(s)
    if cached is not None:
        return cached
    m = s.m
    out = []
    for x in s.rep:
        alpha = euclidean_round(x / m)
        out.append(x - alpha * m)
    result = tuple(out)
    _SMALL_REP_CACHE[s] = result
    return result


def in_same_class(r1: Sequence[FieldElement], r2: Sequence[FieldElement], m: int) -> bool:
    """Whether r1 - r2 lies in m O^g."""
    for x, y in zip(r1, r2):
        diff = (x - y) / m
        if not diff.is_integral():
            return False
    return True
