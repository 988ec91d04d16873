"""Truncated formal Fourier series with Hermitian positive semidefinite
support, the graded ring structure, unimodular symmetry checking, and the
vanishing order.

The series of the graded ring itself are supported on semi-integral keys
(integer diagonal, off-diagonal in the inverse different).  Theta components
produced by the decomposition routines carry class-dependent rational shifts
on the diagonal; they reuse this container with `semi_integral=False`, which
relaxes the key validation but changes nothing else.
"""

from __future__ import annotations

from fractions import Fraction
from math import inf
from typing import Callable, Iterable, Mapping, Optional, Sequence

from . import linalg
from .field import FieldElement, FieldTag
from .hermitian import HermMatrix, UnitMatrix, gl_action, min_represented

Vec = tuple[FieldElement, ...]


def _zero_vec(dim: int, tag: FieldTag) -> Vec:
    z = FieldElement.zero(tag)
    return (z,) * dim


class FourierSeries:
    """A truncated formal expansion sum_t c(t) e(t tau) of degree g.

    Coefficients are vectors of field elements (dimension 1 = scalar
    valued); absent keys denote zero.  Keys are Hermitian PSD with trace at
    most `trunc`, semi-integral unless the series was built as a shifted
    theta component.
    """

    __slots__ = ("g", "k", "tag", "trunc", "dim", "coeffs", "semi_integral")

    def __init__(
        self,
        g: int,
        k: int,
        tag: FieldTag,
        trunc,
        coeffs: Mapping[HermMatrix, Sequence[FieldElement]],
        dim: int = 1,
        semi_integral: bool = True,
    ):
        if g < 1:
            raise ValueError("degree must be >= 1")
        if dim < 1:
            raise ValueError("coefficient dimension must be >= 1")
        trunc = trunc if isinstance(trunc, Fraction) else Fraction(trunc)
        clean: dict[HermMatrix, Vec] = {}
        for t, vec in coeffs.items():
            vec = tuple(vec)
            if len(vec) != dim:
                raise ValueError("coefficient dimension mismatch at %r" % (t,))
            if all(v.is_zero() for v in vec):
                continue
            if t.g != g or t.tag != tag:
                raise ValueError("key size or field mismatch at %r" % (t,))
            if t.trace() > trunc:
                raise ValueError("key %r exceeds truncation %s" % (t, trunc))
            if semi_integral and not t.is_semi_integral():
                raise ValueError("key %r is not semi-integral" % (t,))
            if not t.is_psd():
                raise ValueError("key %r is not positive semidefinite" % (t,))
            clean[t] = vec
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "semi_integral", semi_integral)

    def __setattr__(self, name, value):
        raise AttributeError("FourierSeries is immutable")

    # ------------------------------------------------------------------

    @classmethod
    def constant(cls, value: FieldElement, g: int, k: int, trunc: int) -> "FourierSeries":
        tag = value.tag
        return cls(g, k, tag, trunc, {HermMatrix.zero(g, tag): (value,)})

    @classmethod
    def zero(cls, g: int, k: int, tag: FieldTag, trunc, dim: int = 1) -> "FourierSeries":
        return cls(g, k, tag, trunc, {}, dim=dim)

    def coefficient(self, t: HermMatrix) -> Vec:
        vec = self.coeffs.get(t)
        return vec if vec is not None else _zero_vec(self.dim, self.tag)

    def support(self) -> list[HermMatrix]:
        return sorted(self.coeffs, key=HermMatrix.sort_key)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, FourierSeries)
            and other.g == self.g
            and other.k == self.k
            and other.tag == self.tag
            and other.trunc == self.trunc
            and other.dim == self.dim
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.g, self.k, self.tag.d, self.trunc, self.dim,
                     frozenset(self.coeffs.items())))

    def __repr__(self):
        return "FourierSeries(g=%d, k=%d, d=%d, trunc=%s, %d terms)" % (
            self.g, self.k, self.tag.d, self.trunc, len(self.coeffs)
        )

    # ------------------------------------------------------------------
    # graded module / ring structure

    def _check_compatible(self, other: "FourierSeries", need_weight: bool):
        if other.g != self.g or other.tag != self.tag:
            raise ValueError("degree or field mismatch")
        if other.dim != self.dim:
            raise ValueError("coefficient dimension mismatch")
        if need_weight and other.k != self.k:
            raise ValueError("weight mismatch: %d vs %d" % (self.k, other.k))

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        self._check_compatible(other, need_weight=True)
        trunc = min(self.trunc, other.trunc)
        out: dict[HermMatrix, Vec] = {}
        for t in set(self.coeffs) | set(other.coeffs):
            if t.trace() > trunc:
                continue
            a = self.coefficient(t)
            b = other.coefficient(t)
            out[t] = tuple(x + y for x, y in zip(a, b))
        return FourierSeries(self.g, self.k, self.tag, trunc, out, self.dim,
                             self.semi_integral and other.semi_integral)

    def scale(self, x) -> "FourierSeries":
        if not isinstance(x, FieldElement):
            x = FieldElement(Fraction(x), 0, self.tag)
        out = {t: tuple(x * v for v in vec) for t, vec in self.coeffs.items()}
        return FourierSeries(self.g, self.k, self.tag, self.trunc, out, self.dim,
                             self.semi_integral)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        return self + other.scale(-1)

    def __mul__(self, other: "FourierSeries") -> "FourierSeries":
        """Cauchy product on the support; scalar-valued factors only."""
        if not isinstance(other, FourierSeries):
            return NotImplemented
        self._check_compatible(other, need_weight=False)
        if self.dim != 1 or other.dim != 1:
            raise ValueError("product requires scalar-valued series")
        trunc = min(self.trunc, other.trunc)
        out: dict[HermMatrix, Vec] = {}
        for t1, v1 in self.coeffs.items():
            tr1 = t1.trace()
            for t2, v2 in other.coeffs.items():
                if tr1 + t2.trace() > trunc:
                    continue
                t = t1.add(t2)
                prod = v1[0] * v2[0]
                prev = out.get(t)
                out[t] = ((prev[0] + prod),) if prev is not None else (prod,)
        return FourierSeries(self.g, self.k + other.k, self.tag, trunc, out, 1,
                             self.semi_integral and other.semi_integral)

    # ------------------------------------------------------------------

    def vanishing_order(self):
        """min over supported t of the minimal represented value; +inf for
        the zero series.  Truncation-relative: only stored keys enter."""
        if not self.coeffs:
            return inf
        return min(min_represented(t) for t in self.coeffs)


def add(f1: FourierSeries, f2: FourierSeries) -> FourierSeries:
    return f1 + f2


def scale(x, f: FourierSeries) -> FourierSeries:
    return f.scale(x)


def mul(f1: FourierSeries, f2: FourierSeries) -> FourierSeries:
    return f1 * f2


def vanishing_order(f: FourierSeries):
    return f.vanishing_order()


# ----------------------------------------------------------------------
# unimodular symmetry


RhoMap = Callable[[UnitMatrix], Sequence[Sequence[FieldElement]]]


def _apply_rho(rho_mat, vec: Vec) -> Vec:
    return tuple(
        _dot(row, vec) for row in rho_mat
    )


def _dot(row, vec: Vec) -> FieldElement:
    acc = row[0] * vec[0]
    for a, b in zip(row[1:], vec[1:]):
        acc = acc + a * b
    return acc


def check_symmetry(
    f: FourierSeries,
    units: Iterable[UnitMatrix],
    rho: Optional[RhoMap] = None,
) -> list[tuple[UnitMatrix, HermMatrix]]:
    """Violations of rho(rot(u)) c(f; u* t u) = (det u*)^k c(f; t).

    For every u and every candidate key t whose image also lies inside the
    truncation, both sides are compared exactly; the returned list is empty
    precisely when the series is symmetric at this truncation.  Vector-
    valued series require `rho` giving the explicit matrix per generator.
    """
    violations = []
    for u in units:
        if u.g != f.g or u.tag != f.tag:
            raise ValueError("generator size or field mismatch")
        u_inv = u.inverse()
        det_pow = u.det_unit.conj() ** f.k
        rho_mat = None
        if f.dim > 1:
            if rho is None:
                raise ValueError("vector-valued series need an explicit rho")
            rho_mat = linalg.freeze(rho(u))
        candidates = set(f.coeffs)
        for t in f.coeffs:
            candidates.add(gl_action(u_inv, t))
        for t in sorted(candidates, key=HermMatrix.sort_key):
            if t.trace() > f.trunc:
                continue
            image = gl_action(u, t)
            if image.trace() > f.trunc:
                continue
            lhs = f.coefficient(image)
            if rho_mat is not None:
                lhs = _apply_rho(rho_mat, lhs)
            rhs = tuple(det_pow * v for v in f.coefficient(t))
            if lhs != rhs:
                violations.append((u, t))
    return violations


def gl_generators(g: int, tag: FieldTag) -> list[UnitMatrix]:
    """A generating set for GL_g(O): diagonal units, adjacent transpositions,
    and elementary matrices over an integral basis (O is Euclidean, so these
    generate)."""
    from .field import unit_group

    gens: list[UnitMatrix] = []
    units = [u for u in unit_group(tag) if u != FieldElement.one(tag)]
    for u in units:
        vals = [FieldElement.one(tag)] * g
        vals[0] = u
        gens.append(UnitMatrix.diagonal_units(vals, tag))
    for i in range(g - 1):
        perm = list(range(g))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(UnitMatrix.permutation(perm, tag))
    w = FieldElement.omega(tag)
    if g >= 2:
        for val in (FieldElement.one(tag), w):
            gens.append(UnitMatrix.elementary(g, 0, 1, val))
            gens.append(UnitMatrix.elementary(g, 1, 0, val))
    return gens


def symmetrize(f: FourierSeries, units: Sequence[UnitMatrix]) -> FourierSeries:
    """Spreads each seed coefficient over the orbit of its key under the
    group generated by `units`, restricted to the truncation window, with
    the (det u*)^k factor tracked along paths.

    The generated group is infinite, but each orbit meets the window in
    finitely many keys.  If two paths to the same key force different
    factors, only the zero coefficient is symmetric and the orbit is
    dropped.  The result passes `check_symmetry` for these generators.
    """
    steps = list(units) + [u.inverse() for u in units]
    out: dict[HermMatrix, Vec] = {}
    done: set[HermMatrix] = set()
    for seed in sorted(f.coeffs, key=HermMatrix.sort_key):
        if seed in done:
            continue
        vec = f.coeffs[seed]
        one = FieldElement.one(f.tag)
        factors: dict[HermMatrix, FieldElement] = {seed: one}
        frontier = [seed]
        consistent = True
        while frontier:
            nxt = []
            for t in frontier:
                base = factors[t]
                for u in steps:
                    image = gl_action(u, t)
                    if image.trace() > f.trunc:
                        continue
                    fac = base * (u.det_unit.conj() ** f.k)
                    prev = factors.get(image)
                    if prev is None:
                        factors[image] = fac
                        nxt.append(image)
                    elif prev != fac:
                        consistent = False
            frontier = nxt
        done.update(factors)
        if not consistent:
            continue
        for t, fac in factors.items():
            contrib = tuple(fac * v for v in vec)
            prev = out.get(t)
            out[t] = (
                tuple(a + b for a, b in zip(prev, contrib)) if prev is not None else contrib
            )
    return FourierSeries(f.g, f.k, f.tag, f.trunc, out, f.dim, f.semi_integral)
