"""Shared brute-force oracles and fixture builders for the test suite.

Everything here is deliberately independent of the library's own algorithms:
oracles recompute expected values by enumeration or direct linear algebra.
"""

from __future__ import annotations

import random
from fractions import Fraction

from hermfj.field import FieldElement, FieldTag, make_field

ALL_D = (-1, -2, -3, -7, -11)


def norm_form(tag: FieldTag):
    """Integer coefficients (s, t) with N(a + b*w) = a^2 + s*a*b + t*b^2."""
    if tag.half_basis:
        return 1, (1 - tag.d) // 4
    return 0, -tag.d


def qval(tag: FieldTag, a, b) -> Fraction:
    s, t = norm_form(tag)
    return Fraction(a * a + s * a * b + t * b * b)


def qbil(tag: FieldTag, a1, b1, a2, b2) -> Fraction:
    """Polarization: B(x, y) with Q(x) = B(x, x)."""
    s, t = norm_form(tag)
    return Fraction(2 * a1 * a2 + s * (a1 * b2 + a2 * b1) + 2 * t * b1 * b2, 2)


def min_dist_to_lattice(tag: FieldTag, a: Fraction, b: Fraction, window: int = 3) -> Fraction:
    """min over alpha in O of N((a, b) - alpha), brute force over a box."""
    best = None
    for p in range(int(a) - window, int(a) + window + 1):
        for q in range(int(b) - window, int(b) + window + 1):
            v = qval(tag, a - p, b - q)
            if best is None or v < best:
                best = v
    return best


def deep_hole_oracle(tag: FieldTag) -> Fraction:
    """Covering radius squared of O by brute force over Delaunay circumcenters.

    Enumerates every triple of lattice points around the fundamental square,
    computes the circumcenter of each nondegenerate triple with respect to
    the norm form by Cramer's rule, and takes the largest min-distance over
    centers landing near the fundamental domain.  All arithmetic is integral
    (coordinates scaled by the Cramer determinant).
    """
    s, t = norm_form(tag)
    pts = [(p, q) for p in range(-1, 3) for q in range(-1, 3)]
    best = Fraction(0)
    n = len(pts)
    for i in range(n):
        p1 = pts[i]
        for j in range(i + 1, n):
            p2 = pts[j]
            v2 = (p2[0] - p1[0], p2[1] - p1[1])
            a11 = 2 * v2[0] + s * v2[1]
            a12 = s * v2[0] + 2 * t * v2[1]
            r2 = v2[0] * v2[0] + s * v2[0] * v2[1] + t * v2[1] * v2[1]
            for k in range(j + 1, n):
                p3 = pts[k]
                v3 = (p3[0] - p1[0], p3[1] - p1[1])
                a21 = 2 * v3[0] + s * v3[1]
                a22 = s * v3[0] + 2 * t * v3[1]
                det = a11 * a22 - a12 * a21
                if det == 0:
                    continue
                r3 = v3[0] * v3[0] + s * v3[0] * v3[1] + t * v3[1] * v3[1]
                # center * det, in coordinates
                ca = (r2 * a22 - r3 * a12) + p1[0] * det
                cb = (a11 * r3 - a21 * r2) + p1[1] * det
                if det < 0:
                    ca, cb, det = -ca, -cb, -det
                if not (-det <= ca <= 2 * det and -det <= cb <= 2 * det):
                    continue
                h_num = None
                for pa in range(-3, 5):
                    xa = ca - pa * det
                    for pb in range(-3, 5):
                        xb = cb - pb * det
                        v = xa * xa + s * xa * xb + t * xb * xb
                        if h_num is None or v < h_num:
                            h_num = v
                h = Fraction(h_num, det * det)
                if h > best:
                    best = h
    return best


def grid_max_min_dist(tag: FieldTag, steps: int = 200) -> Fraction:
    """Max over an (steps x steps) rational grid of the min distance to O.

    Pure integer arithmetic: coordinates k/steps are scaled by steps and the
    quadratic form by steps^2.  Grid points lie in [0,1)^2, so the nearest
    lattice point has coordinates in {-1,0,1,2} x {0,1}.
    """
    s, t = norm_form(tag)
    n = steps
    best = 0
    cands = [(p * n, q * n) for p in (-1, 0, 1, 2) for q in (0, 1)]
    for i in range(n):
        for j in range(n):
            m = None
            for pn, qn in cands:
                x = i - pn
                y = j - qn
                v = x * x + s * x * y + t * y * y
                if m is None or v < m:
                    m = v
            if m > best:
                best = m
    return Fraction(best, n * n)


def random_field_element(rng: random.Random, tag: FieldTag, den: int = 4, span: int = 8) -> FieldElement:
    a = Fraction(rng.randint(-span, span), rng.randint(1, den))
    b = Fraction(rng.randint(-span, span), rng.randint(1, den))
    return FieldElement(a, b, tag)


def random_integral_element(rng: random.Random, tag: FieldTag, span: int = 3) -> FieldElement:
    return FieldElement(rng.randint(-span, span), rng.randint(-span, span), tag)


def all_tags():
    return [make_field(d) for d in ALL_D]


# ----------------------------------------------------------------------
# group element builders (guaranteed members by construction)


def random_unit_matrix(rng: random.Random, g: int, tag: FieldTag):
    from hermfj.field import unit_group
    from hermfj.hermitian import UnitMatrix

    u = UnitMatrix.identity(g, tag)
    units = unit_group(tag)
    w = FieldElement.omega(tag)
    for _ in range(rng.randint(1, 6)):
        kind = rng.randint(0, 2)
        if kind == 0 and g > 1:
            i, j = rng.sample(range(g), 2)
            u = u.mul(UnitMatrix.elementary(g, i, j, rng.choice([FieldElement.one(tag), w, -w])))
        elif kind == 1 and g > 1:
            perm = list(range(g))
            rng.shuffle(perm)
            u = u.mul(UnitMatrix.permutation(perm, tag))
        else:
            u = u.mul(UnitMatrix.diagonal_units([rng.choice(units) for _ in range(g)], tag))
    return u


def random_heisenberg(rng: random.Random, l: int, g: int, tag: FieldTag):
    from hermfj import linalg
    from hermfj.unitary import HeisenbergElement

    def rand_mat(rows, cols):
        return [
            [FieldElement(rng.randint(-2, 2), rng.randint(-2, 2), tag) for _ in range(cols)]
            for _ in range(rows)
        ]

    lam = rand_mat(l, g)
    mu = rand_mat(l, g)
    herm = [[FieldElement.zero(tag) for _ in range(l)] for _ in range(l)]
    for i in range(l):
        herm[i][i] = FieldElement(rng.randint(-2, 2), 0, tag)
        for j in range(i + 1, l):
            x = FieldElement(rng.randint(-2, 2), rng.randint(-2, 2), tag)
            herm[i][j] = x
            herm[j][i] = x.conj()
    kappa = linalg.mat_sub(
        linalg.freeze(herm),
        linalg.mat_mul(linalg.freeze(mu), linalg.conj_transpose(linalg.freeze(lam))),
    )
    return HeisenbergElement(lam, mu, kappa, tag)


def random_unitary(rng: random.Random, g: int, tag: FieldTag):
    from hermfj.unitary import UnitaryElement, jacobi_embed, rot

    out = UnitaryElement.identity(g, tag)
    for _ in range(rng.randint(1, 5)):
        kind = rng.randint(0, 2)
        if kind == 0:
            out = out.mul(rot(random_unit_matrix(rng, g, tag)))
        elif kind == 1:
            out = out.mul(UnitaryElement.j_element(g, tag))
        elif g >= 2:
            gamma = UnitaryElement.identity(g - 1, tag)
            out = out.mul(jacobi_embed(gamma, random_heisenberg(rng, 1, g - 1, tag)))
        else:
            out = out.mul(UnitaryElement.j_element(1, tag))
    return out


def theta_built_psi_body(rng: random.Random, tag: FieldTag, m_val: int, trunc: int,
                         g1: int = 2, classes_used: int = 3):
    """A Bob-consistent cogenus-1 table body at index m_val: coefficients are
    spread over whole coset classes with the matching shifts."""
    from hermfj.hermitian import delta_classes, enumerate_semi_integral, small_rep
    from hermfj.jacobi import _class_points, shift_matrix

    classes = delta_classes(g1, m_val, tag)
    body = {}
    for s in rng.sample(classes, min(classes_used, len(classes))):
        r0 = small_rep(s)
        shift0 = shift_matrix(r0, m_val)
        room = trunc - m_val
        seen = set()
        for target in enumerate_semi_integral(g1, int(room), tag):
            nprime = target.sub(shift0)
            if nprime in seen:
                continue
            if not nprime.is_psd() or rng.random() < 0.6:
                continue
            seen.add(nprime)
            value = (FieldElement(rng.randint(1, 5), 0, tag),)
            budget = (room - nprime.trace()) * m_val
            for r in _class_points(s, budget):
                body[(nprime.add(shift_matrix(r, m_val)), tuple((x,) for x in r))] = value
    return body


def psi0_body(rng: random.Random, tag: FieldTag, trunc: int, g1: int = 2):
    from hermfj.hermitian import enumerate_semi_integral

    zero_col = tuple((FieldElement.zero(tag),) for _ in range(g1))
    body = {}
    for n in enumerate_semi_integral(g1, trunc, tag):
        if rng.random() < 0.4:
            c = rng.randint(-3, 3)
            if c:
                body[(n, zero_col)] = (FieldElement(c, 0, tag),)
    return body


def build_degree3_family(rng: random.Random, tag: FieldTag, trunc: int = 4, k: int = 8):
    """A theta-built symmetric-style fixture: degree 3, cogenus 1, indices 0, 1."""
    from hermfj.ffj import FJFamily
    from hermfj.hermitian import HermMatrix

    idx0 = HermMatrix.from_rational(0, tag)
    idx1 = HermMatrix.from_rational(1, tag)
    tables = {
        idx0: psi0_body(rng, tag, trunc),
        idx1: theta_built_psi_body(rng, tag, 1, trunc),
    }
    return FJFamily(3, 1, k, tag, trunc, tables)


def random_component_vector(rng: random.Random, tag: FieldTag, m: int, total_trunc, k: int = 10):
    """Genus-1 theta components: per-class polynomial series whose truncations
    match what decomposition reproduces."""
    from hermfj.hermitian import HermMatrix, delta_classes, small_rep
    from hermfj.jacobi import ThetaComponentVector, shift_matrix
    from hermfj.series import FourierSeries

    classes = delta_classes(1, m, tag)
    comps = {}
    for s in classes:
        shift = shift_matrix(small_rep(s), m).trace()
        h_trunc = Fraction(total_trunc) - shift
        coeffs = {}
        for n in range(int(h_trunc) + 1):
            if rng.random() < 0.5:
                c = rng.randint(-4, 4)
                if c:
                    coeffs[HermMatrix.from_rational(n, tag)] = (
                        FieldElement(Fraction(c), 0, tag),
                    )
        comps[s] = FourierSeries(1, k - 1, tag, h_trunc, coeffs, semi_integral=False)
    return ThetaComponentVector(m, classes, comps)
