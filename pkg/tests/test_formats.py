import random
from fractions import Fraction

import pytest

from hermfj.errors import ParseError
from hermfj.ffj import disassemble
from hermfj.field import FieldElement, make_field
from hermfj.formats import (
    detect,
    read_any,
    read_components,
    read_family,
    read_jacobi,
    read_series,
    write_components,
    write_family,
    write_jacobi,
    write_series,
)
from hermfj.hermitian import delta_classes, enumerate_semi_integral
from hermfj.jacobi import theta_coeffs, theta_decompose
from hermfj.series import FourierSeries
from util import all_tags


def fe(a, b, tag):
    return FieldElement(Fraction(a), Fraction(b), tag)


def sample_series(rng, tag, g=2, trunc=3, dim=1):
    coeffs = {}
    for t in rng.sample(enumerate_semi_integral(g, trunc, tag), 4):
        coeffs[t] = tuple(
            fe(Fraction(rng.randint(-5, 5), rng.randint(1, 2)), 0, tag) for _ in range(dim)
        )
    return FourierSeries(g, 4, tag, trunc, coeffs, dim)


def test_series_round_trip_bit_identical():
    rng = random.Random(111)
    for tag in all_tags():
        f = sample_series(rng, tag)
        text = write_series(f)
        again = read_series(text)
        assert again == f
        assert write_series(again) == text


def test_series_vector_valued_round_trip():
    rng = random.Random(112)
    tag = make_field(-3)
    f = sample_series(rng, tag, dim=3)
    assert read_series(write_series(f)) == f


def test_jacobi_round_trip_bit_identical():
    rng = random.Random(113)
    for tag in all_tags():
        s = rng.choice(delta_classes(1, 2, tag))
        t = theta_coeffs(2, s, 3)
        text = write_jacobi(t)
        again = read_jacobi(text)
        assert again == t
        assert write_jacobi(again) == text


def test_family_round_trip_bit_identical():
    rng = random.Random(114)
    tag = make_field(-1)
    f = sample_series(rng, tag, g=3, trunc=3)
    for l in (1, 2):
        fam = disassemble(f, l)
        text = write_family(fam)
        again = read_family(text)
        assert again == fam
        assert write_family(again) == text


def test_components_round_trip_bit_identical():
    tag = make_field(-2)
    s = delta_classes(1, 1, tag)[2]
    v = theta_decompose(theta_coeffs(1, s, 3))
    text = write_components(v)
    again = read_components(text)
    assert again == v
    assert write_components(again) == text


def test_detect_and_read_any():
    rng = random.Random(117)
    tag = make_field(-1)
    f = sample_series(rng, tag)
    assert detect(write_series(f)) == "FJS v1"
    assert read_any(write_series(f)) == f
    with pytest.raises(ParseError):
        detect("BOGUS v9; d=-1")
    with pytest.raises(ParseError):
        detect("")


def test_parse_errors_carry_line_numbers():
    tag = make_field(-1)
    good = write_series(FourierSeries.constant(fe(1, 0, tag), 1, 0, 2))
    bad = good + "t = garbage ; c = 1/1+0/1*w\n"
    with pytest.raises(ParseError) as err:
        read_series(bad)
    assert err.value.line == 3
    with pytest.raises(ParseError):
        read_series("FJS v1; d=-1; g=1; k=0")  # missing header fields
    with pytest.raises(ParseError):
        read_series("FJS v1; d=-5; g=1; k=0; trunc=2; dim=1")  # bad field


def test_reader_rejects_keys_outside_contract():
    # non-PSD key fails at the value level with a ParseError
    text = "\n".join([
        "FJS v1; d=-1; g=1; k=0; trunc=2; dim=1",
        "t = -1/1+0/1*w ; c = 1/1+0/1*w",
    ]) + "\n"
    with pytest.raises(ParseError):
        read_series(text)


def test_family_and_bundle_malformed_cases():
    with pytest.raises(ParseError):
        read_family("FJFAM v1; d=-1; g=3; l=1; k=8; trunc=4; dim=1\n(x ; y) = z\n")
    with pytest.raises(ParseError):
        read_family("FJFAM v1; d=-1; g=3; l=4; k=8; trunc=4; dim=1\n")  # bad cogenus
    with pytest.raises(ParseError):
        read_components("HJC v1; d=-1; g=1; k=0; m=1; trunc=2; dim=1\n")  # no classes
    with pytest.raises(ParseError):
        read_components(
            "HJC v1; d=-1; g=1; k=0; m=1; trunc=2; dim=1\n"
            "[class 0; rep = 1/3+0/1*w; htrunc = 2]\n"  # rep not dual integral
        )


def test_jacobi_fractional_truncation_round_trip():
    from hermfj.jacobi import series_times_theta, theta_coeffs
    from hermfj.series import FourierSeries
    from hermfj.hermitian import small_rep
    from hermfj.jacobi import shift_matrix
    from fractions import Fraction

    tag = make_field(-3)
    s = delta_classes(1, 2, tag)[4]
    shift = shift_matrix(small_rep(s), 2).trace()
    h = FourierSeries(1, 5, tag, 2, {
        t: (fe(1, 0, tag),) for t in enumerate_semi_integral(1, 2, tag)
    })
    theta = theta_coeffs(2, s, Fraction(2) + shift)
    table = series_times_theta(h, theta)
    assert table.trunc.denominator > 1
    text = write_jacobi(table)
    assert read_jacobi(text) == table
    assert write_jacobi(read_jacobi(text)) == text
