from hypothesis import given, assume, strategies as st
import pytest

from radix import ring
from radix.exceptions import ParseError, VariableMismatch
from radix.ring import BasePoly, parse_poly


VARIABLES = ("X", "Y")

polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.integers(-5, 5),
    max_size=4,
).map(lambda terms: BasePoly.from_dict(terms, VARIABLES))
nonzero_polys = polys.filter(lambda f: not f.is_zero)
primes = st.sampled_from([2, 3, 5])


def test_arithmetic(poly):
    assert poly("(X + 1)*(X - 1)") == poly("X^2 - 1")
    assert poly("X^3 + 9") * 0 == poly("0")
    assert poly("X^3 + 9") * poly("Y^3 + 9") == poly("X^3*Y^3 + 9*X^3 + 9*Y^3 + 81")
    assert poly("X - Y") ** 2 == poly("X^2 - 2*X*Y + Y^2")
    assert 1 - poly("X") == poly("-X + 1")


def test_mismatched_variables(poly):
    with pytest.raises(VariableMismatch):
        poly("X") + poly("X", ("X",))


def test_text_form(poly):
    assert str(poly("9 + X^3")) == "X^3 + 9"
    assert str(poly("-3*X*Y^2 + X - 1")) == "-3*X*Y^2 + X - 1"
    assert str(poly("0")) == "0"
    assert poly("X^2*Y + X*Y^2 + X^3").terms()[0] == ((3, 0), 1)


def test_exact_divide(poly):
    assert ring.exact_divide(poly("X^2 - 1"), poly("X - 1")) == poly("X + 1")
    assert ring.exact_divide(poly("X^2 + 1"), poly("X - 1")) is None
    variables = ("X", "W", "h")
    numerator = parse_poly("3*X*(W - h)*(W*h)", variables)
    divisor = parse_poly("3*(W - h)", variables)
    assert ring.exact_divide(numerator, divisor) == parse_poly("X*W*h", variables)
    with pytest.raises(ZeroDivisionError):
        ring.exact_divide(poly("X"), poly("0"))


def test_pth_root_mod_p(poly):
    assert ring.pth_root_mod_p(poly("X^3"), 3) == poly("X")
    assert ring.pth_root_mod_p(poly("2*X^3 + X^6*Y^3"), 3) == poly("2*X + X^2*Y")
    assert ring.pth_root_mod_p(poly("X^2 + 1"), 3) is None


def test_is_pth_power_mod_p2(poly):
    cert = ring.is_pth_power_mod_p2(poly("X^3 + 9"), 3)
    assert (cert.h, cert.g) == (poly("X"), poly("1"))
    cert = ring.is_pth_power_mod_p2(poly("(X + Y)^5"), 5)
    assert cert.g == poly("0")
    assert ring.is_pth_power_mod_p2(poly("X^3 + 3"), 3) is None


def test_pth_power_mod_p_but_not_mod_p2(poly):
    negatives = [poly("X^6 - 3*X^6 + 9"), poly("(X*Y)^3 + 3*(X*Y)^3 + 9")]
    for f in negatives:
        assert ring.is_pth_power_mod_p(f, 3)
        assert ring.is_pth_power_mod_p2(f, 3) is None


def test_not_prime(poly):
    with pytest.raises(ValueError):
        ring.pth_root_mod_p(poly("X"), 4)


def test_is_square_free(poly):
    assert ring.is_square_free(poly("X^3 + 9"))
    assert not ring.is_square_free(poly("(X + 1)^2"))
    assert not ring.is_square_free(poly("4*X + 4"))
    assert ring.is_square_free(poly("6*X*Y + 6"))
    with pytest.raises(ValueError):
        ring.is_square_free(poly("0"))


def test_square_free_is_needed_for_pth_powers(poly):
    a, b = "(x*y^4 + 9)", "(x^4*y + 9)"
    f = parse_poly("%s*%s^2" % (a, b), ("x", "y"))
    assert ring.is_pth_power_mod_p2(f, 3) is not None
    assert not ring.is_square_free(f)


def test_pairwise_coprime(poly):
    assert ring.pairwise_coprime([poly("X^3 + 9"), poly("Y^3 + 9")])
    assert not ring.pairwise_coprime([poly("X"), poly("X*Y")])
    assert ring.pairwise_coprime([poly("X*Y^4 + 9"), poly("X^4*Y + 9")])
    assert ring.pairwise_coprime([])
    assert ring.first_common_factor([poly("X"), poly("Y"), poly("X*Y")]) == (0, 2)


def test_is_local_unit(poly):
    assert ring.is_local_unit(2, 3)
    assert not ring.is_local_unit(3, 3)
    assert ring.is_local_unit(poly("X + 2"), 3)
    assert not ring.is_local_unit(poly("X + 3"), 3)


def test_gcd(poly):
    assert ring.gcd(poly("X^2 - 1"), poly("X - 1")) == poly("X - 1")
    assert ring.gcd(poly("6*X"), poly("4*X^2")) == poly("2*X")
    assert ring.gcd(poly("X^3 + 9"), poly("Y^3 + 9")) == 1
    assert ring.gcd(poly("-X - 1"), poly("0")) == poly("X + 1")
    with pytest.raises(ValueError):
        ring.gcd(poly("0"), poly("0"))


def test_parse_errors():
    with pytest.raises(ParseError) as error:
        parse_poly("X^3 + Z", VARIABLES)
    assert error.value.column == 7
    with pytest.raises(ParseError):
        parse_poly("X/2", VARIABLES)
    with pytest.raises(ParseError):
        parse_poly("X^^2", VARIABLES)
    with pytest.raises(ParseError):
        parse_poly("", VARIABLES)


def test_substitute_powers(poly):
    image = poly("X*Y^4 + 9").substitute_powers(3, ("u", "v"))
    assert image == parse_poly("u^3*v^12 + 9", ("u", "v"))


@given(nonzero_polys, polys, primes)
def test_certificate_round_trip(h, g, p):
    f = h ** p + g * (p * p)
    cert = ring.is_pth_power_mod_p2(f, p)
    assert cert is not None
    assert cert.h ** p + cert.g * (p * p) == f


@given(polys, primes)
def test_pth_root_is_a_root(f, p):
    h = ring.pth_root_mod_p(f, p)
    if h is not None:
        assert (h ** p - f).divisible_by(p)


@given(polys, nonzero_polys)
def test_exact_divide_inverts_multiplication(a, b):
    assert ring.exact_divide(a * b, b) == a


@given(polys, polys, nonzero_polys)
def test_gcd_contracts(a, b, c):
    assume(not (a.is_zero and b.is_zero))
    common = ring.gcd(a, b)
    assert ring.exact_divide(a, common) is not None
    assert ring.exact_divide(b, common) is not None
    scaled = ring.gcd(a * c, b * c)
    assert scaled in (c * common, -(c * common))


@given(nonzero_polys, nonzero_polys)
def test_squares_are_not_square_free(f, g):
    assume(not f.is_ground)
    assert not ring.is_square_free(f * f * g)
