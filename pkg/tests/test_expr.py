import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratapprox.expr import ParseError, eval_expression, parse_expression


@pytest.mark.parametrize(
    "text, z, expected",
    [
        ("1+2*3", 0, 7),
        ("2^3^2", 0, 512),
        ("-2^2", 0, -4),
        ("2^-1", 0, 0.5),
        ("(1+z)*(1-z)", 3, -8),
        ("2i", 0, 2j),
        ("3.5im", 0, 3.5j),
        ("1e-3*z", 2, 2e-3),
        ("i*pi", 0, 1j * np.pi),
        ("e", 0, np.e),
        ("abs(3+4i)", 0, 5),
        ("sqrt(-1)", 0, 1j),
        ("exp(i*pi)", 0, -1),
        ("log(1+i+5i*z)", 0.2, cmath.log(1 + 2j)),
        ("coth(z)", 0.5, 1 / np.tanh(0.5)),
        ("sin(z)^2 + cos(z)^2", 0.3 + 0.1j, 1),
    ],
)
def test_values(text, z, expected):
    assert eval_expression(parse_expression(text), z) == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_vectorized_and_scalar():
    e = parse_expression("z^2")
    out = e(np.array([1, 2j]))
    assert np.allclose(out, [1, -4])
    assert np.ndim(eval_expression(e, 3)) == 0


def test_bytes_input():
    assert parse_expression(b"z+1")(1) == 2


@pytest.mark.parametrize(
    "text, offset",
    [
        ("1/+", 2),
        ("", 0),
        ("(1+z", 4),
        ("foo(z)", 0),
        ("q", 0),
        ("sin", 3),
        ("1.2.3", 0),
        ("2x", 0),
        ("z $ 2", 2),
        ("z)", 1),
    ],
)
def test_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_expression(text)
    assert info.value.offset == offset
    assert str(info.value).endswith(f"at offset {offset}")


def test_depth_limit():
    parse_expression("(" * 90 + "z" + ")" * 90)
    with pytest.raises(ParseError, match="nested too deeply"):
        parse_expression("(" * 500 + "z" + ")" * 500)
    with pytest.raises(ParseError):
        parse_expression("-" * 1000 + "z")


def test_invalid_utf8():
    with pytest.raises(ParseError, match="UTF-8"):
        parse_expression(b"z+\xff")


def test_nonfinite_results_are_values_not_errors():
    assert not np.isfinite(parse_expression("coth(z)")(0))
    assert not np.isfinite(parse_expression("1/z")(0))


@settings(max_examples=500, deadline=None)
@given(st.binary(max_size=40))
def test_fuzz_bytes_never_crash(data):
    try:
        e = parse_expression(data)
    except ParseError:
        return
    e(np.array([0.3 + 0.2j, -1.0]))


@settings(max_examples=500, deadline=None)
@given(st.text(alphabet="z0123456789.+-*/^() ie", max_size=30))
def test_fuzz_text_never_crash(text):
    try:
        e = parse_expression(text)
    except ParseError as exc:
        assert 0 <= exc.offset <= len(text.encode())
        return
    e(np.array([0.5j, 2.0]))
