import pytest
from hypothesis import given

from treespace.ordinal import (OMEGA, ONE, ZERO, Ordinal, OrdinalParseError, add, cmp,
                               format_ordinal, leading, omega_pow, omega_step, parse)
from trees import ordinals

W = OMEGA


def w(text):
    return parse(text)


# -- examples -------------------------------------------------------------------

@pytest.mark.parametrize("a, b, expected", [
    (W, Ordinal.of(2), "greater"),
    (w("w+1"), w("w*2"), "less"),
    (w("w^(2)"), w("w*5+3"), "greater"),
    (w("w+1"), w("w+1"), "equal"),
])
def test_cmp_examples(a, b, expected):
    assert cmp(a, b) == expected


def test_add_examples():
    assert add(ZERO, w("w^(2)+3")) == w("w^(2)+3")
    assert add(ONE, W) == W
    assert add(w("w^(2)+w"), w("w+1")) == w("w^(2)+w*2+1")


def test_omega_pow_examples():
    assert omega_pow(ZERO) == ONE
    assert omega_pow(ONE) == W
    big = omega_pow(w("w+1"))
    assert big.terms == ((w("w+1"), 1),)


def _least_upper_bound_of_multiples(delta: Ordinal, probes) -> bool:
    """Order-type oracle: omega_step(delta) bounds every delta*n and nothing smaller does."""
    top = omega_step(delta)
    multiples = [delta.mul_nat(n) for n in range(1, 40)]
    if not all(m < top for m in multiples):
        return False
    for g in probes:
        if g < top and not any(not m < g for m in multiples):
            return False
    return True


def test_omega_step_examples():
    assert omega_step(Ordinal.of(5)) == W
    assert omega_step(w("w+3")) == w("w^(2)")
    assert omega_step(ONE) == W
    probes = [Ordinal.of(n) for n in range(100)] + [w("w*3+2"), w("w^(2)"), w("w^(2)*2+w")]
    assert _least_upper_bound_of_multiples(Ordinal.of(5), probes)
    assert _least_upper_bound_of_multiples(w("w+3"), probes)
    with pytest.raises(ValueError):
        omega_step(ZERO)


def test_leading_examples():
    assert leading(w("w^(2)*3+w*5+7")) == (Ordinal.of(2), 3)
    assert leading(Ordinal.of(7)) == (ZERO, 7)
    with pytest.raises(ValueError):
        leading(ZERO)


@pytest.mark.parametrize("text, value", [
    ("w^(2)*3+w+1", Ordinal(((Ordinal.of(2), 3), (ONE, 1), (ZERO, 1)))),
    ("0", ZERO),
    ("w^(w)", omega_pow(W)),
    (" w ^ ( 2 ) + 1 ", Ordinal(((Ordinal.of(2), 1), (ZERO, 1)))),
    ("3+w", W),
])
def test_parse_examples(text, value):
    assert parse(text) == value


@pytest.mark.parametrize("bad", ["", "w^2", "w^(2", "x", "w+", "1 2", "w*"])
def test_parse_errors_report_position(bad):
    with pytest.raises(OrdinalParseError) as exc:
        parse(bad)
    assert exc.value.pos >= 0
    assert "position" in str(exc.value)


def test_format_forms():
    assert format_ordinal(w("w^(2)*3+w+1")) == "w^(2)*3+w+1"
    assert format_ordinal(w("w*4")) == "w*4"


def test_canonical_form_enforced():
    with pytest.raises(ValueError):
        Ordinal(((ZERO, 1), (ONE, 1)))
    with pytest.raises(ValueError):
        Ordinal(((ONE, 0),))
    with pytest.raises(AttributeError):
        W.terms = ()


def test_non_commutativity_witness():
    assert add(ONE, W) == W
    assert add(W, ONE) == w("w+1")
    assert add(ONE, W) != add(W, ONE)


def test_big_coefficients_do_not_overflow():
    huge = Ordinal.of(10 ** 40)
    assert add(huge, huge) == Ordinal.of(2 * 10 ** 40)
    assert parse(format_ordinal(W.mul_nat(10 ** 30))) == W.mul_nat(10 ** 30)


# -- properties -------------------------------------------------------------------

@given(ordinals(), ordinals(), ordinals())
def test_associativity(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))


@given(ordinals(), ordinals(), ordinals())
def test_right_monotonicity(a, b, c):
    if b < c:
        assert add(a, b) < add(a, c)


@given(ordinals(), ordinals())
def test_order_is_total_and_antisymmetric(a, b):
    r = cmp(a, b)
    assert r == {"less": "greater", "greater": "less", "equal": "equal"}[cmp(b, a)]
    assert (r == "equal") == (a == b)


@given(ordinals(), ordinals())
def test_omega_step_indecomposable(delta, x):
    if delta.is_zero():
        return
    top = omega_step(delta)
    assert delta < top
    if x < top:
        assert add(x, top) == top


@given(ordinals(nested=2))
def test_roundtrip(a):
    assert parse(format_ordinal(a)) == a
    assert parse(str(a)) == a


@given(ordinals())
def test_split_finite(a):
    lam, n = a.split_finite()
    assert add(lam, Ordinal.of(n)) == a
    assert lam.is_zero() or lam.is_limit()
