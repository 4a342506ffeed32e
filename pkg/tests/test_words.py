# tests/test_words.py

import numpy as np
import pytest
from hypothesis import given, seed
from hypothesis import strategies as st
from pydantic import ValidationError

from app.schemas.word import CrossedElement, FreeGroupWord, FreeProductWord
from app.services.invariant_service import InvariantService
from app.services.linalg_service import LinalgService
from app.services.word_service import WordService, reduce_letters, reduce_syllables
from app.utils.exceptions import EvaluationMismatch, MismatchedArity, WordLengthExceeded, WordParseError
from app.utils.linalg import identity
from app.utils.rng import make_generator

HALF = 0.5 * np.ones((2, 2))


def test_reduce_letters():
    """Ui·Ui = 1 en cascada"""
    assert reduce_letters([1, 2, 2, 1, 3]) == (3,)
    assert reduce_letters([]) == ()


def test_reduce_syllables():
    """Sílabas del mismo generador se suman; exponentes nulos desaparecen"""
    assert reduce_syllables([(1, 2), (1, -2), (2, 1)]) == ((2, 1),)
    assert reduce_syllables([(1, 1), (2, 0), (1, 1)]) == ((1, 2),)


def test_length_cap():
    """Entradas por encima del tope se rechazan"""
    with pytest.raises(WordLengthExceeded):
        reduce_letters([1, 2] * 5001)
    with pytest.raises(WordLengthExceeded):
        reduce_syllables([(1, 10_001)])


def test_iso_image_is_not_capped():
    """El tope acota la entrada; la imagen por el isomorfismo puede doblarla"""
    x = WordService.parse_cp("W1^6000", m=1)
    image = WordService.iso_to_free_product(x)
    assert len(image.letters) == 12_000
    assert WordService.iso_from_free_product(image) == x


def test_unreduced_models_rejected():
    """Los modelos solo aceptan palabras reducidas"""
    with pytest.raises(ValidationError):
        FreeProductWord(n=2, letters=(1, 1))
    with pytest.raises(ValidationError):
        FreeGroupWord(m=1, syllables=((1, 1), (1, 2)))
    with pytest.raises(ValidationError):
        FreeProductWord(n=2, letters=(3,))


def test_fp_multiply_cancels():
    """U1 · U1 = e"""
    u1 = WordService.parse_fp("U1")
    product = WordService.fp_multiply(u1, u1)
    assert product.letters == ()
    assert WordService.format_fp(product) == "e"


def test_fp_inverse():
    """La inversa es la palabra al revés"""
    a = WordService.parse_fp("U1 U2 U3")
    assert WordService.fp_multiply(a, WordService.fp_inverse(a)).letters == ()


def test_mismatched_arity():
    """No se multiplican palabras de n distinto"""
    with pytest.raises(MismatchedArity):
        WordService.fp_multiply(WordService.parse_fp("U1", n=2), WordService.parse_fp("U1", n=3))
    with pytest.raises(MismatchedArity):
        WordService.cp_multiply(WordService.parse_cp("W1", m=1), WordService.parse_cp("W1", m=2))


def test_iso_examples():
    """V ↦ U1, V·W1 ↦ U2, W1 ↦ U1 U2, W1⁻¹ ↦ U2 U1"""
    cases = {"V": "U1", "V W1": "U2", "W1": "U1 U2", "W1^-1": "U2 U1", "e": "e"}
    for crossed, expected in cases.items():
        image = WordService.iso_to_free_product(WordService.parse_cp(crossed, m=1))
        assert WordService.format_fp(image) == expected


def test_iso_from_free_product():
    """U_{i+1} ↦ V·Wi"""
    x = WordService.iso_from_free_product(WordService.parse_fp("U3", n=3))
    assert x == CrossedElement(eps=1, word=FreeGroupWord(m=2, syllables=((2, 1),)))


def test_relation_image():
    """V·W·V = W⁻¹ en el producto cruzado"""
    V = WordService.parse_cp("V", m=2)
    for i in (1, 2):
        W = WordService.parse_cp(f"W{i}", m=2)
        conjugated = WordService.cp_multiply(WordService.cp_multiply(V, W), V)
        assert conjugated == WordService.parse_cp(f"W{i}^-1", m=2)


def test_cp_inverse():
    """x · x⁻¹ = e"""
    x = WordService.parse_cp("V W1^2 W2^-1")
    assert WordService.cp_multiply(x, WordService.cp_inverse(x)) == WordService.cp_identity(2)
    assert WordService.cp_multiply(WordService.cp_inverse(x), x) == WordService.cp_identity(2)


def test_alpha_is_involution():
    """α² = id"""
    w = WordService.fg_word(2, [(1, 3), (2, -1)])
    assert WordService.alpha(WordService.alpha(w)) == w
    assert WordService.alpha(w).syllables == ((1, -3), (2, 1))


def test_parse_and_format_crossed():
    """Sintaxis textual de ida y vuelta"""
    assert WordService.format_cp(WordService.parse_cp("V W1^-2 W2")) == "V W1^-2 W2"
    assert WordService.parse_cp("V^3").eps == 1
    assert WordService.format_cp(WordService.parse_cp("V V")) == "e"
    assert WordService.parse_cp("V W1^-2 W2").m == 2


@pytest.mark.parametrize("text", ["X1", "U0", "U", "U1x"])
def test_parse_fp_errors(text):
    """Tokens inválidos en producto libre"""
    with pytest.raises(WordParseError):
        WordService.parse_fp(text)


@pytest.mark.parametrize("text", ["W0", "W", "U1", "V^a"])
def test_parse_cp_errors(text):
    """Tokens inválidos en elemento cruzado"""
    with pytest.raises(WordParseError):
        WordService.parse_cp(text)


def test_parse_arity_overflow():
    """Índices por encima de n declarado"""
    with pytest.raises(WordParseError):
        WordService.parse_fp("U3", n=2)
    with pytest.raises(WordParseError):
        WordService.parse_cp("W2", m=1)


def test_evaluate_fp():
    """U1 con P1 = ½ unos da [[0,1],[1,0]]; e da I"""
    result = WordService.evaluate_fp(WordService.parse_fp("U1"), [HALF])
    np.testing.assert_allclose(result, [[0, 1], [1, 0]], atol=1e-15)
    empty = WordService.evaluate_fp(WordService.parse_fp("e", n=1), [HALF])
    np.testing.assert_array_equal(empty, identity(2))


def test_evaluate_wrong_number_of_projections():
    """Tantas proyecciones como generadores"""
    with pytest.raises(MismatchedArity):
        WordService.evaluate_fp(WordService.parse_fp("U1", n=2), [HALF])


def test_evaluate_cp_matches_direct():
    """Evaluar vía isomorfismo coincide con V = 2P1 - I, Wi = V(2P_{i+1} - I)"""
    projections = [LinalgService.random_projection(5, r, seed=40 + r) for r in (2, 3, 1)]
    rng = make_generator(8)
    for _ in range(25):
        x = WordService.random_crossed_element(2, 12, rng)
        via_iso = WordService.evaluate_cp(x, projections)
        direct = WordService.evaluate_cp_direct(x, projections)
        np.testing.assert_allclose(via_iso, direct, atol=1e-10)


def test_evaluation_mismatch_is_raised(monkeypatch):
    """Si la evaluación directa no coincide se lanza EvaluationMismatch"""
    projections = [LinalgService.random_projection(4, 2, seed=s) for s in (1, 2)]
    x = WordService.parse_cp("V W1^3")
    WordService.evaluate_cp(x, projections)
    monkeypatch.setattr(WordService, "evaluate_cp_direct", staticmethod(lambda *args: -identity(4)))
    with pytest.raises(EvaluationMismatch):
        WordService.evaluate_cp(x, projections)


def test_random_generators_are_reduced():
    """Generadores sembrados: palabras reducidas y reproducibles"""
    first = [WordService.random_fp_word(3, 20, make_generator(5)) for _ in range(3)]
    second = [WordService.random_fp_word(3, 20, make_generator(5)) for _ in range(3)]
    assert first == second
    element = WordService.random_crossed_element(4, 20, make_generator(6))
    assert element.word.length <= 20


@pytest.mark.parametrize("n", [2, 3, 5])
def test_isomorphism_suite(n):
    """Idas y vueltas, homomorfismo, asociatividad, α, relación y funtorialidad (1000 elementos)"""
    report = InvariantService.word_suite(n, count=1000, seed=n)
    assert report.passed, [item.model_dump() for item in report.failures]
    names = {item.name for item in report.items}
    assert {"cp_associativity", "fp_associativity", "alpha_homomorphism"} <= names


# ============================================================================
# PROPIEDADES CON HYPOTHESIS
# ============================================================================

ARITY = 3

fp_letters = st.lists(st.integers(min_value=1, max_value=ARITY), max_size=20)
fg_syllables = st.lists(
    st.tuples(st.integers(min_value=1, max_value=ARITY - 1), st.integers(min_value=-3, max_value=3)),
    max_size=7,
)


def _crossed(eps, syllables):
    return CrossedElement(eps=eps, word=WordService.fg_word(ARITY - 1, syllables))


@seed(1)
@given(a=fp_letters, b=fp_letters, c=fp_letters)
def test_fp_multiply_is_associative(a, b, c):
    """(ab)c = a(bc) y a·a⁻¹ = e en (Z2)^{*3}"""
    a, b, c = (WordService.fp_word(ARITY, letters) for letters in (a, b, c))
    left = WordService.fp_multiply(WordService.fp_multiply(a, b), c)
    assert left == WordService.fp_multiply(a, WordService.fp_multiply(b, c))
    assert WordService.fp_multiply(a, WordService.fp_inverse(a)).letters == ()


@seed(2)
@given(eps=st.integers(0, 1), u=fg_syllables, eps2=st.integers(0, 1), v=fg_syllables,
       eps3=st.integers(0, 1), w=fg_syllables)
def test_cp_multiply_is_associative(eps, u, eps2, v, eps3, w):
    """Asociatividad en F_2 ⋊ Z2"""
    x, y, z = _crossed(eps, u), _crossed(eps2, v), _crossed(eps3, w)
    multiply = WordService.cp_multiply
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


@seed(3)
@given(u=fg_syllables, v=fg_syllables)
def test_alpha_is_homomorphism(u, v):
    """α(uv) = α(u)α(v)"""
    u, v = WordService.fg_word(ARITY - 1, u), WordService.fg_word(ARITY - 1, v)
    alpha = WordService.alpha
    assert alpha(WordService.fg_multiply(u, v)) == WordService.fg_multiply(alpha(u), alpha(v))


@seed(4)
@given(eps=st.integers(0, 1), u=fg_syllables, eps2=st.integers(0, 1), v=fg_syllables)
def test_isomorphism_is_multiplicative(eps, u, eps2, v):
    """La imagen de un producto es el producto de las imágenes"""
    x, y = _crossed(eps, u), _crossed(eps2, v)
    image = WordService.iso_to_free_product
    assert image(WordService.cp_multiply(x, y)) == WordService.fp_multiply(image(x), image(y))
    assert WordService.iso_from_free_product(image(x)) == x
