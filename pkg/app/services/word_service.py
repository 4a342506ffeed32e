# app/services/word_service.py

import re
import numpy as np
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from app.config.tolerances import DEFAULT_TOLERANCES, WORD_LENGTH_CAP, ToleranceConfig
from app.schemas.word import CrossedElement, FreeGroupWord, FreeProductWord
from app.services.linalg_service import LinalgService
from app.utils.exceptions import (
    EvaluationMismatch, InconsistentDims, MismatchedArity, WordLengthExceeded, WordParseError,
)
from app.utils.linalg import adjoint, identity, matrix_power, operator_norm

logger = logging.getLogger(__name__)

_FP_TOKEN = re.compile(r"^U(\d+)$")
_CP_TOKEN = re.compile(r"^(V|W(\d+))(?:\^([+-]?\d+))?$")


def _check_length(length: int, cap: Optional[int] = WORD_LENGTH_CAP) -> None:
    if cap is not None and length > cap:
        raise WordLengthExceeded(f"Palabra de longitud {length} supera el tope {cap}")


def reduce_letters(letters: Iterable[int], cap: Optional[int] = WORD_LENGTH_CAP) -> Tuple[int, ...]:
    """Cancelar letras adyacentes iguales (Ui·Ui = 1) con una pila; cap=None no acota la entrada"""
    letters = list(letters)
    _check_length(len(letters), cap)
    stack: List[int] = []
    for letter in letters:
        if stack and stack[-1] == letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def reduce_syllables(syllables: Iterable[Tuple[int, int]]) -> Tuple[Tuple[int, int], ...]:
    """Fusionar sílabas adyacentes del mismo generador y quitar exponentes nulos"""
    syllables = list(syllables)
    _check_length(sum(abs(e) for _, e in syllables))
    stack: List[Tuple[int, int]] = []
    for generator, exponent in syllables:
        if exponent == 0:
            continue
        if stack and stack[-1][0] == generator:
            merged = stack.pop()[1] + exponent
            if merged:
                stack.append((generator, merged))
        else:
            stack.append((generator, exponent))
    return tuple(stack)


class WordService:
    """Cálculo de palabras en (Z2)^{*n} y en F_{n-1} ⋊ Z2"""

    # ========================================================================
    # PRODUCTO LIBRE DE Z2
    # ========================================================================

    @staticmethod
    def fp_word(n: int, letters: Sequence[int]) -> FreeProductWord:
        return FreeProductWord(n=n, letters=reduce_letters(letters))

    @staticmethod
    def fp_multiply(a: FreeProductWord, b: FreeProductWord) -> FreeProductWord:
        if a.n != b.n:
            raise MismatchedArity(f"n distintos: {a.n} y {b.n}")
        return WordService.fp_word(a.n, a.letters + b.letters)

    @staticmethod
    def fp_inverse(a: FreeProductWord) -> FreeProductWord:
        return FreeProductWord(n=a.n, letters=tuple(reversed(a.letters)))

    # ========================================================================
    # GRUPO LIBRE Y PRODUCTO CRUZADO
    # ========================================================================

    @staticmethod
    def fg_word(m: int, syllables: Sequence[Tuple[int, int]]) -> FreeGroupWord:
        return FreeGroupWord(m=m, syllables=reduce_syllables(syllables))

    @staticmethod
    def fg_multiply(u: FreeGroupWord, v: FreeGroupWord) -> FreeGroupWord:
        if u.m != v.m:
            raise MismatchedArity(f"m distintos: {u.m} y {v.m}")
        return WordService.fg_word(u.m, u.syllables + v.syllables)

    @staticmethod
    def fg_inverse(w: FreeGroupWord) -> FreeGroupWord:
        return FreeGroupWord(m=w.m, syllables=tuple((g, -e) for g, e in reversed(w.syllables)))

    @staticmethod
    def alpha(w: FreeGroupWord) -> FreeGroupWord:
        """Automorfismo Wi ↦ Wi⁻¹ (invierte cada exponente)"""
        return FreeGroupWord(m=w.m, syllables=tuple((g, -e) for g, e in w.syllables))

    @staticmethod
    def cp_identity(m: int) -> CrossedElement:
        return CrossedElement(eps=0, word=FreeGroupWord(m=m))

    @staticmethod
    def cp_multiply(x: CrossedElement, y: CrossedElement) -> CrossedElement:
        """(V^a·u)(V^b·v) = V^{a⊕b}·α^b(u)·v"""
        if x.m != y.m:
            raise MismatchedArity(f"m distintos: {x.m} y {y.m}")
        left = WordService.alpha(x.word) if y.eps else x.word
        return CrossedElement(eps=x.eps ^ y.eps, word=WordService.fg_multiply(left, y.word))

    @staticmethod
    def cp_inverse(x: CrossedElement) -> CrossedElement:
        """(V^ε·w)⁻¹ = V^ε·α^ε(w⁻¹)"""
        inverse = WordService.fg_inverse(x.word)
        return CrossedElement(eps=x.eps, word=WordService.alpha(inverse) if x.eps else inverse)

    # ========================================================================
    # ISOMORFISMO  V ↦ U1,  V·Wi ↦ U_{i+1}
    # ========================================================================

    @staticmethod
    def iso_to_free_product(x: CrossedElement) -> FreeProductWord:
        """V ↦ U1, Wi ↦ U1·U_{i+1}, Wi⁻¹ ↦ U_{i+1}·U1"""
        letters: List[int] = [1] if x.eps else []
        for generator, exponent in x.word.syllables:
            block = [1, generator + 1] if exponent > 0 else [generator + 1, 1]
            letters.extend(block * abs(exponent))
        # la imagen puede doblar la longitud de una entrada ya acotada
        return FreeProductWord(n=x.m + 1, letters=reduce_letters(letters, cap=None))

    @staticmethod
    def iso_from_free_product(a: FreeProductWord) -> CrossedElement:
        """U1 ↦ V, U_{i+1} ↦ V·Wi, multiplicado de izquierda a derecha"""
        m = a.n - 1
        result = WordService.cp_identity(m)
        for letter in a.letters:
            if letter == 1:
                factor = CrossedElement(eps=1, word=FreeGroupWord(m=m))
            else:
                factor = CrossedElement(eps=1, word=FreeGroupWord(m=m, syllables=((letter - 1, 1),)))
            result = WordService.cp_multiply(result, factor)
        return result

    # ========================================================================
    # EVALUACIÓN SOBRE PROYECCIONES CONCRETAS
    # ========================================================================

    @staticmethod
    def _symmetries(projections: Sequence[np.ndarray], n: int, config: ToleranceConfig) -> List[np.ndarray]:
        if len(projections) != n:
            raise MismatchedArity(f"Se esperaban {n} proyecciones, llegaron {len(projections)}")
        if not projections:
            raise MismatchedArity("Hace falta al menos una proyección")
        dim = projections[0].shape[0]
        symmetries = []
        for P in projections:
            if P.shape != (dim, dim):
                raise InconsistentDims(f"Proyección de forma {P.shape}, se esperaba {(dim, dim)}")
            LinalgService.require_projection(P, config)
            symmetries.append(2 * np.asarray(P, dtype=np.complex128) - identity(dim))
        return symmetries

    @staticmethod
    def evaluate_fp(a: FreeProductWord, projections: Sequence[np.ndarray],
                    config: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
        """Producto de Ui = 2Pi - I sobre las letras; la palabra vacía da I"""
        symmetries = WordService._symmetries(projections, a.n, config)
        result = identity(symmetries[0].shape[0])
        for letter in a.letters:
            result = result @ symmetries[letter - 1]
        return result

    @staticmethod
    def evaluate_cp_direct(x: CrossedElement, projections: Sequence[np.ndarray],
                           config: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
        """V = 2P1 - I, Wi = V·(2P_{i+1} - I), Wi⁻¹ = Wi*"""
        symmetries = WordService._symmetries(projections, x.m + 1, config)
        V = symmetries[0]
        result = V.copy() if x.eps else identity(V.shape[0])
        for generator, exponent in x.word.syllables:
            W = V @ symmetries[generator]
            result = result @ matrix_power(W if exponent > 0 else adjoint(W), abs(exponent))
        return result

    @staticmethod
    def evaluate_cp(x: CrossedElement, projections: Sequence[np.ndarray],
                    config: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
        """
        Evaluar a través del isomorfismo y contrastar con la evaluación directa.

        Raises:
            EvaluationMismatch: Si ambas rutas difieren más de tol_report·dim
        """
        result = WordService.evaluate_fp(WordService.iso_to_free_product(x), projections, config)
        direct = WordService.evaluate_cp_direct(x, projections, config)
        residual = operator_norm(result - direct)
        if residual > config.tol_report * result.shape[0]:
            raise EvaluationMismatch(f"Evaluación directa difiere en {residual:.3e}")
        return result

    # ========================================================================
    # SINTAXIS TEXTUAL
    # ========================================================================

    @staticmethod
    def parse_fp(text: str, n: Optional[int] = None) -> FreeProductWord:
        """
        Parsear "U1 U2 ..." (o "e" para la palabra vacía) y reducir.

        Args:
            text: Palabra en texto
            n: Número de generadores; si es None se toma el mayor índice usado
        """
        letters = []
        for token in text.split():
            if token == "e":
                continue
            match = _FP_TOKEN.match(token)
            if not match or int(match.group(1)) < 1:
                raise WordParseError(f"Token inválido en palabra de producto libre: {token!r}")
            letters.append(int(match.group(1)))
        arity = n if n is not None else max(letters, default=1)
        if letters and max(letters) > arity:
            raise WordParseError(f"U{max(letters)} excede n={arity}")
        return WordService.fp_word(arity, letters)

    @staticmethod
    def parse_cp(text: str, m: Optional[int] = None) -> CrossedElement:
        """
        Parsear "V W1^-1 W2 ..." y multiplicar los tokens de izquierda a derecha.

        Acepta "e", V^k (k módulo 2) y Wi^k con k entero con signo.
        """
        tokens = []
        for token in text.split():
            if token == "e":
                continue
            match = _CP_TOKEN.match(token)
            if not match:
                raise WordParseError(f"Token inválido en elemento cruzado: {token!r}")
            exponent = int(match.group(3)) if match.group(3) is not None else 1
            generator = int(match.group(2)) if match.group(2) is not None else 0
            if match.group(2) is not None and generator < 1:
                raise WordParseError(f"Generador W{generator} inválido")
            tokens.append((generator, exponent))
        used = [g for g, _ in tokens if g]
        arity = m if m is not None else max(used, default=0)
        if used and max(used) > arity:
            raise WordParseError(f"W{max(used)} excede m={arity}")

        result = WordService.cp_identity(arity)
        for generator, exponent in tokens:
            if generator == 0:
                factor = CrossedElement(eps=exponent % 2, word=FreeGroupWord(m=arity))
            else:
                factor = CrossedElement(eps=0, word=WordService.fg_word(arity, [(generator, exponent)]))
            result = WordService.cp_multiply(result, factor)
        return result

    @staticmethod
    def format_fp(a: FreeProductWord) -> str:
        return " ".join(f"U{letter}" for letter in a.letters) or "e"

    @staticmethod
    def format_cp(x: CrossedElement) -> str:
        tokens = ["V"] if x.eps else []
        for generator, exponent in x.word.syllables:
            tokens.append(f"W{generator}" if exponent == 1 else f"W{generator}^{exponent}")
        return " ".join(tokens) or "e"

    # ========================================================================
    # GENERADORES ALEATORIOS (corpus de propiedades)
    # ========================================================================

    @staticmethod
    def random_fp_word(n: int, max_length: int, rng: np.random.Generator) -> FreeProductWord:
        """Palabra reducida aleatoria de longitud <= max_length"""
        length = int(rng.integers(0, max_length + 1))
        letters: List[int] = []
        for _ in range(length):
            choices = [i for i in range(1, n + 1) if not letters or i != letters[-1]]
            if not choices:
                break
            letters.append(int(rng.choice(choices)))
        return FreeProductWord(n=n, letters=tuple(letters))

    @staticmethod
    def random_crossed_element(m: int, max_length: int, rng: np.random.Generator) -> CrossedElement:
        """V^ε·w aleatorio con Σ|exponentes| <= max_length"""
        eps = int(rng.integers(0, 2))
        budget = int(rng.integers(0, max_length + 1)) if m else 0
        syllables: List[Tuple[int, int]] = []
        while budget > 0:
            choices = [g for g in range(1, m + 1) if not syllables or g != syllables[-1][0]]
            if not choices:
                break
            generator = int(rng.choice(choices))
            size = int(rng.integers(1, min(3, budget) + 1))
            sign = 1 if rng.random() < 0.5 else -1
            syllables.append((generator, sign * size))
            budget -= size
        return CrossedElement(eps=eps, word=FreeGroupWord(m=m, syllables=tuple(syllables)))
