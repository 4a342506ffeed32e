# app/cli/commands/word.py

import click
from typing import List, Optional, Union

from app.cli.common import run_command
from app.schemas.matrix import MatrixFile
from app.schemas.word import CrossedElement, FreeProductWord
from app.services.matrix_io_service import MatrixIOService
from app.services.word_service import WordService
from app.utils.linalg import adjoint, identity, operator_norm

Word = Union[FreeProductWord, CrossedElement]


def _is_free_product(*texts: str) -> bool:
    """Los tokens U* indican producto libre; si no, elemento cruzado"""
    return any(token.startswith("U") for text in texts for token in text.split())


def _parse(text: str, free_product: bool, n: Optional[int]) -> Word:
    if free_product:
        return WordService.parse_fp(text, n)
    return WordService.parse_cp(text, None if n is None else n - 1)


def _arity(word: Word) -> int:
    return word.n if isinstance(word, FreeProductWord) else word.m + 1


def _format(word: Word) -> str:
    if isinstance(word, FreeProductWord):
        return WordService.format_fp(word)
    return WordService.format_cp(word)


def _describe(word: Word) -> dict:
    kind = "free_product" if isinstance(word, FreeProductWord) else "crossed"
    return {"kind": kind, "n": _arity(word), "text": _format(word), "word": word.model_dump(mode="json")}


@click.group("word")
def word():
    """Cálculo de palabras: producto libre (U1 U2 ...) y producto cruzado (V W1^-1 ...)"""


@word.command("multiply")
@click.argument("left")
@click.argument("right")
@click.option("--n", type=click.IntRange(min=1), default=None, help="Número de generadores Ui")
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def multiply(ctx: click.Context, left: str, right: str, n: Optional[int], out: str):
    """Producto reducido de dos palabras del mismo tipo"""
    def body(config):
        free_product = _is_free_product(left, right)
        arity = n
        if arity is None:
            arity = max(_arity(_parse(left, free_product, None)), _arity(_parse(right, free_product, None)))
        a = _parse(left, free_product, arity)
        b = _parse(right, free_product, arity)
        if free_product:
            product: Word = WordService.fp_multiply(a, b)
        else:
            product = WordService.cp_multiply(a, b)
        payload = {"left": _describe(a), "right": _describe(b), "result": _describe(product)}
        return payload, {"parsed": True, "validated": True}, {}

    run_command(ctx, "word multiply", {"left": left, "right": right, "n": n}, [], body, out)


@word.command("iso")
@click.argument("text")
@click.option("--n", type=click.IntRange(min=1), default=None, help="Número de generadores Ui")
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def iso(ctx: click.Context, text: str, n: Optional[int], out: str):
    """Imagen por el isomorfismo F_{n-1} ⋊ Z2 ≅ (Z2)^{*n} (la dirección se deduce de los tokens)"""
    def body(config):
        free_product = _is_free_product(text)
        source = _parse(text, free_product, n)
        if free_product:
            image: Word = WordService.iso_from_free_product(source)
            back: Word = WordService.iso_to_free_product(image)
        else:
            image = WordService.iso_to_free_product(source)
            back = WordService.iso_from_free_product(image)
        payload = {"source": _describe(source), "image": _describe(image)}
        return payload, {"parsed": True, "validated": True, "round_trip": back == source}, {}

    run_command(ctx, "word iso", {"text": text, "n": n}, [], body, out)


@word.command("eval")
@click.argument("text")
@click.option("-p", "--projection", "projections", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False), help="MatrixFile de Pi, en orden")
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def evaluate(ctx: click.Context, text: str, projections: List[str], out: str):
    """Evaluar una palabra sobre proyecciones concretas (Ui = 2Pi - I)"""
    def body(config):
        matrices = [MatrixIOService.load_matrix(path) for path in projections]
        free_product = _is_free_product(text)
        parsed = _parse(text, free_product, len(matrices))
        if free_product:
            result = WordService.evaluate_fp(parsed, matrices, config)
        else:
            result = WordService.evaluate_cp(parsed, matrices, config)
        unitarity = operator_norm(adjoint(result) @ result - identity(result.shape[0]))
        payload = {"word": _describe(parsed), "matrix": MatrixFile.from_array(result).model_dump()}
        flags = {"parsed": True, "validated": True, "unitary": unitarity <= config.tol_report}
        return payload, flags, {"unitarity": unitarity}

    run_command(ctx, "word eval", {"text": text, "projections": list(projections)}, projections, body, out)
