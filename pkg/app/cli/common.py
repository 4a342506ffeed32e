# app/cli/common.py

import click
import logging
from pydantic import ValidationError
from typing import Any, Callable, Dict, Iterable, Optional, Tuple

from app.config.tolerances import ToleranceConfig
from app.schemas.report import Report
from app.schemas.rep import RepPoint, RepSpec
from app.services.matrix_io_service import MatrixIOService
from app.utils.exceptions import MatrixParseError, ProjCalcError

logger = logging.getLogger(__name__)

# (payload, flags, residuals)
CommandResult = Tuple[Dict[str, Any], Dict[str, bool], Dict[str, float]]


def _error_flags(error: ProjCalcError) -> Dict[str, bool]:
    if error.exit_code == 2:
        return {"parsed": False}
    if error.exit_code == 3:
        return {"parsed": True, "validated": False}
    return {"parsed": True, "validated": True, "computed": False}


def run_command(
    ctx: click.Context,
    command: str,
    arguments: Dict[str, Any],
    inputs: Iterable[str],
    body: Callable[[ToleranceConfig], CommandResult],
    out: Optional[str] = None,
) -> None:
    """
    Ejecutar el cuerpo de un comando y emitir su Report.

    Las excepciones del dominio se convierten en un Report de error; el código
    de salida es siempre función de los flags del Report.
    """
    config: ToleranceConfig = ctx.obj
    inputs = list(inputs)
    try:
        digests = {path: MatrixIOService.file_digest(path) for path in inputs}
    except OSError as e:
        digests = {}
        error: Optional[ProjCalcError] = MatrixParseError(str(e))
    else:
        error = None

    payload: Dict[str, Any] = {}
    flags: Dict[str, bool] = {}
    residuals: Dict[str, float] = {}
    if error is None:
        try:
            payload, flags, residuals = body(config)
        except ProjCalcError as e:
            error = e
        except ValidationError as e:
            error = MatrixParseError(f"Documento inválido: {e}")

    if error is not None:
        logger.error(f"❌ {command}: {type(error).__name__}: {error}")
        flags = _error_flags(error)

    report = Report(
        command=command,
        arguments=arguments,
        inputs=digests,
        tolerances=config,
        payload=payload,
        flags=flags,
        residuals=residuals,
        error=None if error is None else f"{type(error).__name__}: {error}",
    )
    document = report.to_document()
    click.echo(MatrixIOService.dumps(document), nl=False)
    if out:
        MatrixIOService.write_json(out, document)
    ctx.exit(report.exit_code)


def load_pair_matrices(path_p: str, path_q: str):
    return MatrixIOService.load_matrix(path_p), MatrixIOService.load_matrix(path_q)


def parse_point(text: str) -> RepPoint:
    """THETA:MULT (MULT opcional, por defecto 1)"""
    theta, _, mult = text.partition(":")
    try:
        return RepPoint(theta=float(theta), mult=int(mult) if mult else 1)
    except ValueError as e:
        raise MatrixParseError(f"Punto inválido {text!r}: use THETA[:MULT]") from e


def spec_from_options(spec_path: Optional[str], m11: int, m00: int, m10: int, m01: int,
                      points: Iterable[str]) -> RepSpec:
    """Spec desde archivo JSON o desde flags en línea"""
    if spec_path:
        return MatrixIOService.load_spec(spec_path)
    parsed = sorted((parse_point(p) for p in points), key=lambda p: p.theta)
    return RepSpec(m11=m11, m00=m00, m10=m10, m01=m01, points=tuple(parsed))


def spec_options(function):
    """Opciones compartidas para describir una RepSpec en línea"""
    options = [
        click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False), help="RepSpec JSON"),
        click.option("--m11", type=int, default=0, show_default=True),
        click.option("--m00", type=int, default=0, show_default=True),
        click.option("--m10", type=int, default=0, show_default=True),
        click.option("--m01", type=int, default=0, show_default=True),
        click.option("--point", "points", multiple=True, help="THETA[:MULT], repetible"),
    ]
    for option in reversed(options):
        function = option(function)
    return function
