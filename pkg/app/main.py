# app/main.py

import click
import logging
from pydantic import ValidationError

from app.cli.commands.check import check, trace_powers
from app.cli.commands.decompose import decompose
from app.cli.commands.index import index
from app.cli.commands.rep import build_rep, gen
from app.cli.commands.sweep import sweep
from app.cli.commands.word import word
from app.config.tolerances import DEFAULT_TOLERANCES, ToleranceConfig

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


@click.group()
@click.option("--tol-validate", type=float, default=DEFAULT_TOLERANCES.tol_validate, show_default=True,
              help="Tolerancia para aceptar una matriz como proyección")
@click.option("--tol-cluster", type=float, default=DEFAULT_TOLERANCES.tol_cluster, show_default=True,
              help="Tolerancia para agrupar autovalores")
@click.option("--tol-rank", type=float, default=DEFAULT_TOLERANCES.tol_rank, show_default=True,
              help="Umbral relativo de rango numérico")
@click.option("--tol-report", type=float, default=DEFAULT_TOLERANCES.tol_report, show_default=True,
              help="Umbral de los residuos reportados")
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default="WARNING",
              show_default=True)
@click.version_option("1.0.1", prog_name="projcalc")
@click.pass_context
def cli(ctx: click.Context, tol_validate: float, tol_cluster: float, tol_rank: float, tol_report: float,
        log_level: str):
    """Calculadora de pares de proyecciones: Halmos, índice de Fredholm y cálculo de palabras"""
    # Configurar logging (stderr; stdout queda para el Report JSON)
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        force=True,
    )
    try:
        ctx.obj = ToleranceConfig(
            tol_validate=tol_validate,
            tol_cluster=tol_cluster,
            tol_rank=tol_rank,
            tol_report=tol_report,
        )
    except ValidationError as e:
        raise click.BadParameter(str(e), ctx=ctx, param_hint="--tol-*") from e
    logger.debug(f"Tolerancias: {ctx.obj.model_dump()}")


cli.add_command(decompose)
cli.add_command(index)
cli.add_command(word)
cli.add_command(build_rep)
cli.add_command(gen)
cli.add_command(check)
cli.add_command(trace_powers)
cli.add_command(sweep)


if __name__ == "__main__":
    cli()
