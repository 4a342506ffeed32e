# app/cli/commands/sweep.py

import click
import logging
from joblib import Parallel, delayed
from typing import List, Tuple

from app.cli.common import run_command
from app.config.tolerances import DEFAULT_K_MAX, ToleranceConfig
from app.schemas.report import CheckReport
from app.services.invariant_service import InvariantService

logger = logging.getLogger(__name__)

WORD_ARITIES = (2, 3, 5)


def _corpus_job(seed: int, k_max: int, config: ToleranceConfig, max_corner: int, max_points: int) -> Tuple[str, CheckReport]:
    report = InvariantService.corpus_instance(seed, k_max, config, max_corner=max_corner, max_points=max_points)
    return f"corpus/{seed}", report


def _random_pair_job(seed: int, max_dim: int, config: ToleranceConfig) -> Tuple[str, CheckReport]:
    return f"random_pair/{seed}", InvariantService.random_pair_instance(seed, max_dim, config)


def _word_job(n: int, count: int, seed: int) -> Tuple[str, CheckReport]:
    return f"words/n={n}", InvariantService.word_suite(n, count, seed)


@click.command("sweep")
@click.option("--count", type=click.IntRange(min=1), default=200, show_default=True, help="Instancias del corpus")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Procesos de joblib (-1 = todos)")
@click.option("--k-max", type=click.IntRange(min=0), default=DEFAULT_K_MAX, show_default=True)
@click.option("--max-corner", type=click.IntRange(min=0), default=5, show_default=True)
@click.option("--max-points", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--max-dim", type=click.IntRange(min=1), default=40, show_default=True,
              help="Dimensión máxima de los pares totalmente aleatorios")
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def sweep(ctx: click.Context, count: int, seed: int, jobs: int, k_max: int, max_corner: int,
          max_points: int, max_dim: int, out: str):
    """Corpus sembrado de propiedades: índice, emparejamiento, espectro, ida y vuelta, isomorfismo"""
    def body(config):
        tasks = [delayed(_corpus_job)(seed + i, k_max, config, max_corner, max_points) for i in range(count)]
        tasks += [delayed(_random_pair_job)(seed + i, max_dim, config) for i in range(max(count // 2, 1))]
        tasks += [delayed(_word_job)(n, 5 * count, seed + n) for n in WORD_ARITIES]
        labelled: List[Tuple[str, CheckReport]] = Parallel(n_jobs=jobs)(tasks)

        summary = InvariantService.summarize(labelled)
        failed = len(summary["failures"])
        if failed:
            logger.warning(f"⚠️ Sweep con {failed} fallos en {summary['instances']} instancias")
        else:
            logger.info(f"✅ Sweep limpio: {summary['instances']} instancias")
        residuals = {name: entry["max_residual"] for name, entry in summary["checks"].items()}
        return summary, {"parsed": True, "validated": True, "no_failures": failed == 0}, residuals

    arguments = {"count": count, "seed": seed, "jobs": jobs, "k_max": k_max, "max_corner": max_corner,
                 "max_points": max_points, "max_dim": max_dim}
    run_command(ctx, "sweep", arguments, [], body, out)
