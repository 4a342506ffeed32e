# app/cli/commands/index.py

import click

from app.cli.common import load_pair_matrices, run_command
from app.config.tolerances import DEFAULT_K_MAX
from app.services.index_service import IndexService
from app.services.projection_pair_service import ProjectionPairService

matrix_path = click.Path(exists=True, dir_okay=False)


@click.command("index")
@click.argument("path_p", type=matrix_path)
@click.argument("path_q", type=matrix_path)
@click.option("--k-max", type=click.IntRange(min=0), default=DEFAULT_K_MAX, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def index(ctx: click.Context, path_p: str, path_q: str, k_max: int, out: str):
    """Índice de QP por rango, por trazas impares y por el emparejamiento de Fredholm"""
    def body(config):
        P, Q = load_pair_matrices(path_p, path_q)
        pair = ProjectionPairService.make_pair(P, Q, config)
        certificate = IndexService.index_theorem_check(pair, k_max, config)
        routes = certificate.index_by_trace + certificate.index_by_pairing
        residuals = {
            "max_rounding": max(r.residual for r in routes),
            "max_pairing_identity": max(r.identity_residual for r in certificate.index_by_pairing),
        }
        payload = {"certificate": certificate.model_dump(mode="json")}
        return payload, {"parsed": True, "validated": True, "agree": certificate.agree}, residuals

    run_command(ctx, "index", {"P": path_p, "Q": path_q, "k_max": k_max}, [path_p, path_q], body, out)
