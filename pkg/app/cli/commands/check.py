# app/cli/commands/check.py

import click

from app.cli.common import load_pair_matrices, run_command
from app.config.tolerances import DEFAULT_K_MAX
from app.services.invariant_service import InvariantService
from app.services.projection_pair_service import ProjectionPairService

matrix_path = click.Path(exists=True, dir_okay=False)


@click.command("check")
@click.argument("path_p", type=matrix_path)
@click.argument("path_q", type=matrix_path)
@click.option("--k-max", type=click.IntRange(min=0), default=DEFAULT_K_MAX, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def check(ctx: click.Context, path_p: str, path_q: str, k_max: int, out: str):
    """Batería completa de invariantes sobre un par"""
    def body(config):
        P, Q = load_pair_matrices(path_p, path_q)
        report = InvariantService.full_check(P, Q, k_max, config)
        validated = all(item.passed for item in report.items if item.name.startswith("projection_"))
        flags = {"parsed": True, "validated": validated}
        flags.update({item.name: item.passed for item in report.items})
        residuals = {item.name: item.residual for item in report.items if item.residual is not None}
        return {"checks": [item.model_dump() for item in report.items]}, flags, residuals

    run_command(ctx, "check", {"P": path_p, "Q": path_q, "k_max": k_max}, [path_p, path_q], body, out)


@click.command("trace-powers")
@click.argument("path_p", type=matrix_path)
@click.argument("path_q", type=matrix_path)
@click.option("--k-max", type=click.IntRange(min=0), default=4, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def trace_powers(ctx: click.Context, path_p: str, path_q: str, k_max: int, out: str):
    """tr (P-Q)^{2k+1} para k = 0..k_max y su estabilidad en k"""
    def body(config):
        P, Q = load_pair_matrices(path_p, path_q)
        pair = ProjectionPairService.make_pair(P, Q, config)
        stability = ProjectionPairService.trace_stability_check(pair, k_max, config)
        payload = {
            "powers": [2 * k + 1 for k in range(k_max + 1)],
            "stability": stability.model_dump(mode="json"),
        }
        flags = {"parsed": True, "validated": True, "stable": stability.passed}
        return payload, flags, {"max_deviation": stability.max_deviation}

    run_command(ctx, "trace-powers", {"P": path_p, "Q": path_q, "k_max": k_max}, [path_p, path_q], body, out)
