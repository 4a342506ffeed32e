# app/cli/commands/decompose.py

import click

from app.cli.common import load_pair_matrices, run_command
from app.services.projection_pair_service import ProjectionPairService

matrix_path = click.Path(exists=True, dir_okay=False)


@click.command("decompose")
@click.argument("path_p", type=matrix_path)
@click.argument("path_q", type=matrix_path)
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def decompose(ctx: click.Context, path_p: str, path_q: str, out: str):
    """
    Descomposición de Halmos de un par (P, Q).

    Exit 0 si el residuo de verificación es <= tol_report.
    """
    def body(config):
        P, Q = load_pair_matrices(path_p, path_q)
        pair = ProjectionPairService.make_pair(P, Q, config)
        spectrum = ProjectionPairService.difference_spectrum(pair, config)
        dec = ProjectionPairService.halmos_decompose(pair, config)
        residual = ProjectionPairService.verify_decomposition(pair, dec)
        payload = {
            "decomposition": dec.model_dump(mode="json"),
            "principal_angles": dec.principal_angles,
            "spectrum": spectrum.model_dump(mode="json"),
        }
        flags = {"parsed": True, "validated": True, "decomposition_verified": residual <= config.tol_report}
        residuals = {"verification": residual, "spectrum_pairing": spectrum.residual}
        return payload, flags, residuals

    run_command(ctx, "decompose", {"P": path_p, "Q": path_q}, [path_p, path_q], body, out)
