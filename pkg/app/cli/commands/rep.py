# app/cli/commands/rep.py

import click
from typing import Optional, Tuple

from app.cli.common import spec_from_options, spec_options, run_command
from app.config.tolerances import REPORT_SCHEMA
from app.schemas.matrix import MatrixFile
from app.services.matrix_io_service import MatrixIOService
from app.services.rep_builder_service import RepBuilderService


@click.command("build-rep")
@spec_options
@click.option("--out-prefix", default=None, help="Escribe {prefix}P1.json, {prefix}P2.json, {prefix}V.json")
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def build_rep(ctx: click.Context, spec_path: Optional[str], m11: int, m00: int, m10: int, m01: int,
              points: Tuple[str, ...], out_prefix: Optional[str], out: str):
    """Construir P1, P2 y V desde los datos de sectores y verificar las relaciones"""
    def body(config):
        spec = spec_from_options(spec_path, m11, m00, m10, m01, points)
        rep = RepBuilderService.build_representation(spec)
        verification = RepBuilderService.verify_built(rep, config)
        matrices = {"P1": rep.P1, "P2": rep.P2, "V": rep.V}
        if out_prefix is not None:
            for name, M in matrices.items():
                MatrixIOService.save_matrix(f"{out_prefix}{name}.json", M)
        payload = {
            "spec": spec.model_dump(mode="json"),
            "dimension": spec.dimension,
            "expected_index": spec.expected_index,
            "sector_layout": [block.model_dump() for block in rep.sector_layout],
            "matrices": {name: MatrixFile.from_array(M).model_dump() for name, M in matrices.items()},
            "verification": verification.model_dump(),
        }
        residuals = {
            "p1_projection": verification.p1_projection,
            "p2_projection": verification.p2_projection,
            "crossed_relation": verification.crossed_relation,
            "w_unitary": verification.w_unitary,
            "cell_conjugation": verification.cell_conjugation,
        }
        return payload, {"parsed": True, "validated": True, "verified": verification.passed}, residuals

    arguments = {"spec": spec_path, "m11": m11, "m00": m00, "m10": m10, "m01": m01,
                 "points": list(points), "out_prefix": out_prefix}
    run_command(ctx, "build-rep", arguments, [spec_path] if spec_path else [], body, out)


@click.command("gen")
@spec_options
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--out-prefix", default="", help="Prefijo de P.json, Q.json y truth.json")
@click.option("--out", type=click.Path(dir_okay=False), help="Copia del Report en archivo")
@click.pass_context
def gen(ctx: click.Context, spec_path: Optional[str], m11: int, m00: int, m10: int, m01: int,
        points: Tuple[str, ...], seed: int, out_prefix: str, out: str):
    """
    Generar un par (U*P1U, U*P2U) con verdad de terreno conocida.

    Sin spec ni flags de sectores se usa una spec aleatoria sembrada con --seed.
    """
    def body(config):
        if spec_path or points or any((m11, m00, m10, m01)):
            spec = spec_from_options(spec_path, m11, m00, m10, m01, points)
        else:
            spec = RepBuilderService.random_spec(seed)
        pair = RepBuilderService.random_pair_from_spec(spec, seed, config)
        truth = {
            "schema": REPORT_SCHEMA,
            "spec": spec.model_dump(mode="json"),
            "seed": seed,
            "expected_index": spec.expected_index,
            "difference_eigenvalues": spec.difference_eigenvalues,
        }
        paths = {name: f"{out_prefix}{name}.json" for name in ("P", "Q", "truth")}
        MatrixIOService.save_matrix(paths["P"], pair.P)
        MatrixIOService.save_matrix(paths["Q"], pair.Q)
        MatrixIOService.write_json(paths["truth"], truth)
        return {"files": paths, "truth": truth}, {"parsed": True, "validated": True}, {}

    arguments = {"spec": spec_path, "m11": m11, "m00": m00, "m10": m10, "m01": m01,
                 "points": list(points), "seed": seed, "out_prefix": out_prefix}
    run_command(ctx, "gen", arguments, [spec_path] if spec_path else [], body, out)
