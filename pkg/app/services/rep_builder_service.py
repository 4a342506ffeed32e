# app/services/rep_builder_service.py

import math
import numpy as np
import logging
from typing import List

from app.config.tolerances import DEFAULT_TOLERANCES, ToleranceConfig
from app.schemas.projection import HalmosDecomposition, ProjectionPair
from app.schemas.rep import BuiltRepresentation, BuiltVerification, RepPoint, RepSpec, SectorBlock
from app.services.linalg_service import LinalgService
from app.services.projection_pair_service import ProjectionPairService, canonical_cell, corner_blocks
from app.utils.linalg import adjoint, block_diag, hermitian_part, identity, operator_norm
from app.utils.rng import make_generator

logger = logging.getLogger(__name__)


class RepBuilderService:
    """Representaciones de dimensión finita del par universal a partir de sus sectores"""

    @staticmethod
    def build_representation(spec: RepSpec) -> BuiltRepresentation:
        """
        Ensamblar P1, P2 y V por bloques.

        Sectores atómicos como bloques 1x1 en el orden (1,1), (0,0), (1,0), (0,1);
        cada punto (θ, mult) aporta mult celdas P1 = ½[[1,1],[1,1]],
        P2 = ½[[1, e^{iθ}], [e^{-iθ}, 1]]. V = 2P1 - I en todo el espacio.
        """
        layout: List[SectorBlock] = []
        offset = 0
        for sector, count in (("11", spec.m11), ("00", spec.m00), ("10", spec.m10), ("01", spec.m01)):
            for _ in range(count):
                layout.append(SectorBlock(sector=sector, start=offset, size=1))
                offset += 1

        P1_corner, P2_corner = corner_blocks(spec.m11, spec.m00, spec.m10, spec.m01)
        P1_blocks, P2_blocks = [P1_corner], [P2_corner]
        for point in spec.points:
            cell_p1, cell_p2 = canonical_cell(point.theta)
            for _ in range(point.mult):
                P1_blocks.append(cell_p1)
                P2_blocks.append(cell_p2)
                layout.append(SectorBlock(sector="cell", start=offset, size=2, theta=point.theta))
                offset += 2

        P1 = block_diag(*P1_blocks)
        P2 = block_diag(*P2_blocks)
        V = 2 * P1 - identity(spec.dimension)
        logger.info(f"✅ Representación construida: dim={spec.dimension}, celdas={sum(p.mult for p in spec.points)}")
        return BuiltRepresentation(P1=P1, P2=P2, V=V, spec=spec, sector_layout=layout)

    @staticmethod
    def verify_built(rep: BuiltRepresentation, config: ToleranceConfig = DEFAULT_TOLERANCES) -> BuiltVerification:
        """Chequeos de construcción: proyecciones, V = 2P1 - I, V·W·V = W⁻¹, conjugación por celda"""
        n = rep.spec.dimension
        eye = identity(n)
        p1 = LinalgService.validate_projection(rep.P1, config.tol_validate)
        p2 = LinalgService.validate_projection(rep.P2, config.tol_validate)
        W = rep.V @ (2 * rep.P2 - eye)

        cell_conjugation = 0.0
        atomic_exact = True
        for block in rep.sector_layout:
            window = slice(block.start, block.start + block.size)
            V_cell = rep.V[window, window]
            if block.sector == "cell":
                z = np.exp(1j * block.theta)
                M_z = np.diag([z, np.conj(z)])
                M_zbar = np.diag([np.conj(z), z])
                cell_conjugation = max(cell_conjugation, operator_norm(V_cell @ M_z @ V_cell - M_zbar))
            else:
                value = (rep.P1 - rep.P2)[block.start, block.start]
                atomic_exact = atomic_exact and value in (-1, 0, 1)

        report = BuiltVerification(
            p1_projection=max(p1.algebraic_residual, p1.selfadjoint_residual),
            p2_projection=max(p2.algebraic_residual, p2.selfadjoint_residual),
            v_is_symmetry_of_p1=operator_norm(rep.V - (2 * rep.P1 - eye)),
            crossed_relation=operator_norm(rep.V @ W @ rep.V - adjoint(W)),
            w_unitary=operator_norm(adjoint(W) @ W - eye),
            cell_conjugation=cell_conjugation,
            atomic_spectrum_exact=bool(atomic_exact),
            passed=False,
        )
        passed = (
            p1.passed and p2.passed
            and report.v_is_symmetry_of_p1 == 0.0
            and report.crossed_relation <= 1e-12 * max(1, n)
            and report.w_unitary <= 1e-12 * max(1, n)
            and report.cell_conjugation <= 1e-12
            and report.atomic_spectrum_exact
        )
        return report.model_copy(update={"passed": bool(passed)})

    @staticmethod
    def random_pair_from_spec(spec: RepSpec, seed: int, config: ToleranceConfig = DEFAULT_TOLERANCES) -> ProjectionPair:
        """(U*·P1·U, U*·P2·U) con U unitaria aleatoria sembrada"""
        rep = RepBuilderService.build_representation(spec)
        U = LinalgService.random_unitary(spec.dimension, seed)
        P = hermitian_part(adjoint(U) @ rep.P1 @ U)
        Q = hermitian_part(adjoint(U) @ rep.P2 @ U)
        return ProjectionPairService.make_pair(P, Q, config)

    @staticmethod
    def spec_of_decomposition(dec: HalmosDecomposition, config: ToleranceConfig = DEFAULT_TOLERANCES) -> RepSpec:
        """Copiar esquinas y fusionar ángulos iguales (dentro de tol_cluster) en puntos"""
        groups: List[List[float]] = []
        for theta in sorted(dec.angles):
            if groups and abs(theta - groups[-1][-1]) <= config.tol_cluster:
                groups[-1].append(theta)
            else:
                groups.append([theta])
        points = tuple(RepPoint(theta=float(np.mean(group)), mult=len(group)) for group in groups)
        return RepSpec(m11=dec.m11, m00=dec.m00, m10=dec.m10, m01=dec.m01, points=points)

    @staticmethod
    def random_spec(seed: int, max_corner: int = 5, max_points: int = 10, max_mult: int = 2,
                    min_separation: float = 1e-3, margin: float = 0.05) -> RepSpec:
        """
        Spec aleatoria sembrada para corpus de propiedades.

        Los θ quedan en [margin, π - margin] y separados al menos min_separation.
        """
        rng = make_generator(seed)
        corners = [int(x) for x in rng.integers(0, max_corner + 1, size=4)]
        count = int(rng.integers(0, max_points + 1))
        thetas: List[float] = []
        attempts = 0
        while len(thetas) < count and attempts < 100 * (count + 1):
            attempts += 1
            candidate = float(rng.uniform(margin, math.pi - margin))
            if all(abs(candidate - t) >= min_separation for t in thetas):
                thetas.append(candidate)
        points = tuple(
            RepPoint(theta=t, mult=int(rng.integers(1, max_mult + 1))) for t in sorted(thetas)
        )
        if sum(corners) == 0 and not points:
            corners[0] = 1
        return RepSpec(m11=corners[0], m00=corners[1], m10=corners[2], m01=corners[3], points=points)
