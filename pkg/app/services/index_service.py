# app/services/index_service.py

import numpy as np
import logging
from typing import Tuple

from app.config.tolerances import DEFAULT_K_MAX, DEFAULT_TOLERANCES, ROUNDING_THRESHOLD, ToleranceConfig
from app.schemas.index import FredholmModuleData, IndexCertificate, IndexRoute, ModuleAxiomsReport
from app.schemas.projection import ProjectionPair
from app.services.linalg_service import LinalgService
from app.services.projection_pair_service import ProjectionPairService
from app.utils.linalg import adjoint, block_diag, identity, matrix_power, operator_norm

logger = logging.getLogger(__name__)


def _rounded_route(k: int, value: float) -> IndexRoute:
    integer = int(round(value))
    residual = abs(value - integer)
    return IndexRoute(
        k=k,
        value=value,
        integer=integer,
        residual=residual,
        flagged=bool(residual > ROUNDING_THRESHOLD),
    )


class IndexService:
    """Índice de QP: P H -> Q H por rango, por trazas y por el módulo de Fredholm"""

    @staticmethod
    def restricted_operator(pair: ProjectionPair, config: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
        """
        Matriz de QP de ran P en ran Q.

        Returns:
            B_Q* · P · B_P, de forma (rank Q, rank P)
        """
        B_P = LinalgService.orthonormal_range_basis(pair.P, config)
        B_Q = LinalgService.orthonormal_range_basis(pair.Q, config)
        return adjoint(B_Q) @ pair.P @ B_P

    @staticmethod
    def kernel_dimensions(pair: ProjectionPair, config: ToleranceConfig = DEFAULT_TOLERANCES) -> Tuple[int, int]:
        """
        (dim ker M, dim ker M*) con M = restricted_operator(pair).

        ker M = ran P ∩ ker Q y ker M* = ker P ∩ ran Q, es decir (m10, m01).
        """
        M = IndexService.restricted_operator(pair, config)
        rank = LinalgService.rank_with_tol(M, config.tol_rank)
        rows, cols = M.shape
        return cols - rank, rows - rank

    @staticmethod
    def fredholm_index(pair: ProjectionPair, config: ToleranceConfig = DEFAULT_TOLERANCES) -> int:
        """dim ker M - dim ker M*"""
        kernel, cokernel = IndexService.kernel_dimensions(pair, config)
        return kernel - cokernel

    @staticmethod
    def index_via_trace(pair: ProjectionPair, k: int, config: ToleranceConfig = DEFAULT_TOLERANCES) -> IndexRoute:
        """tr D^{2k+1} redondeado al entero más cercano"""
        route = _rounded_route(k, ProjectionPairService.trace_odd_power(pair, k, config))
        if route.flagged:
            logger.warning(f"⚠️ Traza no entera (k={k}): {route.value:.6g}; ¿par corrupto?")
        return route

    # ========================================================================
    # MÓDULO DE FREDHOLM
    # ========================================================================

    @staticmethod
    def build_fredholm_module(pair: ProjectionPair, config: ToleranceConfig = DEFAULT_TOLERANCES) -> FredholmModuleData:
        """γ = diag(I, -I), F = antidiag(I, I), π(P1) = diag(P, Q), π(P2) = diag(Q, P)"""
        LinalgService.require_projection(pair.P, config)
        LinalgService.require_projection(pair.Q, config)
        n = pair.dim
        eye = identity(n)
        zero = np.zeros((n, n), dtype=np.complex128)
        return FredholmModuleData(
            big_dim=2 * n,
            gamma=block_diag(eye, -eye),
            F=np.block([[zero, eye], [eye, zero]]),
            piP1=block_diag(pair.P, pair.Q),
            piP2=block_diag(pair.Q, pair.P),
        )

    @staticmethod
    def _difference(mod: FredholmModuleData) -> np.ndarray:
        n = mod.big_dim // 2
        return mod.piP1[:n, :n] - mod.piP1[n:, n:]

    @staticmethod
    def check_module_axioms(mod: FredholmModuleData, config: ToleranceConfig = DEFAULT_TOLERANCES) -> ModuleAxiomsReport:
        """Axiomas del módulo y la identidad [F, π(P1)]² = -diag(D², D²)"""
        eye = identity(mod.big_dim)
        gamma, F = mod.gamma, mod.F

        def projection_residual(X: np.ndarray) -> float:
            return max(operator_norm(X @ X - X), operator_norm(X - adjoint(X)))

        commutator = F @ mod.piP1 - mod.piP1 @ F
        D2 = matrix_power(IndexService._difference(mod), 2)
        report = ModuleAxiomsReport(
            gamma_square=float(np.max(np.abs(gamma @ gamma - eye), initial=0.0)),
            f_square=float(np.max(np.abs(F @ F - eye), initial=0.0)),
            anticommutator=float(np.max(np.abs(gamma @ F + F @ gamma), initial=0.0)),
            pi_p1_projection=projection_residual(mod.piP1),
            pi_p2_projection=projection_residual(mod.piP2),
            commutator_identity=operator_norm(commutator @ commutator + block_diag(D2, D2)),
            passed=False,
        )
        passed = (
            report.gamma_square == 0.0
            and report.f_square == 0.0
            and report.anticommutator == 0.0
            and report.pi_p1_projection <= config.tol_report
            and report.pi_p2_projection <= config.tol_report
            and report.commutator_identity <= 1e-12 * max(1, mod.big_dim)
        )
        return report.model_copy(update={"passed": bool(passed)})

    @staticmethod
    def pairing_raw(mod: FredholmModuleData, k: int) -> complex:
        """tr γ·π(P1)·[F, π(P1)]^{2k+2} (sin el signo (-1)^{k+1})"""
        commutator = mod.F @ mod.piP1 - mod.piP1 @ mod.F
        value = complex(np.trace(mod.gamma @ mod.piP1 @ matrix_power(commutator, 2 * k + 2)))
        return value

    @staticmethod
    def connes_pairing(mod: FredholmModuleData, k: int, config: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
        """(-1)^{k+1}·tr γ·π(P1)·[F, π(P1)]^{2k+2}, que vale tr D^{2k+3}"""
        value = (-1) ** (k + 1) * IndexService.pairing_raw(mod, k)
        if abs(value.imag) > config.tol_report:
            logger.warning(f"⚠️ Parte imaginaria del emparejamiento (k={k}) = {value.imag:.3e}")
        return float(value.real)

    # ========================================================================
    # CERTIFICADO
    # ========================================================================

    @staticmethod
    def index_theorem_check(pair: ProjectionPair, k_max: int = DEFAULT_K_MAX,
                            config: ToleranceConfig = DEFAULT_TOLERANCES) -> IndexCertificate:
        """
        Las tres rutas del índice para k = 0..k_max.

        La ruta de trazas en k da tr D^{2k+1}; la del emparejamiento en k da tr D^{2k+3}.
        Por la rigidez de las trazas ambas se comparan contra el mismo entero.
        Un desacuerdo se reporta (agree=False), no se lanza.
        """
        kernel, cokernel = IndexService.kernel_dimensions(pair, config)
        index_by_rank = kernel - cokernel
        traces = [IndexService.index_via_trace(pair, k, config) for k in range(k_max + 1)]

        mod = IndexService.build_fredholm_module(pair, config)
        D = pair.P - pair.Q
        pairings = []
        for k in range(k_max + 1):
            route = _rounded_route(k, IndexService.connes_pairing(mod, k, config))
            target = float(np.trace(matrix_power(D, 2 * k + 3)).real)
            pairings.append(route.model_copy(update={
                "raw_value": float(IndexService.pairing_raw(mod, k).real),
                "identity_residual": abs(route.value - target),
            }))

        integers = {index_by_rank} | {r.integer for r in traces} | {r.integer for r in pairings}
        agree = len(integers) == 1 and all(r.residual <= ROUNDING_THRESHOLD for r in traces + pairings)
        if agree:
            logger.info(f"✅ Índice {index_by_rank} confirmado por las tres rutas (k <= {k_max})")
        else:
            logger.warning(f"⚠️ Rutas del índice en desacuerdo: {sorted(integers)}")

        return IndexCertificate(
            index_by_rank=index_by_rank,
            kernel_dim=kernel,
            cokernel_dim=cokernel,
            index_by_trace=traces,
            index_by_pairing=pairings,
            agree=bool(agree),
        )
