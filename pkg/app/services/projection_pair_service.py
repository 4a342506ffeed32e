# app/services/projection_pair_service.py

import math
import numpy as np
import logging
from typing import List, Tuple

from app.config.tolerances import DEFAULT_TOLERANCES, ToleranceConfig
from app.schemas.projection import (
    HalmosDecomposition, ProjectionPair, SpectrumReport, TraceStabilityReport,
)
from app.services.linalg_service import LinalgService
from app.utils.exceptions import DegenerateAngle, InconsistentDims, PairingFailure
from app.utils.linalg import (
    adjoint, as_dense, block_diag, fix_column_phases, hermitian_part, identity, matrix_power,
    operator_norm, phase_of_largest, stack_columns,
)

logger = logging.getLogger(__name__)


def canonical_cell(theta: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Celda genérica 2x2 de ángulo θ.

    Returns:
        (P, Q) con P = ½[[1,1],[1,1]] y Q = ½[[1, e^{iθ}], [e^{-iθ}, 1]]
    """
    z = np.exp(1j * theta)
    P = 0.5 * np.array([[1, 1], [1, 1]], dtype=np.complex128)
    Q = 0.5 * np.array([[1, z], [np.conj(z), 1]], dtype=np.complex128)
    return P, Q


def corner_blocks(m11: int, m00: int, m10: int, m01: int) -> Tuple[np.ndarray, np.ndarray]:
    """Bloques diagonales de las esquinas en el orden (1,1), (0,0), (1,0), (0,1)"""
    p_diag = [1.0] * m11 + [0.0] * m00 + [1.0] * m10 + [0.0] * m01
    q_diag = [1.0] * m11 + [0.0] * m00 + [0.0] * m10 + [1.0] * m01
    return (
        np.diag(np.array(p_diag, dtype=np.complex128)),
        np.diag(np.array(q_diag, dtype=np.complex128)),
    )


def corner_offset(value: float, corners: Tuple[float, ...]) -> float:
    """Distancia de un autovalor a la esquina más cercana"""
    return min(abs(value - corner) for corner in corners)


class ProjectionPairService:
    """Teorema de estructura para un par de proyecciones"""

    @staticmethod
    def noise_floor(n: int, config: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
        """Holgura por encima de la cual una esquina se reporta como casi degenerada"""
        return max(config.tol_validate, 100 * np.finfo(float).eps * max(n, 1))

    # ========================================================================
    # CONSTRUCCIÓN / CORRESPONDENCIA PROYECCIÓN <-> SIMETRÍA
    # ========================================================================

    @staticmethod
    def make_pair(P, Q, config: ToleranceConfig = DEFAULT_TOLERANCES) -> ProjectionPair:
        """
        Construir un par validado.

        Raises:
            InconsistentDims: Si las formas no coinciden
            ValidationFailed: Si P o Q no es proyección a tol_validate
        """
        pair = ProjectionPair(P=P, Q=Q)
        LinalgService.require_projection(pair.P, config)
        LinalgService.require_projection(pair.Q, config)
        return pair

    @staticmethod
    def symmetry_of(P: np.ndarray, config: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
        """P ↦ 2P - I"""
        LinalgService.require_projection(P, config)
        return as_dense(2 * np.asarray(P) - identity(P.shape[0]))

    @staticmethod
    def projection_of(U: np.ndarray, config: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
        """U ↦ (U + I)/2"""
        LinalgService.require_symmetry(U, config)
        return as_dense((np.asarray(U) + identity(U.shape[0])) / 2)

    # ========================================================================
    # ESPECTRO DE D = P - Q
    # ========================================================================

    @staticmethod
    def _classify(eigenvalues: List[float], tol: float):
        """Separar índices en +1, -1, 0 e interiores positivos/negativos"""
        plus, minus, zero, positive, negative = [], [], [], [], []
        for j, value in enumerate(eigenvalues):
            if abs(value - 1.0) <= tol:
                plus.append(j)
            elif abs(value + 1.0) <= tol:
                minus.append(j)
            elif abs(value) <= tol:
                zero.append(j)
            elif value > 0:
                positive.append(j)
            else:
                negative.append(j)
        return plus, minus, zero, positive, negative

    @staticmethod
    def _match_pairs(eigenvalues: List[float], positive: List[int], negative: List[int], tol: float) -> List[Tuple[float, float]]:
        """Emparejar +λ con -λ por valor absoluto ordenado"""
        if len(positive) != len(negative):
            raise PairingFailure(
                f"{len(positive)} autovalores interiores positivos frente a {len(negative)} negativos"
            )
        plus_sorted = sorted(eigenvalues[j] for j in positive)
        minus_sorted = sorted(-eigenvalues[j] for j in negative)
        pairs = []
        for lam_plus, lam_minus in zip(plus_sorted, minus_sorted):
            if abs(lam_plus - lam_minus) > tol:
                raise PairingFailure(f"No se emparejan +{lam_plus:.12g} y -{lam_minus:.12g}")
            pairs.append((lam_plus, lam_minus))
        return pairs

    @staticmethod
    def difference_spectrum(pair: ProjectionPair, config: ToleranceConfig = DEFAULT_TOLERANCES) -> SpectrumReport:
        """
        Agrupar el espectro de D = P - Q.

        Los autovalores se asignan a +1, -1, 0 (dentro de tol_cluster) y el resto
        se empareja como ±λ; pares con λ iguales (dentro de tol_cluster) se agrupan
        con multiplicidad.

        Raises:
            PairingFailure: Si los interiores no forman pares ±λ
        """
        tol = config.tol_cluster
        eig = LinalgService.hermitian_eigendecompose(hermitian_part(pair.P - pair.Q), config)
        values = eig.eigenvalues
        plus, minus, zero, positive, negative = ProjectionPairService._classify(values, tol)
        pairs = ProjectionPairService._match_pairs(values, positive, negative, tol)

        residual = 0.0
        for j in plus:
            residual = max(residual, abs(values[j] - 1.0))
        for j in minus:
            residual = max(residual, abs(values[j] + 1.0))
        for j in zero:
            residual = max(residual, abs(values[j]))

        grouped: List[List[float]] = []
        for lam_plus, lam_minus in pairs:
            residual = max(residual, abs(lam_plus - lam_minus) / 2)
            center = (lam_plus + lam_minus) / 2
            if grouped and abs(center - grouped[-1][0]) <= tol:
                grouped[-1][1] += 1
            else:
                grouped.append([center, 1])

        return SpectrumReport(
            plus_ones=len(plus),
            minus_ones=len(minus),
            zeros=len(zero),
            paired=[(float(lam), int(mult)) for lam, mult in grouped],
            residual=float(residual),
        )

    # ========================================================================
    # DESCOMPOSICIÓN
    # ========================================================================

    @staticmethod
    def halmos_decompose(pair: ProjectionPair, config: ToleranceConfig = DEFAULT_TOLERANCES) -> HalmosDecomposition:
        """
        Descomposición de Halmos de (P, Q).

        Esquinas: +1 de D ↦ m10, -1 ↦ m01, y ker D separado por P+Q (2 ↦ m11, 0 ↦ m00).
        Cada autovector v de D con autovalor λ en (0, 1) abre una celda: C = P + Q - I
        anticonmuta con D y C² = I - D², así que Cv/‖Cv‖ es su compañero de -λ.
        En la base resultante cada celda es exactamente la celda canónica de θ = 2·arcsin(λ).

        Raises:
            PairingFailure: Interiores sin pareja ±λ
            DegenerateAngle: Vector de ker D que no se clasifica como esquina
        """
        tol = config.tol_cluster
        n = pair.dim
        P, Q = pair.P, pair.Q
        # el par ya está validado: la asimetría residual de P y Q se descarta
        D = hermitian_part(P - Q)
        S = hermitian_part(P + Q)
        C = S - identity(n)

        eig = LinalgService.hermitian_eigendecompose(D, config)
        values, vectors = eig.eigenvalues, eig.eigenvectors
        plus, minus, zero, positive, negative = ProjectionPairService._classify(values, tol)
        ProjectionPairService._match_pairs(values, positive, negative, tol)

        floor = ProjectionPairService.noise_floor(n, config)
        near_degenerate = [
            float(values[j]) for j in plus + minus + zero
            if corner_offset(values[j], (1.0, -1.0, 0.0)) > floor
        ]

        # ker D = (ran P ∩ ran Q) ⊕ (ker P ∩ ker Q): separar con P + Q
        kernel = stack_columns([vectors[:, j] for j in zero], n)
        ones, nulls = [], []
        if kernel.shape[1]:
            sub = LinalgService.hermitian_eigendecompose(adjoint(kernel) @ S @ kernel, config)
            for j, value in enumerate(sub.eigenvalues):
                column = kernel @ sub.eigenvectors[:, j]
                if abs(value - 2.0) <= tol:
                    ones.append(column)
                elif abs(value) <= tol:
                    nulls.append(column)
                else:
                    raise DegenerateAngle(
                        f"Vector de ker(P-Q) con P+Q = {value:.6g}: no es esquina (1,1) ni (0,0)"
                    )
                if corner_offset(value, (2.0, 0.0)) > floor:
                    # celda oculta con 1 ± cos(θ/2) = value, es decir λ = sin(θ/2)
                    near_degenerate.append(float(math.sqrt(max(value * (2.0 - value), 0.0))))

        columns = ones + nulls + [vectors[:, j] for j in plus] + [vectors[:, j] for j in minus]
        corner_basis = fix_column_phases(stack_columns(columns, n))

        angles, cell_columns = [], []
        for j in positive:
            lam = values[j]
            v_plus = vectors[:, j] / phase_of_largest(vectors[:, j])
            image = C @ v_plus
            cos_half = float(np.linalg.norm(image))
            if cos_half <= tol:
                raise DegenerateAngle(f"λ = {lam:.12g} sin compañero en -λ")
            theta = 2.0 * math.atan2(lam, cos_half)
            # C u₊ = i·cos(θ/2)·u₋ en coordenadas de celda
            v_minus = -1j * image / cos_half
            phi = -1j * np.exp(1j * theta / 2)
            b1 = (v_plus + v_minus) / (math.sqrt(2.0) * phi)
            b2 = (v_plus - v_minus) / math.sqrt(2.0)
            alpha = phase_of_largest(b1)
            angles.append(theta)
            cell_columns.extend([b1 / alpha, b2 / alpha])

        basis = np.hstack([corner_basis, stack_columns(cell_columns, n)])

        decomposition = HalmosDecomposition(
            m11=len(ones),
            m00=len(nulls),
            m10=len(plus),
            m01=len(minus),
            angles=angles,
            basis=basis,
            near_degenerate=near_degenerate,
        )
        if near_degenerate:
            logger.warning(f"⚠️ {len(near_degenerate)} autovalores casi degenerados clasificados como esquina")
        logger.info(
            f"✅ Descomposición: m11={decomposition.m11} m00={decomposition.m00} "
            f"m10={decomposition.m10} m01={decomposition.m01} celdas={len(angles)}"
        )
        return decomposition

    @staticmethod
    def canonical_form(dec: HalmosDecomposition) -> ProjectionPair:
        """Par modelo: esquinas diagonales seguidas de una celda por ángulo"""
        if dec.basis.shape != (dec.dim, dec.dim):
            raise InconsistentDims(f"Base {dec.basis.shape} frente a dimensión {dec.dim}")
        P_corner, Q_corner = corner_blocks(dec.m11, dec.m00, dec.m10, dec.m01)
        cells = [canonical_cell(theta) for theta in dec.angles]
        P = block_diag(P_corner, *[c[0] for c in cells])
        Q = block_diag(Q_corner, *[c[1] for c in cells])
        return ProjectionPair(P=P, Q=Q)

    @staticmethod
    def verify_decomposition(pair: ProjectionPair, dec: HalmosDecomposition) -> float:
        """max(‖B*PB - P_can‖, ‖B*QB - Q_can‖) con B = dec.basis"""
        if dec.dim != pair.dim:
            raise InconsistentDims(f"Par de dimensión {pair.dim}, descomposición de dimensión {dec.dim}")
        canonical = ProjectionPairService.canonical_form(dec)
        B = dec.basis
        residual_p = operator_norm(adjoint(B) @ pair.P @ B - canonical.P)
        residual_q = operator_norm(adjoint(B) @ pair.Q @ B - canonical.Q)
        return float(max(residual_p, residual_q))

    # ========================================================================
    # POTENCIAS IMPARES DE LA TRAZA
    # ========================================================================

    @staticmethod
    def trace_odd_power(pair: ProjectionPair, k: int, config: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
        """tr((P - Q)^{2k+1})"""
        if k < 0:
            raise ValueError("k debe ser >= 0")
        value = complex(np.trace(matrix_power(pair.P - pair.Q, 2 * k + 1)))
        if abs(value.imag) > config.tol_report:
            logger.warning(f"⚠️ Parte imaginaria de tr D^{2 * k + 1} = {value.imag:.3e} supera tol_report")
        return float(value.real)

    @staticmethod
    def trace_stability_check(pair: ProjectionPair, k_max: int, config: ToleranceConfig = DEFAULT_TOLERANCES) -> TraceStabilityReport:
        """Comparar tr D^{2k+1} con tr D para k = 0..k_max (fallos reportados, no lanzados)"""
        traces = [ProjectionPairService.trace_odd_power(pair, k, config) for k in range(k_max + 1)]
        max_deviation = max(abs(t - traces[0]) for t in traces)
        tolerance = config.tol_report * pair.dim
        passed = bool(max_deviation <= tolerance)
        if not passed:
            logger.warning(f"⚠️ Traza inestable: desviación {max_deviation:.3e} > {tolerance:.3e}")
        return TraceStabilityReport(
            traces=traces,
            max_deviation=float(max_deviation),
            tolerance=tolerance,
            passed=passed,
        )
