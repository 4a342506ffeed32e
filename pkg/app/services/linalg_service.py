# app/services/linalg_service.py

import numpy as np
import scipy.linalg
import logging

from app.config.tolerances import DEFAULT_TOLERANCES, ToleranceConfig
from app.schemas.linalg import HermitianEig, ValidationReport
from app.utils.exceptions import NoConvergence, NotHermitian, NotSquare, ValidationFailed
from app.utils.linalg import (
    adjoint, as_dense, fix_column_phases, hermitian_part, identity, operator_norm,
    singular_values, stack_columns,
)
from app.utils.rng import box_muller_complex, make_generator

logger = logging.getLogger(__name__)


class LinalgService:
    """Núcleo espectral sobre matrices densas complejas"""

    @staticmethod
    def hermitian_eigendecompose(H: np.ndarray, config: ToleranceConfig = DEFAULT_TOLERANCES) -> HermitianEig:
        """
        Autodescomposición de una matriz hermítica.

        Args:
            H: Matriz cuadrada hermítica
            config: Tolerancias (usa tol_validate para el chequeo de simetría)

        Returns:
            HermitianEig con autovalores ascendentes y autovectores en columnas

        Raises:
            NotSquare, NotHermitian, NoConvergence
        """
        H = np.asarray(H, dtype=np.complex128)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise NotSquare(f"Matriz de forma {H.shape} no es cuadrada")

        asymmetry = operator_norm(H - adjoint(H))
        if asymmetry > config.tol_validate * (1 + operator_norm(H)):
            raise NotHermitian(f"‖H-H*‖ = {asymmetry:.3e} supera la tolerancia")

        try:
            eigenvalues, eigenvectors = scipy.linalg.eigh(hermitian_part(H))
        except (np.linalg.LinAlgError, ValueError) as e:
            raise NoConvergence(f"eigh no convergió: {e}") from e

        return HermitianEig(eigenvalues=[float(x) for x in eigenvalues], eigenvectors=eigenvectors)

    @staticmethod
    def validate_projection(P: np.ndarray, tol: float) -> ValidationReport:
        """Chequear P² = P y P = P* en norma de operador"""
        P = np.asarray(P, dtype=np.complex128)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise NotSquare(f"Matriz de forma {P.shape} no es cuadrada")

        idempotency = operator_norm(P @ P - P)
        selfadjoint = operator_norm(P - adjoint(P))
        return ValidationReport(
            kind="projection",
            passed=bool(idempotency <= tol and selfadjoint <= tol),
            algebraic_residual=idempotency,
            selfadjoint_residual=selfadjoint,
            tol=tol,
        )

    @staticmethod
    def validate_symmetry(U: np.ndarray, tol: float) -> ValidationReport:
        """Chequear U² = I y U = U* en norma de operador"""
        U = np.asarray(U, dtype=np.complex128)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise NotSquare(f"Matriz de forma {U.shape} no es cuadrada")

        involution = operator_norm(U @ U - identity(U.shape[0]))
        selfadjoint = operator_norm(U - adjoint(U))
        return ValidationReport(
            kind="symmetry",
            passed=bool(involution <= tol and selfadjoint <= tol),
            algebraic_residual=involution,
            selfadjoint_residual=selfadjoint,
            tol=tol,
        )

    @staticmethod
    def require_projection(P: np.ndarray, config: ToleranceConfig = DEFAULT_TOLERANCES) -> None:
        report = LinalgService.validate_projection(P, config.tol_validate)
        if not report.passed:
            raise ValidationFailed(
                f"No es proyección: ‖P²-P‖={report.algebraic_residual:.3e}, "
                f"‖P-P*‖={report.selfadjoint_residual:.3e}"
            )

    @staticmethod
    def require_symmetry(U: np.ndarray, config: ToleranceConfig = DEFAULT_TOLERANCES) -> None:
        report = LinalgService.validate_symmetry(U, config.tol_validate)
        if not report.passed:
            raise ValidationFailed(
                f"No es simetría: ‖U²-I‖={report.algebraic_residual:.3e}, "
                f"‖U-U*‖={report.selfadjoint_residual:.3e}"
            )

    @staticmethod
    def orthonormal_range_basis(P: np.ndarray, config: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
        """
        Base ortonormal (columnas) del rango de una proyección.

        Columnas: autovectores de P con autovalor a menos de tol_cluster de 1,
        con la fase fijada (entrada de mayor módulo real positiva).
        """
        LinalgService.require_projection(P, config)
        eig = LinalgService.hermitian_eigendecompose(P, config)
        keep = [j for j, value in enumerate(eig.eigenvalues) if abs(value - 1.0) <= config.tol_cluster]
        columns = [eig.eigenvectors[:, j] for j in keep]
        return fix_column_phases(stack_columns(columns, P.shape[0]))

    @staticmethod
    def rank_with_tol(M: np.ndarray, tol: float) -> int:
        """Número de valores singulares > tol·max(1, σ_max)"""
        values = singular_values(np.asarray(M, dtype=np.complex128))
        if values.size == 0:
            return 0
        threshold = tol * max(1.0, float(values[-1]))
        return int(np.count_nonzero(values > threshold))

    @staticmethod
    def random_unitary(n: int, seed: int) -> np.ndarray:
        """
        Unitaria aleatoria (Haar) reproducible.

        Gaussiana compleja sembrada -> QR -> normalización de fases de diag(R).
        """
        if n < 1:
            raise ValueError("n debe ser >= 1")
        rng = make_generator(seed)
        Z = box_muller_complex(rng, (n, n))
        Q, R = scipy.linalg.qr(Z)
        diagonal = np.diag(R)
        phases = diagonal / np.abs(diagonal)
        return as_dense(Q * phases)

    @staticmethod
    def random_projection(n: int, rank: int, seed: int) -> np.ndarray:
        """Proyección ortogonal sobre un subespacio aleatorio de dimensión rank"""
        if not 0 <= rank <= n:
            raise ValueError(f"rank={rank} fuera de [0, {n}]")
        U = LinalgService.random_unitary(n, seed)
        B = U[:, :rank]
        return as_dense(hermitian_part(B @ adjoint(B)))
