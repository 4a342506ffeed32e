# app/utils/linalg.py

import numpy as np
import scipy.linalg
from typing import Sequence

# ============================================================================
# CONSTRUCCIÓN
# ============================================================================

def as_dense(value) -> np.ndarray:
    """
    Convertir a matriz densa compleja 2-D, finita y de solo lectura.

    Args:
        value: array-like (listas anidadas, ndarray, ...)

    Returns:
        Copia complex128 no escribible

    Raises:
        ValueError: Si no es 2-D o contiene NaN/Inf
    """
    array = np.array(value, dtype=np.complex128)
    if array.ndim != 2:
        raise ValueError(f"Se esperaba una matriz 2-D, llegó ndim={array.ndim}")
    if not np.all(np.isfinite(array)):
        raise ValueError("La matriz contiene entradas no finitas")
    array.setflags(write=False)
    return array


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def adjoint(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return (M + adjoint(M)) / 2


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    """Suma directa de bloques; sin bloques devuelve la matriz 0x0"""
    if not blocks:
        return np.zeros((0, 0), dtype=np.complex128)
    return scipy.linalg.block_diag(*blocks).astype(np.complex128)


def matrix_power(M: np.ndarray, k: int) -> np.ndarray:
    return np.linalg.matrix_power(M, k)


# ============================================================================
# VALORES SINGULARES / NORMAS
# ============================================================================

def singular_values(M: np.ndarray) -> np.ndarray:
    """
    Valores singulares en orden ascendente vía la dilatación hermítica.

    Los autovalores de [[0, M], [M*, 0]] son ±σ_i más ceros, con error absoluto
    del orden de eps·‖M‖ (pasar por M*M perdería la mitad de los dígitos).
    """
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return np.zeros(0)
    dilation = np.zeros((rows + cols, rows + cols), dtype=np.complex128)
    dilation[:rows, rows:] = M
    dilation[rows:, :rows] = adjoint(M)
    eigenvalues = scipy.linalg.eigh(dilation, eigvals_only=True)
    # los min(rows, cols) mayores son los σ_i
    top = eigenvalues[-min(rows, cols):]
    return np.clip(top, 0.0, None)


def operator_norm(M: np.ndarray) -> float:
    """Mayor valor singular (0 para matrices vacías)"""
    values = singular_values(M)
    return float(values[-1]) if values.size else 0.0


# ============================================================================
# FASES
# ============================================================================

def phase_of_largest(v: np.ndarray) -> complex:
    """Fase unitaria de la entrada de mayor módulo de un vector"""
    index = int(np.argmax(np.abs(v)))
    entry = v[index]
    if abs(entry) == 0:
        return 1.0 + 0j
    return entry / abs(entry)


def fix_column_phases(B: np.ndarray) -> np.ndarray:
    """Cada columna con su entrada de mayor módulo real positiva"""
    fixed = np.array(B, dtype=np.complex128)
    for j in range(fixed.shape[1]):
        fixed[:, j] = fixed[:, j] / phase_of_largest(fixed[:, j])
    return fixed


def stack_columns(columns: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Apilar vectores columna en una matriz n x len(columns)"""
    if not columns:
        return np.zeros((n, 0), dtype=np.complex128)
    return np.column_stack(columns).astype(np.complex128)
