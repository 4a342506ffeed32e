# app/schemas/linalg.py

from pydantic import BaseModel
from typing import List

from app.schemas.matrix import DenseMatrix


class HermitianEig(BaseModel):
    eigenvalues: List[float]         # ascendentes
    eigenvectors: DenseMatrix        # columnas, unitaria

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class ValidationReport(BaseModel):
    """Resultado de validar una proyección o una simetría"""

    kind: str                        # "projection" | "symmetry"
    passed: bool
    algebraic_residual: float        # ‖P²-P‖ o ‖U²-I‖
    selfadjoint_residual: float      # ‖M-M*‖
    tol: float

    class Config:
        frozen = True
