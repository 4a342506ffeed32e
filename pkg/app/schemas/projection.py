# app/schemas/projection.py

import math
from pydantic import BaseModel, model_validator
from typing import List, Tuple

from app.schemas.matrix import DenseMatrix
from app.utils.exceptions import InconsistentDims


class ProjectionPair(BaseModel):
    """Par (P, Q) de proyecciones del mismo tamaño"""

    P: DenseMatrix
    Q: DenseMatrix

    @model_validator(mode="after")
    def _check_shapes(self) -> "ProjectionPair":
        if self.P.shape[0] != self.P.shape[1] or self.P.shape != self.Q.shape:
            raise InconsistentDims(f"Formas incompatibles: P{self.P.shape}, Q{self.Q.shape}")
        return self

    @property
    def dim(self) -> int:
        return int(self.P.shape[0])

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class SpectrumReport(BaseModel):
    """Espectro de D = P - Q agrupado en ±1, 0 y pares ±λ"""

    plus_ones: int
    minus_ones: int
    zeros: int
    paired: List[Tuple[float, int]]  # (λ, multiplicidad), λ en (0, 1)
    residual: float

    @property
    def dim(self) -> int:
        return self.plus_ones + self.minus_ones + self.zeros + 2 * sum(m for _, m in self.paired)

    class Config:
        frozen = True


class HalmosDecomposition(BaseModel):
    """Esquinas + celdas genéricas de un par de proyecciones"""

    m11: int                         # ran P ∩ ran Q
    m00: int                         # ker P ∩ ker Q
    m10: int                         # ran P ∩ ker Q
    m01: int                         # ker P ∩ ran Q
    angles: List[float]              # θ en (0, π), con repetición, ascendentes
    basis: DenseMatrix               # [m11 | m00 | m10 | m01 | celdas de 2 columnas]
    near_degenerate: List[float] = []  # autovalores de D clasificados como esquina por encima del piso de ruido

    @model_validator(mode="after")
    def _check_dims(self) -> "HalmosDecomposition":
        if min(self.m11, self.m00, self.m10, self.m01) < 0:
            raise InconsistentDims("Dimensiones de esquina negativas")
        if any(not (0.0 < theta < math.pi) for theta in self.angles):
            raise InconsistentDims("Ángulos fuera de (0, π)")
        if self.basis.shape != (self.dim, self.dim):
            raise InconsistentDims(f"Base de forma {self.basis.shape}, dimensión total {self.dim}")
        return self

    @property
    def dim(self) -> int:
        return self.m11 + self.m00 + self.m10 + self.m01 + 2 * len(self.angles)

    @property
    def principal_angles(self) -> List[float]:
        """Ángulos principales clásicos θ/2 en (0, π/2)"""
        return [theta / 2 for theta in self.angles]

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class TraceStabilityReport(BaseModel):
    traces: List[float]              # tr D^{2k+1}, k = 0..k_max
    max_deviation: float
    tolerance: float
    passed: bool

    class Config:
        frozen = True
