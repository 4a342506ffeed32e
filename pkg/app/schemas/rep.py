# app/schemas/rep.py

import math
from pydantic import BaseModel, Field, model_validator
from typing import List, Optional, Tuple

from app.schemas.matrix import DenseMatrix
from app.utils.exceptions import InvalidSpec


class RepPoint(BaseModel):
    """Átomo (θ, multiplicidad) de la medida sobre el semicírculo superior"""

    theta: float
    mult: int = Field(..., ge=1)

    class Config:
        frozen = True


class RepSpec(BaseModel):
    """Datos de sectores de una representación de dimensión finita"""

    m11: int = Field(0, ge=0)        # (P1, P2) = (1, 1)
    m00: int = Field(0, ge=0)        # (0, 0)
    m10: int = Field(0, ge=0)        # (1, 0)
    m01: int = Field(0, ge=0)        # (0, 1)
    points: Tuple[RepPoint, ...] = ()

    @model_validator(mode="after")
    def _check_spec(self) -> "RepSpec":
        thetas = [p.theta for p in self.points]
        for theta in thetas:
            if not (0.0 < theta < math.pi) or not math.isfinite(theta):
                raise InvalidSpec(f"θ = {theta} fuera de (0, π)")
        for previous, current in zip(thetas, thetas[1:]):
            if current <= previous:
                raise InvalidSpec("Los θ deben ser estrictamente ascendentes")
        if self.dimension < 1:
            raise InvalidSpec("La representación debe tener dimensión >= 1")
        return self

    @property
    def dimension(self) -> int:
        return self.m11 + self.m00 + self.m10 + self.m01 + 2 * sum(p.mult for p in self.points)

    @property
    def expected_index(self) -> int:
        return self.m10 - self.m01

    @property
    def difference_eigenvalues(self) -> List[float]:
        """Espectro exacto de P1 - P2, ascendente"""
        values = [1.0] * self.m10 + [-1.0] * self.m01 + [0.0] * (self.m11 + self.m00)
        for point in self.points:
            lam = math.sin(point.theta / 2)
            values.extend([lam, -lam] * point.mult)
        return sorted(values)

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {"m11": 1, "m00": 0, "m10": 2, "m01": 1, "points": [{"theta": 1.5707963267948966, "mult": 1}]}
        }


class SectorBlock(BaseModel):
    """Bloque diagonal de la representación construida"""

    sector: str                      # "11" | "00" | "10" | "01" | "cell"
    start: int
    size: int
    theta: Optional[float] = None    # solo celdas

    class Config:
        frozen = True


class BuiltRepresentation(BaseModel):
    P1: DenseMatrix
    P2: DenseMatrix
    V: DenseMatrix
    spec: RepSpec
    sector_layout: List[SectorBlock]

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class BuiltVerification(BaseModel):
    """Chequeos de una representación construida (reportados, no lanzados)"""

    p1_projection: float
    p2_projection: float
    v_is_symmetry_of_p1: float       # ‖V - (2P1 - I)‖
    crossed_relation: float          # ‖V·W·V - W*‖, W = V·(2P2 - I)
    w_unitary: float                 # ‖W*W - I‖
    cell_conjugation: float          # max por celda ‖V·M_z·V - M_z̄‖
    atomic_spectrum_exact: bool      # P1 - P2 en sectores atómicos ∈ {-1, 0, 1}
    passed: bool

    class Config:
        frozen = True
