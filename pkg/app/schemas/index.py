# app/schemas/index.py

from pydantic import BaseModel
from typing import List, Optional

from app.schemas.matrix import DenseMatrix


class FredholmModuleData(BaseModel):
    """Módulo de Fredholm par sobre K = H ⊕ H"""

    big_dim: int                     # 2·dim H
    gamma: DenseMatrix               # diag(I, -I)
    F: DenseMatrix                   # antidiag(I, I)
    piP1: DenseMatrix                # diag(P, Q)
    piP2: DenseMatrix                # diag(Q, P)

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class ModuleAxiomsReport(BaseModel):
    gamma_square: float              # ‖γ² - I‖ (exacto: 0)
    f_square: float                  # ‖F² - I‖ (exacto: 0)
    anticommutator: float            # ‖γF + Fγ‖ (exacto: 0)
    pi_p1_projection: float          # max(‖π(P1)² - π(P1)‖, ‖π(P1) - π(P1)*‖)
    pi_p2_projection: float
    commutator_identity: float       # ‖[F, π(P1)]² + diag(D², D²)‖
    passed: bool

    class Config:
        frozen = True


class IndexRoute(BaseModel):
    """Una ruta de cálculo del índice para un k dado"""

    k: int
    value: float
    integer: int
    residual: float                  # |value - integer|
    flagged: bool                    # residual > umbral de redondeo
    raw_value: Optional[float] = None        # solo emparejamiento: tr γπ(P1)[F,π(P1)]^{2k+2} sin signo
    identity_residual: Optional[float] = None  # solo emparejamiento: |valor - tr D^{2k+3}|

    class Config:
        frozen = True


class IndexCertificate(BaseModel):
    index_by_rank: int
    kernel_dim: int                  # dim ker(QP: ran P -> ran Q)
    cokernel_dim: int                # dim ker((QP)*)
    index_by_trace: List[IndexRoute]
    index_by_pairing: List[IndexRoute]
    agree: bool

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "index_by_rank": 1,
                "kernel_dim": 1,
                "cokernel_dim": 0,
                "index_by_trace": [{"k": 0, "value": 1.0, "integer": 1, "residual": 0.0, "flagged": False}],
                "index_by_pairing": [{"k": 0, "value": 1.0, "integer": 1, "residual": 0.0, "flagged": False}],
                "agree": True,
            }
        }
