# app/config/tolerances.py

from pydantic import BaseModel, Field, model_validator

# Constantes del proyecto
DEFAULT_K_MAX = 3
WORD_LENGTH_CAP = 10_000
ROUNDING_THRESHOLD = 0.1
REPORT_SCHEMA = "projcalc/1"


class ToleranceConfig(BaseModel):
    """Tolerancias numéricas compartidas por todos los servicios"""

    tol_validate: float = Field(1e-9, gt=0, description="Validación de proyecciones/simetrías")
    tol_cluster: float = Field(1e-7, gt=0, description="Agrupación de autovalores")
    tol_rank: float = Field(1e-8, gt=0, description="Corte de valores singulares")
    tol_report: float = Field(1e-6, gt=0, description="Residuos aceptables en reportes")

    @model_validator(mode="after")
    def _check_order(self) -> "ToleranceConfig":
        if self.tol_validate > self.tol_report:
            raise ValueError("tol_validate debe ser <= tol_report")
        return self

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "tol_validate": 1e-9,
                "tol_cluster": 1e-7,
                "tol_rank": 1e-8,
                "tol_report": 1e-6,
            }
        }


DEFAULT_TOLERANCES = ToleranceConfig()
