# app/schemas/matrix.py

import math
import numpy as np
from pydantic import BaseModel, Field, PlainSerializer, PlainValidator, model_validator
from typing import Annotated, List

from app.utils.linalg import as_dense


class MatrixFile(BaseModel):
    """Documento JSON de una matriz compleja densa"""

    rows: int = Field(..., ge=0)
    cols: int = Field(..., ge=0)
    data: List[List[float]]          # [[re, im], ...] por filas

    @model_validator(mode="after")
    def _check_data(self) -> "MatrixFile":
        if len(self.data) != self.rows * self.cols:
            raise ValueError(f"data tiene {len(self.data)} entradas, se esperaban {self.rows * self.cols}")
        for pair in self.data:
            if len(pair) != 2:
                raise ValueError("cada entrada debe ser [re, im]")
            if not all(math.isfinite(x) for x in pair):
                raise ValueError("entrada no finita")
        return self

    def to_array(self) -> np.ndarray:
        flat = np.array([complex(re, im) for re, im in self.data], dtype=np.complex128)
        return as_dense(flat.reshape(self.rows, self.cols))

    @classmethod
    def from_array(cls, M: np.ndarray) -> "MatrixFile":
        rows, cols = M.shape
        data = [[float(z.real), float(z.imag)] for z in np.asarray(M).reshape(-1)]
        return cls(rows=rows, cols=cols, data=data)

    class Config:
        json_schema_extra = {
            "example": {"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [0, 0]]}
        }


def _validate_dense(value) -> np.ndarray:
    if isinstance(value, dict):
        return MatrixFile(**value).to_array()
    return as_dense(value)


def _serialize_dense(value: np.ndarray) -> dict:
    return MatrixFile.from_array(value).model_dump()


# Matriz densa compleja: validada al entrar, serializada como MatrixFile en modo JSON
DenseMatrix = Annotated[
    np.ndarray,
    PlainValidator(_validate_dense),
    PlainSerializer(_serialize_dense, when_used="json"),
]
