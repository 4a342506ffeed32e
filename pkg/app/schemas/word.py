# app/schemas/word.py

from pydantic import BaseModel, Field, model_validator
from typing import Tuple


class FreeProductWord(BaseModel):
    """Palabra reducida en las simetrías U1..Un (Ui² = 1)"""

    n: int = Field(..., ge=1)                  # factores Z2
    letters: Tuple[int, ...] = ()              # índices 1..n, sin repeticiones adyacentes

    @model_validator(mode="after")
    def _check_reduced(self) -> "FreeProductWord":
        for i, letter in enumerate(self.letters):
            if not 1 <= letter <= self.n:
                raise ValueError(f"Letra U{letter} fuera de 1..{self.n}")
            if i and letter == self.letters[i - 1]:
                raise ValueError(f"Palabra no reducida: U{letter} U{letter} en la posición {i}")
        return self

    class Config:
        frozen = True
        json_schema_extra = {"example": {"n": 3, "letters": [1, 2, 3]}}


class FreeGroupWord(BaseModel):
    """Palabra reducida en W1..Wm como sílabas (generador, exponente)"""

    m: int = Field(..., ge=0)
    syllables: Tuple[Tuple[int, int], ...] = ()

    @model_validator(mode="after")
    def _check_reduced(self) -> "FreeGroupWord":
        for i, (generator, exponent) in enumerate(self.syllables):
            if not 1 <= generator <= self.m:
                raise ValueError(f"Generador W{generator} fuera de 1..{self.m}")
            if exponent == 0:
                raise ValueError("Exponente nulo en palabra reducida")
            if i and generator == self.syllables[i - 1][0]:
                raise ValueError(f"Sílabas adyacentes con el mismo generador W{generator}")
        return self

    @property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    class Config:
        frozen = True
        json_schema_extra = {"example": {"m": 2, "syllables": [[1, 2], [2, -1]]}}


class CrossedElement(BaseModel):
    """Elemento V^eps · w del producto cruzado F_m ⋊ Z2"""

    eps: int = Field(..., ge=0, le=1)
    word: FreeGroupWord

    @property
    def m(self) -> int:
        return self.word.m

    class Config:
        frozen = True
