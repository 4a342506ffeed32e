# app/schemas/report.py

from pydantic import BaseModel, Field
from typing import Any, Dict, List, Optional

from app.config.tolerances import REPORT_SCHEMA, ToleranceConfig


class CheckItem(BaseModel):
    """Un chequeo de invariante con su residuo"""

    name: str
    passed: bool
    residual: Optional[float] = None
    detail: Optional[str] = None

    class Config:
        frozen = True


class CheckReport(BaseModel):
    items: List[CheckItem]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    @property
    def failures(self) -> List[CheckItem]:
        return [item for item in self.items if not item.passed]

    class Config:
        frozen = True


class Report(BaseModel):
    """Reporte JSON de un comando del CLI"""

    schema_version: str = Field(REPORT_SCHEMA, alias="schema")
    command: str
    arguments: Dict[str, Any] = {}
    inputs: Dict[str, str] = {}              # ruta -> sha256
    tolerances: ToleranceConfig
    payload: Dict[str, Any] = {}
    flags: Dict[str, bool] = {}
    residuals: Dict[str, float] = {}
    error: Optional[str] = None

    @property
    def exit_code(self) -> int:
        """0 si todo pasa, 2 entrada ilegible, 3 entrada inválida, 1 otro fallo"""
        if self.flags.get("parsed") is False:
            return 2
        if self.flags.get("validated") is False:
            return 3
        return 0 if all(self.flags.values()) else 1

    def to_document(self) -> Dict[str, Any]:
        document = self.model_dump(mode="json", by_alias=True)
        document["exit_code"] = self.exit_code
        return document

    class Config:
        frozen = True
        populate_by_name = True
