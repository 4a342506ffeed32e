# app/services/matrix_io_service.py

import hashlib
import json
import logging
import numpy as np
from pathlib import Path
from pydantic import ValidationError
from typing import Any

from app.schemas.matrix import MatrixFile
from app.schemas.rep import RepSpec
from app.utils.exceptions import MatrixParseError

logger = logging.getLogger(__name__)


class MatrixIOService:
    """Leer y escribir documentos JSON de matrices, specs y reportes"""

    @staticmethod
    def _read_json(file_path: str) -> Any:
        path = Path(file_path)
        if path.suffix.lower() != ".json":
            raise MatrixParseError(f"Formato de archivo no soportado: {path.suffix}. Use .json")
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
            logger.error(f"❌ Error leyendo {file_path}: {e}")
            raise MatrixParseError(f"No se pudo leer {file_path}: {e}") from e

    @staticmethod
    def load_matrix(file_path: str) -> np.ndarray:
        """
        Cargar una matriz desde un MatrixFile JSON.

        Raises:
            MatrixParseError: Si el documento no es un MatrixFile válido
        """
        document = MatrixIOService._read_json(file_path)
        try:
            matrix = MatrixFile.model_validate(document).to_array()
        except ValidationError as e:
            logger.error(f"❌ MatrixFile inválido en {file_path}")
            raise MatrixParseError(f"MatrixFile inválido en {file_path}: {e}") from e
        logger.info(f"📄 Matriz {matrix.shape[0]}x{matrix.shape[1]} cargada desde {file_path}")
        return matrix

    @staticmethod
    def load_spec(file_path: str) -> RepSpec:
        """Cargar una RepSpec JSON (InvalidSpec se propaga tal cual)"""
        document = MatrixIOService._read_json(file_path)
        try:
            return RepSpec.model_validate(document)
        except ValidationError as e:
            raise MatrixParseError(f"RepSpec inválida en {file_path}: {e}") from e

    @staticmethod
    def dumps(document: Any) -> str:
        """JSON determinista; los floats salen con repr (ida y vuelta exacta)"""
        return json.dumps(document, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def write_json(file_path: str, document: Any) -> None:
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(MatrixIOService.dumps(document), encoding="utf-8")
        logger.info(f"💾 Escrito {file_path}")

    @staticmethod
    def save_matrix(file_path: str, M: np.ndarray) -> None:
        MatrixIOService.write_json(file_path, MatrixFile.from_array(M).model_dump())

    @staticmethod
    def file_digest(file_path: str) -> str:
        """SHA-256 del contenido del archivo"""
        return hashlib.sha256(Path(file_path).read_bytes()).hexdigest()
