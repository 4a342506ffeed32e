# app/utils/exceptions.py

# Ninguna hereda de ValueError: así los validadores de pydantic las dejan pasar intactas.


class ProjCalcError(Exception):
    """Error base del proyecto"""

    exit_code = 1


# ============================================================================
# ENTRADA / PARSEO
# ============================================================================

class MatrixParseError(ProjCalcError):
    """Documento de matriz, spec o reporte mal formado"""

    exit_code = 2


class WordParseError(ProjCalcError):
    """Texto de palabra que no respeta la sintaxis"""

    exit_code = 2


class WordLengthExceeded(ProjCalcError):
    """Palabra más larga que el tope de reducción"""

    exit_code = 2


# ============================================================================
# VALIDACIÓN
# ============================================================================

class NotSquare(ProjCalcError):
    exit_code = 3


class NotHermitian(ProjCalcError):
    exit_code = 3


class ValidationFailed(ProjCalcError):
    """La matriz no es proyección (o simetría) dentro de la tolerancia"""

    exit_code = 3


class InconsistentDims(ProjCalcError):
    exit_code = 3


class InvalidSpec(ProjCalcError):
    exit_code = 3


class MismatchedArity(ProjCalcError):
    """Número de generadores incompatible entre operandos"""

    exit_code = 3


# ============================================================================
# CÁLCULO
# ============================================================================

class NoConvergence(ProjCalcError):
    """El solver espectral no convergió"""


class PairingFailure(ProjCalcError):
    """Autovalores interiores de P-Q que no se emparejan como ±λ"""


class DegenerateAngle(ProjCalcError):
    """Ángulo casi degenerado que no encaja en ninguna esquina"""


class EvaluationMismatch(ProjCalcError):
    """Las dos rutas de evaluación de un elemento cruzado no coinciden"""
