# app/utils/rng.py

import numpy as np

# SFC64 ("small fast chaotic", familia shift/rotate de 64 bits) sembrado
# explícitamente; las normales salen de Box–Muller sobre sus uniformes para que
# la receta sea reproducible fuera de numpy.


def make_generator(seed: int) -> np.random.Generator:
    """Generador determinista para una semilla dada"""
    return np.random.Generator(np.random.SFC64(seed))


def box_muller_complex(rng: np.random.Generator, shape) -> np.ndarray:
    """
    Muestras gaussianas complejas estándar (E|z|² = 1) por Box–Muller.

    Args:
        rng: Generador sembrado
        shape: Forma del array de salida

    Returns:
        Array complex128 con partes real e imaginaria N(0, 1/2)
    """
    u1 = 1.0 - rng.random(shape)  # en (0, 1]: log seguro
    u2 = rng.random(shape)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return (radius * np.cos(angle) + 1j * radius * np.sin(angle)) / np.sqrt(2.0)
