# tests/test_rep_builder.py

import math
import numpy as np
import pytest
from pydantic import ValidationError

from app.schemas.rep import RepPoint, RepSpec
from app.services.linalg_service import LinalgService
from app.services.projection_pair_service import ProjectionPairService
from app.services.rep_builder_service import RepBuilderService
from app.utils.exceptions import InvalidSpec

EXAMPLE_SPEC = RepSpec(m11=1, m10=2, m01=1, points=(RepPoint(theta=math.pi / 2, mult=1),))


def test_spec_properties():
    """Dimensión, índice esperado y espectro exacto de P1 - P2"""
    assert EXAMPLE_SPEC.dimension == 6
    assert EXAMPLE_SPEC.expected_index == 1
    lam = math.sin(math.pi / 4)
    assert EXAMPLE_SPEC.difference_eigenvalues == pytest.approx([-1.0, -lam, 0.0, lam, 1.0, 1.0])


@pytest.mark.parametrize("kwargs", [
    {"points": (RepPoint(theta=4.0, mult=1),)},
    {"points": (RepPoint(theta=0.0, mult=1),)},
    {"points": (RepPoint(theta=2.0, mult=1), RepPoint(theta=1.0, mult=1))},
    {"points": (RepPoint(theta=1.0, mult=1), RepPoint(theta=1.0, mult=1))},
    {},
])
def test_invalid_specs(kwargs):
    """θ fuera de (0, π), θ no ascendentes o dimensión 0"""
    with pytest.raises(InvalidSpec):
        RepSpec(**kwargs)


def test_point_multiplicity_must_be_positive():
    """mult >= 1"""
    with pytest.raises(ValidationError):
        RepPoint(theta=1.0, mult=0)


def test_build_representation():
    """Bloques en el orden de sectores y relaciones verificadas"""
    rep = RepBuilderService.build_representation(EXAMPLE_SPEC)
    assert rep.P1.shape == (6, 6)
    assert [block.sector for block in rep.sector_layout] == ["11", "10", "10", "01", "cell"]
    assert rep.sector_layout[-1].start == 4
    np.testing.assert_array_equal(np.diag(rep.P1).real[:4], [1, 1, 1, 0])
    np.testing.assert_array_equal(np.diag(rep.P2).real[:4], [1, 0, 0, 1])
    np.testing.assert_array_equal(rep.V, 2 * rep.P1 - np.eye(6))

    verification = RepBuilderService.verify_built(rep)
    assert verification.passed
    assert verification.atomic_spectrum_exact
    assert verification.cell_conjugation < 1e-15


def test_built_spectrum_matches_spec():
    """Espectro de P1 - P2 igual a difference_eigenvalues"""
    spec = RepSpec(m00=2, m01=1, points=(RepPoint(theta=0.3, mult=2), RepPoint(theta=2.9, mult=1)))
    rep = RepBuilderService.build_representation(spec)
    eigenvalues = np.linalg.eigvalsh(rep.P1 - rep.P2)
    np.testing.assert_allclose(eigenvalues, spec.difference_eigenvalues, atol=1e-14)


def test_random_pair_from_spec_is_deterministic():
    """Misma spec y semilla, mismas matrices"""
    first = RepBuilderService.random_pair_from_spec(EXAMPLE_SPEC, seed=21)
    second = RepBuilderService.random_pair_from_spec(EXAMPLE_SPEC, seed=21)
    np.testing.assert_array_equal(first.P, second.P)
    np.testing.assert_array_equal(first.Q, second.Q)
    assert np.trace(first.P).real == pytest.approx(4.0, abs=1e-12)


def test_random_pair_spectrum():
    """El par conjugado conserva el espectro de la spec"""
    pair = RepBuilderService.random_pair_from_spec(EXAMPLE_SPEC, seed=2)
    eig = LinalgService.hermitian_eigendecompose(pair.P - pair.Q)
    np.testing.assert_allclose(eig.eigenvalues, EXAMPLE_SPEC.difference_eigenvalues, atol=1e-12)


def test_spec_of_decomposition_merges_repeated_angles():
    """Ángulos repetidos se fusionan en un punto con multiplicidad"""
    spec = RepSpec(m11=1, points=(RepPoint(theta=1.0, mult=2), RepPoint(theta=2.0, mult=1)))
    pair = RepBuilderService.random_pair_from_spec(spec, seed=13)
    found = RepBuilderService.spec_of_decomposition(ProjectionPairService.halmos_decompose(pair))
    assert [p.mult for p in found.points] == [2, 1]
    assert [p.theta for p in found.points] == pytest.approx([1.0, 2.0], abs=1e-10)
    assert found.m11 == 1


def test_random_spec_limits():
    """Specs aleatorias reproducibles dentro de los límites"""
    for seed in range(50):
        spec = RepBuilderService.random_spec(seed, max_corner=3, max_points=4, max_mult=2)
        assert spec == RepBuilderService.random_spec(seed, max_corner=3, max_points=4, max_mult=2)
        assert max(spec.m11, spec.m00, spec.m10, spec.m01) <= 3
        assert len(spec.points) <= 4
        assert spec.dimension >= 1
        thetas = [p.theta for p in spec.points]
        assert all(0.05 <= t <= math.pi - 0.05 for t in thetas)
        assert all(b - a >= 1e-3 for a, b in zip(thetas, thetas[1:]))
