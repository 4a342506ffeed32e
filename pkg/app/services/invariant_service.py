# app/services/invariant_service.py

import math
import numpy as np
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from app.config.tolerances import DEFAULT_K_MAX, DEFAULT_TOLERANCES, ToleranceConfig
from app.schemas.report import CheckItem, CheckReport
from app.schemas.rep import RepSpec
from app.schemas.word import CrossedElement
from app.services.index_service import IndexService
from app.services.linalg_service import LinalgService
from app.services.projection_pair_service import ProjectionPairService
from app.services.rep_builder_service import RepBuilderService
from app.services.word_service import WordService
from app.utils.exceptions import ProjCalcError
from app.utils.linalg import adjoint, operator_norm, singular_values
from app.utils.rng import make_generator

logger = logging.getLogger(__name__)

# Umbrales de los corpus de propiedades
INDEX_RESIDUAL = 1e-6
SPECTRUM_RESIDUAL = 1e-7
ANGLE_MATCH = 1e-8
ROUND_TRIP_RESIDUAL = 1e-8
FUNCTORIALITY = 1e-10


def _item(name: str, passed: bool, residual: Optional[float] = None, detail: Optional[str] = None) -> CheckItem:
    return CheckItem(
        name=name,
        passed=bool(passed),
        residual=None if residual is None else float(residual),
        detail=detail,
    )


def specs_match(expected: RepSpec, found: RepSpec, angle_tol: float = ANGLE_MATCH) -> Tuple[bool, float]:
    """Esquinas y multiplicidades exactas, ángulos dentro de angle_tol"""
    corners_equal = (expected.m11, expected.m00, expected.m10, expected.m01) == (
        found.m11, found.m00, found.m10, found.m01
    )
    if not corners_equal or len(expected.points) != len(found.points):
        return False, math.inf
    deviation = 0.0
    for a, b in zip(expected.points, found.points):
        if a.mult != b.mult:
            return False, math.inf
        deviation = max(deviation, abs(a.theta - b.theta))
    return deviation <= angle_tol, deviation


class InvariantService:
    """Baterías de invariantes sobre un par y corpus sembrados"""

    @staticmethod
    def full_check(P: np.ndarray, Q: np.ndarray, k_max: int = DEFAULT_K_MAX,
                   config: ToleranceConfig = DEFAULT_TOLERANCES) -> CheckReport:
        """
        Batería completa sobre un par: validación, espectro, descomposición,
        estabilidad de trazas, cadena del índice y axiomas del módulo de Fredholm.

        Si la validación falla se detiene ahí.
        """
        items: List[CheckItem] = []
        for label, M in (("projection_P", P), ("projection_Q", Q)):
            report = LinalgService.validate_projection(M, config.tol_validate)
            items.append(_item(label, report.passed, max(report.algebraic_residual, report.selfadjoint_residual)))
        if not all(item.passed for item in items):
            return CheckReport(items=items)
        pair = ProjectionPairService.make_pair(P, Q, config)

        try:
            spectrum = ProjectionPairService.difference_spectrum(pair, config)
            items.append(_item("spectrum_symmetry", spectrum.residual <= config.tol_cluster, spectrum.residual))
        except ProjCalcError as e:
            items.append(_item("spectrum_symmetry", False, detail=str(e)))
            return CheckReport(items=items)

        try:
            dec = ProjectionPairService.halmos_decompose(pair, config)
        except ProjCalcError as e:
            items.append(_item("decomposition", False, detail=str(e)))
            return CheckReport(items=items)
        residual = ProjectionPairService.verify_decomposition(pair, dec)
        items.append(_item("decomposition", residual <= config.tol_report and dec.dim == pair.dim, residual))

        B_P = LinalgService.orthonormal_range_basis(pair.P, config)
        B_Q = LinalgService.orthonormal_range_basis(pair.Q, config)
        cosines = singular_values(adjoint(B_Q) @ B_P)
        intersection = int(np.count_nonzero(np.abs(cosines - 1.0) <= config.tol_cluster))
        items.append(_item("corner_identification", intersection == dec.m11,
                           detail=f"dim(ran P ∩ ran Q)={intersection}, m11={dec.m11}"))

        stability = ProjectionPairService.trace_stability_check(pair, max(k_max, 1), config)
        corner_index = dec.m10 - dec.m01
        items.append(_item("trace_stability", stability.passed, stability.max_deviation))
        items.append(_item("trace_rigidity", round(stability.traces[0]) == corner_index,
                           abs(stability.traces[0] - corner_index)))

        certificate = IndexService.index_theorem_check(pair, k_max, config)
        items.append(_item("index_chain", certificate.agree and certificate.index_by_rank == corner_index,
                           detail=f"index={certificate.index_by_rank}, m10-m01={corner_index}"))
        pairing_residual = max(r.identity_residual for r in certificate.index_by_pairing)
        items.append(_item("pairing_identity", pairing_residual <= config.tol_report, pairing_residual))

        axioms = IndexService.check_module_axioms(IndexService.build_fredholm_module(pair, config), config)
        items.append(_item("module_axioms", axioms.passed, axioms.commutator_identity))
        return CheckReport(items=items)

    # ========================================================================
    # CORPUS SEMBRADOS
    # ========================================================================

    @staticmethod
    def corpus_instance(seed: int, k_max: int = DEFAULT_K_MAX, config: ToleranceConfig = DEFAULT_TOLERANCES,
                        max_corner: int = 5, max_points: int = 10) -> CheckReport:
        """Par generado desde una spec aleatoria, contrastado con su verdad de terreno"""
        spec = RepBuilderService.random_spec(seed, max_corner=max_corner, max_points=max_points)
        pair = RepBuilderService.random_pair_from_spec(spec, seed, config)
        dim = pair.dim
        items: List[CheckItem] = []

        kernel, cokernel = IndexService.kernel_dimensions(pair, config)
        index = kernel - cokernel
        items.append(_item("rank_index", (kernel, cokernel) == (spec.m10, spec.m01),
                           detail=f"ker={kernel}, coker={cokernel}, esperado=({spec.m10}, {spec.m01})"))

        trace_residual, trace_ok = 0.0, True
        for k in range(max(k_max, 4) + 1):
            route = IndexService.index_via_trace(pair, k, config)
            deviation = abs(route.value - spec.expected_index)
            trace_residual = max(trace_residual, deviation)
            trace_ok = trace_ok and route.integer == index and route.residual < INDEX_RESIDUAL
            trace_ok = trace_ok and deviation < INDEX_RESIDUAL * dim
        items.append(_item("trace_index", trace_ok, trace_residual))

        mod = IndexService.build_fredholm_module(pair, config)
        D = pair.P - pair.Q
        pairing_residual, pairing_ok = 0.0, True
        for k in range(min(k_max, 2) + 1):
            value = IndexService.connes_pairing(mod, k, config)
            target = float(np.trace(np.linalg.matrix_power(D, 2 * k + 3)).real)
            pairing_residual = max(pairing_residual, abs(value - target))
            pairing_ok = pairing_ok and abs(value - target) < INDEX_RESIDUAL and round(value) == index
        items.append(_item("pairing_index", pairing_ok, pairing_residual))

        axioms = IndexService.check_module_axioms(mod, config)
        items.append(_item("module_axioms", axioms.passed, axioms.commutator_identity))

        try:
            spectrum = ProjectionPairService.difference_spectrum(pair, config)
            items.append(_item("spectrum_symmetry", spectrum.residual < SPECTRUM_RESIDUAL, spectrum.residual))
            dec = ProjectionPairService.halmos_decompose(pair, config)
        except ProjCalcError as e:
            items.append(_item("decomposition_round_trip", False, detail=str(e)))
            return CheckReport(items=items)

        residual = ProjectionPairService.verify_decomposition(pair, dec)
        matched, deviation = specs_match(spec, RepBuilderService.spec_of_decomposition(dec, config))
        items.append(_item("decomposition_round_trip", matched and residual <= ROUND_TRIP_RESIDUAL,
                           max(residual, deviation)))
        return CheckReport(items=items)

    @staticmethod
    def random_pair_instance(seed: int, max_dim: int = 40, config: ToleranceConfig = DEFAULT_TOLERANCES) -> CheckReport:
        """Par de subespacios aleatorios (no generado desde spec): simetría del espectro e índice"""
        rng = make_generator(seed)
        n = int(rng.integers(1, max_dim + 1))
        rank_p, rank_q = (int(r) for r in rng.integers(0, n + 1, size=2))
        P = LinalgService.random_projection(n, rank_p, 2 * seed)
        Q = LinalgService.random_projection(n, rank_q, 2 * seed + 1)
        pair = ProjectionPairService.make_pair(P, Q, config)
        items: List[CheckItem] = []
        try:
            spectrum = ProjectionPairService.difference_spectrum(pair, config)
            items.append(_item("spectrum_symmetry", spectrum.residual < SPECTRUM_RESIDUAL, spectrum.residual))
        except ProjCalcError as e:
            items.append(_item("spectrum_symmetry", False, detail=str(e)))
        index = IndexService.fredholm_index(pair, config)
        route = IndexService.index_via_trace(pair, 0, config)
        items.append(_item("trace_index", route.integer == index == rank_p - rank_q, route.residual))
        return CheckReport(items=items)

    @staticmethod
    def word_suite(n: int, count: int, seed: int, max_length: int = 20, eval_dim: int = 4) -> CheckReport:
        """Isomorfismo F_{n-1} ⋊ Z2 ≅ (Z2)^{*n} sobre elementos aleatorios sembrados"""
        rng = make_generator(seed)
        m = n - 1
        projections = [
            LinalgService.random_projection(eval_dim, int(rng.integers(0, eval_dim + 1)), seed * 131 + i)
            for i in range(n)
        ]
        failures: Dict[str, int] = {
            "iso_round_trip": 0, "fp_round_trip": 0, "homomorphism": 0,
            "relation_image": 0, "cp_inverse": 0, "cp_associativity": 0,
            "fp_associativity": 0, "alpha_homomorphism": 0, "evaluation_functoriality": 0,
        }
        worst_evaluation = 0.0
        V = CrossedElement(eps=1, word=WordService.fg_word(m, []))
        for _ in range(count):
            x = WordService.random_crossed_element(m, max_length, rng)
            y = WordService.random_crossed_element(m, max_length, rng)
            z = WordService.random_crossed_element(m, max_length, rng)
            a = WordService.random_fp_word(n, max_length, rng)
            b = WordService.random_fp_word(n, max_length, rng)
            c = WordService.random_fp_word(n, max_length, rng)

            image = WordService.iso_to_free_product(x)
            if WordService.iso_from_free_product(image) != x:
                failures["iso_round_trip"] += 1
            if WordService.iso_to_free_product(WordService.iso_from_free_product(a)) != a:
                failures["fp_round_trip"] += 1
            product = WordService.iso_to_free_product(WordService.cp_multiply(x, y))
            if product != WordService.fp_multiply(image, WordService.iso_to_free_product(y)):
                failures["homomorphism"] += 1
            if WordService.cp_multiply(x, WordService.cp_inverse(x)) != WordService.cp_identity(m):
                failures["cp_inverse"] += 1
            multiply = WordService.cp_multiply
            if multiply(multiply(x, y), z) != multiply(x, multiply(y, z)):
                failures["cp_associativity"] += 1
            if WordService.fp_multiply(WordService.fp_multiply(a, b), c) != \
                    WordService.fp_multiply(a, WordService.fp_multiply(b, c)):
                failures["fp_associativity"] += 1
            twisted = WordService.alpha(WordService.fg_multiply(x.word, y.word))
            if twisted != WordService.fg_multiply(WordService.alpha(x.word), WordService.alpha(y.word)):
                failures["alpha_homomorphism"] += 1
            for i in range(1, m + 1):
                W = CrossedElement(eps=0, word=WordService.fg_word(m, [(i, 1)]))
                W_inverse = CrossedElement(eps=0, word=WordService.fg_word(m, [(i, -1)]))
                conjugated = WordService.cp_multiply(WordService.cp_multiply(V, W), V)
                if WordService.iso_to_free_product(conjugated) != WordService.iso_to_free_product(W_inverse):
                    failures["relation_image"] += 1

            left = WordService.evaluate_fp(WordService.fp_multiply(a, b), projections)
            right = WordService.evaluate_fp(a, projections) @ WordService.evaluate_fp(b, projections)
            deviation = operator_norm(left - right)
            worst_evaluation = max(worst_evaluation, deviation)
            if deviation > FUNCTORIALITY * eval_dim:
                failures["evaluation_functoriality"] += 1

        items = [
            _item(name, failed == 0,
                  residual=worst_evaluation if name == "evaluation_functoriality" else None,
                  detail=f"{failed}/{count} fallos (n={n})")
            for name, failed in failures.items()
        ]
        return CheckReport(items=items)

    # ========================================================================
    # RESUMEN
    # ========================================================================

    @staticmethod
    def summarize(labelled: Sequence[Tuple[str, CheckReport]]) -> Dict:
        """Agregar reportes por nombre de chequeo: aprobados, fallidos, peor residuo"""
        checks: Dict[str, Dict] = {}
        failures = []
        for label, report in labelled:
            for item in report.items:
                entry = checks.setdefault(item.name, {"passed": 0, "failed": 0, "max_residual": 0.0})
                entry["passed" if item.passed else "failed"] += 1
                if item.residual is not None and math.isfinite(item.residual):
                    entry["max_residual"] = max(entry["max_residual"], item.residual)
                if not item.passed:
                    failures.append({"instance": label, "check": item.name, "detail": item.detail})
        return {"instances": len(labelled), "checks": checks, "failures": failures}
