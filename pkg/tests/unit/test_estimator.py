"""
@file: tests/unit/test_estimator.py
@description: Модульные тесты оценщика сложности: формулы, оптимизация планов, пресеты и кривые
@dependencies: pytest
@created: 2025-01-21
"""

import math

import pytest

from algebra.combinatorics import log2_int
from services.estimator import (
    AttackPlan,
    ComplexityReport,
    RdProblem,
    _pick_solver,
    cost_combinatorial,
    cost_rd_combined,
    cost_sm,
    estimate_preset,
    hyb3n_stub,
    minimal_sm_degree,
    new_params_rows,
    optimize,
    overdetermination_ratio,
    rd_combined_terms,
    sm_condition,
    sweep,
    theoretical_maxmin_curve,
)
from services.supportminors import sm_counts
from utils.error_handler import PreconditionError, UsageError

# Минимальные log2 стоимости таблицы ROLLO/RQC (решатель "best")
ROLLO_RQC_MINIMA = {
    "Loidreau": 64.15,
    "ROLLO-I-128": 70.23,
    "ROLLO-I-192": 86.26,
    "ROLLO-I-256": 150.69,
    "ROLLO-II-128": 93.01,
    "ROLLO-II-192": 110.54,
    "ROLLO-II-256": 158.19,
    "ROLLO-III-128": 69.45,
    "ROLLO-III-192": 88.04,
    "ROLLO-III-256": 130.57,
    "RQC-I": 76.64,
    "RQC-II": 100.94,
    "RQC-III": 143.82,
}


@pytest.fixture(scope="module")
def rollo_rqc():
    return {row["scheme"]: row for row in estimate_preset("rollo-rqc")}


@pytest.fixture(scope="module")
def new_params():
    return {row["scheme"]: row["report"] for row in new_params_rows()}


@pytest.mark.unit
@pytest.mark.estimator
class TestFormulas:
    """Тестирование отдельных формул стоимости"""

    def test_overdetermination_ratio(self):
        assert overdetermination_ratio(79, 94, 47, 5) == pytest.approx(1.97, abs=0.01)

    def test_combinatorial(self):
        """Тест: (nm)^2·2^(r·ceil(m(k+1)/n) - m) для ROLLO-I-128"""
        expected = 2 * math.log2(94 * 79) + 126
        assert cost_combinatorial(79, 94, 47, 5) == pytest.approx(expected)
        assert expected == pytest.approx(151.72, abs=0.01)

    def test_cost_sm_wiedemann_and_strassen(self):
        _, monomials = sm_counts(13, 7, 7, 5, 2, 1)
        wiedemann = cost_sm(13, 7, 7, 5, 2, b=1)
        assert wiedemann == pytest.approx(log2_int(5 * 3) + 2 * log2_int(monomials))
        strassen = cost_sm(13, 7, 7, 5, 2, b=1, solver="strassen", omega=2.81)
        assert strassen == pytest.approx(2.81 * log2_int(monomials))

    def test_cost_sm_rejects_bad_columns(self):
        with pytest.raises(PreconditionError):
            cost_sm(13, 7, 7, 5, 2, b=1, n_prime=2)
        with pytest.raises(UsageError):
            cost_sm(13, 7, 7, 5, 2, b=1, solver="gauss")

    def test_minimal_degree_small(self):
        assert sm_condition(13, 7, 7, 5, 2, 1)
        assert minimal_sm_degree(13, 7, 7, 5, 2) == 1

    def test_unknown_regime(self):
        with pytest.raises(UsageError):
            sm_condition(13, 7, 7, 5, 2, 1, regime="tropical")

    def test_combined_terms(self):
        """Тест: условие A - 1 <= B + C для ROLLO-I-256 при a = 3, b = 1"""
        terms = rd_combined_terms(2, 113, 134, 67, 7, 1, a=3)
        assert terms.holds
        assert terms.density_den == terms.B + terms.C

    def test_combined_cost_matches_policy(self):
        wiedemann = cost_rd_combined(2, 113, 134, 67, 7, b=1, a=3, solver="wiedemann")
        strassen = cost_rd_combined(2, 113, 134, 67, 7, b=1, a=3, solver="strassen")
        assert cost_rd_combined(2, 113, 134, 67, 7, b=1, a=3, solver="best") == min(wiedemann, strassen)

    def test_pick_solver(self):
        costs = {"strassen": 10.0, "wiedemann": 12.0}
        assert _pick_solver(costs, "best", 2) == "strassen"
        assert _pick_solver(costs, "degree", 1) == "strassen"
        assert _pick_solver(costs, "degree", 3) == "wiedemann"
        assert _pick_solver(costs, "wiedemann", 1) == "wiedemann"
        with pytest.raises(UsageError):
            _pick_solver(costs, "fastest", 1)


@pytest.mark.unit
@pytest.mark.estimator
class TestReport:
    """Тестирование планов и отчетов"""

    def test_plan_rounding_and_star(self):
        plan = AttackPlan("sm-rd-combined", 150.69, a=3, b=1, solver="wiedemann")
        assert plan.rounded == 151
        assert plan.starred
        assert not AttackPlan("punctured", 70.23, p=9, solver="strassen").starred

    def test_minimum_skips_not_modeled(self):
        """Тест: план с NaN (не моделируется) не участвует в минимуме"""
        report = ComplexityReport("x", {}, [hyb3n_stub("x"), AttackPlan("combinatorial", 200.0)])
        assert report.minimum.variant == "combinatorial"
        assert ComplexityReport("y", {}, [hyb3n_stub("y")]).minimum is None

    def test_ties_broken_by_variant_order(self):
        report = ComplexityReport("x", {}, [AttackPlan("combinatorial", 50.0), AttackPlan("hybrid", 50.0, a=1)])
        assert report.minimum.variant == "hybrid"

    def test_to_dict(self):
        report = optimize(RdProblem(79, 94, 47, 5, scheme="ROLLO-I-128"))
        data = report.to_dict()
        assert data["scheme"] == "ROLLO-I-128"
        assert data["minimum"]["variant"] == report.minimum.variant

    def test_unsupported_problem(self):
        with pytest.raises(UsageError):
            optimize(("rd", 79, 94))


@pytest.mark.unit
@pytest.mark.estimator
@pytest.mark.slow
class TestPresets:
    """Тестирование воспроизведения опубликованных таблиц"""

    @pytest.mark.parametrize("scheme,expected", sorted(ROLLO_RQC_MINIMA.items()))
    def test_rollo_rqc_minimum(self, rollo_rqc, scheme, expected):
        minimum = rollo_rqc[scheme]["report"].minimum
        assert minimum.log2_cost == pytest.approx(expected, abs=1.0)

    def test_rollo_rqc_published_close(self, rollo_rqc):
        """Тест: вычисленный минимум в пределах 1 бита от опубликованного"""
        for scheme, row in rollo_rqc.items():
            assert abs(row["report"].minimum.log2_cost - row["published"]["log2_cost"]) <= 1.0, scheme

    def test_rollo_i_128_plan(self, rollo_rqc):
        minimum = rollo_rqc["ROLLO-I-128"]["report"].minimum
        assert minimum.variant == "punctured"
        assert minimum.p == 9

    def test_loidreau_plan(self, rollo_rqc):
        minimum = rollo_rqc["Loidreau"]["report"].minimum
        assert minimum.variant == "punctured"
        assert minimum.p == 3

    def test_rollo_i_256_combined(self, rollo_rqc):
        """Тест: для ROLLO-I-256 выигрывает совмещенная система с a = 3, b = 1 (Видеман)"""
        minimum = rollo_rqc["ROLLO-I-256"]["report"].minimum
        assert (minimum.variant, minimum.a, minimum.b) == ("sm-rd-combined", 3, 1)
        assert minimum.starred

    def test_gemss_and_rainbow(self):
        rows = {row["scheme"]: row["report"].minimum for row in estimate_preset("gemss-rainbow")}
        gemss = rows["GeMSS128"]
        assert (gemss.n_prime, gemss.b) == (61, 2)
        assert gemss.log2_cost == pytest.approx(154, abs=1.0)
        rainbow = rows["Rainbow-IIIc"]
        assert (rainbow.n_prime, rainbow.b) == (125, 5)
        assert rainbow.log2_cost == pytest.approx(208, abs=1.0)

    def test_new_rollo(self, new_params):
        report = new_params["new2ROLLO-I-128"]
        hybrid = report.best("hybrid")
        assert hybrid.a == 18
        assert hybrid.log2_cost == pytest.approx(232.72, abs=1.0)
        combined = report.best("sm-rd-combined")
        assert combined.b == 3
        assert combined.log2_cost == pytest.approx(180.24, abs=1.0)
        assert report.best("combinatorial").log2_cost == pytest.approx(213.13, abs=1.0)

    @pytest.mark.parametrize("scheme,over,a,under,b,comb", [
        ("new2ROLLO-I-192", 258, 17, 197, 3, 283),
        ("new2ROLLO-I-256", 408, 30, 283, 6, 376),
    ])
    def test_new_rollo_reduced_code(self, scheme, over, a, under, b, comb):
        """Тест строк ROLLO 192/256: код длины 2n - 10 и размерности n - 11"""
        entry = next(row for row in new_params_rows() if row["scheme"] == scheme)
        report = entry["report"]
        hybrid = report.best("hybrid")
        assert hybrid.a == a
        assert hybrid.log2_cost == pytest.approx(over, abs=1.0)
        combined = report.best("sm-rd-combined")
        assert combined.b == b
        assert combined.log2_cost == pytest.approx(under, abs=1.0)
        assert report.best("combinatorial").log2_cost == pytest.approx(comb, abs=1.0)
        # буквальные 2n и n дают заметно большие оценки
        literal = entry["literal"]
        assert (literal.params["n"], literal.params["k"]) == (report.params["n"] + 10, report.params["k"] + 11)
        assert literal.best("hybrid").log2_cost > over + 50
        assert literal.best("sm-rd-combined").log2_cost > under + 40
        assert literal.best("combinatorial").log2_cost > comb + 10

    def test_new_rqc(self, new_params):
        report = new_params["newRQC-I"]
        hybrids = [plan for plan in report.plans if plan.variant == "hybrid"]
        assert any(plan.note == "not modeled" and math.isnan(plan.log2_cost) for plan in hybrids)
        hyb2n = next(plan for plan in hybrids if plan.formula == "hyb2n")
        assert hyb2n.a == 6
        assert hyb2n.log2_cost == pytest.approx(160.14, abs=1.0)
        combined = report.best("sm-rd-combined")
        assert (combined.b, combined.solver) == (1, "strassen")
        assert combined.log2_cost == pytest.approx(157.81, abs=1.0)
        assert report.best("combinatorial").log2_cost == pytest.approx(204.79, abs=1.0)

    @pytest.mark.parametrize("scheme,hybrid,combined,comb", [
        ("newRQC-II", 330.64, 224.05, 289.09),
        ("newRQC-III", 553.40, 323.81, 401.14),
    ])
    def test_new_rqc_larger(self, new_params, scheme, hybrid, combined, comb):
        report = new_params[scheme]
        hyb2n = next(plan for plan in report.plans if plan.formula == "hyb2n")
        assert hyb2n.log2_cost == pytest.approx(hybrid, abs=1.0)
        assert report.best("sm-rd-combined").log2_cost == pytest.approx(combined, abs=1.0)
        assert report.best("combinatorial").log2_cost == pytest.approx(comb, abs=1.0)

    def test_unknown_preset(self):
        with pytest.raises(UsageError):
            estimate_preset("mceliece")


@pytest.mark.unit
@pytest.mark.estimator
class TestCurves:
    """Тестирование кривых стоимости"""

    def test_sweep_n2k(self):
        points = dict(sweep(5, mode="n2k"))
        assert points[94] == pytest.approx(70.15, abs=1.0)
        assert all(n % 2 == 0 for n in points)

    def test_sweep_kn(self):
        assert dict(sweep(5, mode="kn"))[94] == pytest.approx(72.97, abs=1.0)
        assert dict(sweep(6, mode="kn"))[106] == pytest.approx(85.96, abs=1.0)

    def test_sweep_mode(self):
        with pytest.raises(UsageError):
            sweep(5, mode="3n")

    def test_theoretical_curve_overdetermined(self):
        for n, m, k, cost in theoretical_maxmin_curve(5, n_max=60):
            assert k <= n // 2
            assert overdetermination_ratio(m, n, k, 5) >= 1
            assert cost > 0
