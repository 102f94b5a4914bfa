"""
@file: tests/unit/test_instances.py
@description: Модульные тесты генерации, сериализации и переборных оракулов RD и MinRank
@dependencies: pytest, numpy
@created: 2025-01-21
"""

import json

import numpy as np
import pytest

from algebra.ffield import rank_weight
from services.instances import (
    MinRankInstance,
    RdInstance,
    brute_force_minrank,
    brute_force_rd,
    dumps_instance,
    fingerprint,
    gaussian_binomial,
    gen_minrank,
    gen_rd,
    iter_subspaces,
    load_instance,
    loads_instance,
    rd_to_minrank,
    save_instance,
)
from utils.error_handler import FeasibilityError, InstanceFormatError, PreconditionError


@pytest.mark.unit
class TestGeneration:
    """Тестирование генерации экземпляров"""

    def test_planted_rd_error(self, small_rd):
        """Тест: заложенная ошибка имеет ранг ровно r и y - e ∈ C"""
        assert rank_weight(small_rd.plant.e, small_rd.field) == small_rd.r
        assert small_rd.is_solution(small_rd.plant.e, exact=True)

    def test_wrong_error_rejected(self, small_rd):
        e = small_rd.plant.e.copy()
        e[0] = (e[0] + 1) % 2
        assert not small_rd.is_solution(e)
        assert not small_rd.is_solution(e[:-1])

    def test_systematic_form(self, small_rd):
        """Тест: G̃ = (I_{k+1} R)"""
        G_tilde, R = small_rd.systematic
        k1 = small_rd.k + 1
        identity = small_rd.field.from_base(np.eye(k1, dtype=np.int64))
        assert np.array_equal(G_tilde[:, :k1], identity)
        assert R.shape == (k1, small_rd.n - k1, small_rd.m)

    def test_same_seed_same_bytes(self):
        """Тест воспроизводимости: одинаковый seed дает побайтно одинаковый файл"""
        assert dumps_instance(gen_rd(2, 5, 7, 2, 2, seed=9)) == dumps_instance(gen_rd(2, 5, 7, 2, 2, seed=9))
        assert dumps_instance(gen_rd(2, 5, 7, 2, 2, seed=9)) != dumps_instance(gen_rd(2, 5, 7, 2, 2, seed=10))

    def test_invalid_rank(self):
        with pytest.raises(PreconditionError):
            gen_rd(2, 5, 7, 2, 0)
        with pytest.raises(PreconditionError):
            gen_rd(2, 5, 7, 6, 1)

    def test_planted_minrank(self, small_minrank):
        assert small_minrank.is_solution(small_minrank.x)
        assert not small_minrank.is_solution(np.zeros(small_minrank.K, dtype=np.int64))

    def test_rd_to_minrank_keeps_plant(self, small_rd):
        """Тест: заложенная ошибка RD переходит в решение MinRank"""
        minrank = rd_to_minrank(small_rd)
        assert minrank.K == small_rd.m * (small_rd.k + 1)
        assert minrank.is_solution(minrank.x)
        assert np.array_equal(minrank.combination(minrank.x), small_rd.plant.e.T % 2)

    def test_permuted_and_punctured(self, small_rd):
        perm = np.array([3, 0, 1, 2, 7, 6, 5, 4])
        permuted = small_rd.permuted(perm)
        assert permuted.is_solution(permuted.plant.e, exact=True)
        punctured = small_rd.punctured(2)
        assert punctured.n == small_rd.n - 2
        assert np.array_equal(punctured.plant.e, small_rd.plant.e[:-2])


@pytest.mark.unit
class TestBruteForce:
    """Тестирование переборных оракулов"""

    def test_subspace_count(self):
        assert gaussian_binomial(4, 2, 2) == 35
        assert sum(1 for _ in iter_subspaces(4, 2, 2)) == 35

    def test_brute_force_rd(self):
        inst = gen_rd(2, 4, 6, 2, 1, seed=3)
        e = brute_force_rd(inst)
        assert e is not None
        assert inst.is_solution(e)

    def test_brute_force_minrank(self):
        inst = gen_minrank(13, 4, 4, 3, 1, planted=True, seed=8)
        x = brute_force_minrank(inst)
        assert x is not None and inst.is_solution(x)

    def test_brute_force_limit(self):
        inst = gen_minrank(13, 4, 4, 6, 1, seed=1)
        with pytest.raises(FeasibilityError):
            brute_force_minrank(inst, limit=100)


@pytest.mark.unit
class TestSerialization:
    """Тестирование формата файла экземпляра"""

    def test_rd_roundtrip_with_plant(self, small_rd):
        loaded = loads_instance(dumps_instance(small_rd))
        assert isinstance(loaded, RdInstance)
        assert loaded.field == small_rd.field
        assert np.array_equal(loaded.y, small_rd.y)
        assert loaded.is_solution(small_rd.plant.e, exact=True)
        assert fingerprint(loaded) == fingerprint(small_rd)

    def test_plant_omitted(self, small_minrank):
        data = json.loads(dumps_instance(small_minrank, include_plant=False))
        assert "plant" not in data
        loaded = loads_instance(json.dumps(data))
        assert isinstance(loaded, MinRankInstance) and loaded.x is None

    @pytest.mark.parametrize("text", [
        "not json",
        json.dumps({"format": "other"}),
        json.dumps({"format": "rankforge-instance", "type": "rd", "q": 2, "m": 3, "n": 4, "k": 1, "r": 1,
                    "basis": [[[0, 0]]], "y": []}),
        json.dumps({"format": "rankforge-instance", "type": "tensor", "q": 2, "m": 3, "n": 4, "r": 1}),
    ])
    def test_malformed(self, text):
        with pytest.raises(InstanceFormatError):
            loads_instance(text)

    async def test_save_and_load(self, small_rd, tmp_path):
        """Тест асинхронной записи и чтения файла"""
        path = tmp_path / "rd.json"
        await save_instance(str(path), small_rd, include_plant=False)
        loaded = await load_instance(str(path))
        assert loaded.plant is None
        assert loaded.is_solution(small_rd.plant.e)

    async def test_missing_file(self, tmp_path):
        with pytest.raises(InstanceFormatError):
            await load_instance(str(tmp_path / "absent.json"))
