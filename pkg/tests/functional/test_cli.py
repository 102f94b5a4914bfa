"""
@file: tests/functional/test_cli.py
@description: Функциональные тесты командной строки: gen -> solve -> verify, estimate, коды выхода
@dependencies: pytest
@created: 2025-01-21
"""

import json

import pytest

from main import main


def _json_out(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


@pytest.mark.functional
class TestRdWorkflow:
    """Полный сценарий для Rank Decoding"""

    def test_gen_solve_verify(self, tmp_path, cli_paths, capsys):
        """Тест: сгенерированный экземпляр решается и решение проходит verify"""
        path = str(tmp_path / "rd.json")
        assert main(cli_paths + ["--seed", "11", "gen", "rd", "--q", "2", "--m", "7", "--n", "8",
                                 "--k", "3", "--r", "2", "--out", path]) == 0
        capsys.readouterr()

        assert main(cli_paths + ["--seed", "1", "solve", path, "--format", "json"]) == 0
        report = _json_out(capsys)
        assert report["verified"] is True
        assert report["variant"] == "overdetermined"
        assert report["params"] == {"q": 2, "m": 7, "n": 8, "k": 3, "r": 2}

        assert main(cli_paths + ["verify", path, "--solution", report["solution"], "--format", "json"]) == 0
        assert _json_out(capsys)["valid"] is True
        assert (tmp_path / "runs.db").exists()

    def test_wrong_solution(self, tmp_path, cli_paths, capsys):
        path = str(tmp_path / "rd.json")
        main(cli_paths + ["--no-db", "gen", "rd", "--q", "2", "--m", "7", "--n", "8", "--k", "3", "--r", "2",
                          "--out", path])
        zero = ";".join(["0,0,0,0,0,0,0"] * 8)
        assert main(cli_paths + ["--no-db", "verify", path, "--solution", zero]) == 6

    def test_malformed_solution(self, tmp_path, cli_paths):
        path = str(tmp_path / "rd.json")
        main(cli_paths + ["--no-db", "gen", "rd", "--q", "2", "--m", "7", "--n", "8", "--k", "3", "--r", "2",
                          "--out", path])
        assert main(cli_paths + ["--no-db", "verify", path, "--solution", "1,0;x"]) == 11

    def test_same_seed_same_file(self, tmp_path, cli_paths):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for path in (first, second):
            main(cli_paths + ["--no-db", "--seed", "7", "gen", "rd", "--q", "2", "--m", "5", "--n", "7",
                              "--k", "2", "--r", "2", "--with-plant", "--out", str(path)])
        assert first.read_bytes() == second.read_bytes()


@pytest.mark.functional
class TestStoredModulus:
    """Повторное использование модуля F_{q^m} из настроек"""

    GEN = ["gen", "rd", "--q", "2", "--m", "7", "--n", "8", "--k", "3", "--r", "2"]

    def test_last_modulus_reused(self, tmp_path, cli_paths):
        """Тест: gen --modulus last берет модуль предыдущего gen с теми же q и m"""
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main(cli_paths + self.GEN + ["--modulus", "1,0,0,1,0,0,0,1", "--out", str(first)]) == 0
        assert main(cli_paths + ["--seed", "3"] + self.GEN + ["--modulus", "last", "--out", str(second)]) == 0
        assert json.loads(second.read_text())["modulus"] == [1, 0, 0, 1, 0, 0, 0, 1]
        assert json.loads(first.read_text())["modulus"] == [1, 0, 0, 1, 0, 0, 0, 1]

    def test_nothing_stored(self, tmp_path, cli_paths):
        assert main(cli_paths + self.GEN + ["--modulus", "last", "--out", str(tmp_path / "a.json")]) == 2

    def test_needs_database(self, tmp_path, cli_paths):
        assert main(cli_paths + ["--no-db"] + self.GEN + ["--modulus", "last", "--out", str(tmp_path / "a.json")]) == 2

    def test_malformed_modulus(self, tmp_path, cli_paths):
        assert main(cli_paths + ["--no-db"] + self.GEN + ["--modulus", "1,x", "--out", str(tmp_path / "a.json")]) == 2


@pytest.mark.functional
class TestMinRankWorkflow:
    """Сценарий для MinRank"""

    def test_gen_solve(self, tmp_path, cli_paths, capsys):
        path = str(tmp_path / "minrank.json")
        assert main(cli_paths + ["--no-db", "--seed", "5", "gen", "minrank", "--q", "13", "--m", "7", "--n", "7",
                                 "--K", "5", "--r", "2", "--out", path]) == 0
        capsys.readouterr()

        assert main(cli_paths + ["--no-db", "solve", path, "--auto", "--format", "json"]) == 0
        report = _json_out(capsys)
        assert report["variant"] == "sm-minrank"
        assert report["knobs"] == {"b": 1, "n_prime": 7}

        assert main(cli_paths + ["--no-db", "verify", path, "--solution", report["solution"]]) == 0


@pytest.mark.functional
class TestEstimateCommand:
    """Команда estimate"""

    def test_rd_minimum(self, cli_paths, capsys):
        assert main(cli_paths + ["--no-db", "estimate", "rd", "--m", "79", "--n", "94", "--k", "47", "--r", "5",
                                 "--format", "json"]) == 0
        report = _json_out(capsys)
        assert report["format"] == 1
        assert report["minimum"]["log2_cost"] == pytest.approx(70.23, abs=1.0)

    def test_sweep_is_csv(self, cli_paths, capsys):
        assert main(cli_paths + ["--no-db", "estimate", "sweep", "--r", "5", "--n-min", "90", "--n-max", "96"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "n,log2_cost"
        ns = [int(line.split(",")[0]) for line in lines[1:]]
        assert 94 in ns
        assert all(n % 2 == 0 and 90 <= n <= 96 for n in ns)

    def test_missing_parameters(self, cli_paths):
        assert main(cli_paths + ["--no-db", "estimate", "rd", "--m", "79"]) == 2


@pytest.mark.functional
class TestExperimentCommand:
    """Команда experiment"""

    def test_single_dexp_cell(self, cli_paths, capsys):
        assert main(cli_paths + ["experiment", "dexp", "--m", "7", "--n", "7", "--K", "5", "--r", "2", "--b", "1",
                                 "--trials", "1"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("q,m,n,K,r,b,")
        assert "# match_fraction=1.0000" in out

        assert main(cli_paths + ["experiment", "dexp", "--list", "--format", "json"]) == 0
        assert len(_json_out(capsys)["cells"]) == 1


@pytest.mark.functional
class TestUsageErrors:
    """Ошибки использования возвращают код 2"""

    @pytest.mark.parametrize("argv", [
        [],
        ["gen", "rd", "--q", "2", "--m", "7", "--n", "8", "--k", "3", "--r", "0"],
        ["gen", "rd", "--q", "2", "--m", "7", "--n", "8", "--r", "2"],
        ["experiment", "dexp", "--trials", "0"],
        ["experiment", "dexp", "--m", "7"],
        ["--threads", "0", "estimate", "sweep", "--r", "5"],
        ["estimate", "rd", "--solver", "gauss"],
    ])
    def test_usage(self, cli_paths, argv):
        assert main(cli_paths + ["--no-db"] + argv) == 2

    def test_auto_with_knobs(self, tmp_path, cli_paths):
        path = str(tmp_path / "rd.json")
        main(cli_paths + ["--no-db", "gen", "rd", "--q", "2", "--m", "7", "--n", "8", "--k", "3", "--r", "2",
                          "--out", path])
        assert main(cli_paths + ["--no-db", "solve", path, "--auto", "--a", "1"]) == 2

    def test_missing_instance(self, tmp_path, cli_paths):
        assert main(cli_paths + ["--no-db", "solve", str(tmp_path / "absent.json")]) == 11
