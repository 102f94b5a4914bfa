#!/usr/bin/env python3
"""
@file: tests/run_tests.py
@description: Скрипт для запуска тестов rankforge с отчетами
@dependencies: pytest, pytest-cov, pytest-xdist
@created: 2025-01-21
"""

import argparse
import os
import subprocess
import sys
from pathlib import Path


def run_command(cmd, description):
    """Запуск команды с выводом описания"""
    print(f"\n{'='*60}")
    print(f"🔄 {description}")
    print(f"{'='*60}")

    result = subprocess.run(cmd, shell=True, capture_output=True, text=True)

    if result.stdout:
        print(result.stdout)
    if result.stderr:
        print(f"⚠️ Предупреждения/Ошибки:\n{result.stderr}")

    if result.returncode != 0:
        print(f"❌ Команда завершилась с ошибкой (код: {result.returncode})")
        return False
    print(f"✅ {description} завершено успешно")
    return True


def install_dependencies():
    """Установка зависимостей проекта и инструментов тестирования"""
    deps = [
        "pytest",
        "pytest-asyncio",
        "pytest-cov",
        "pytest-xdist",  # Для параллельного запуска
    ]
    if not run_command(f"{sys.executable} -m pip install -r requirements.txt", "Установка зависимостей проекта"):
        return False
    return run_command(f"{sys.executable} -m pip install {' '.join(deps)}", "Установка зависимостей для тестирования")


def run_suite(kind, fast=False):
    """Запуск одного набора тестов (unit, integration, functional)"""
    marker = f"{kind} and not slow" if fast else kind
    cmd = f'pytest -c tests/pytest.ini tests/{kind}/ -v --tb=short -m "{marker}"'
    return run_command(cmd, f"Запуск тестов: {kind}")


def run_all_tests_with_coverage():
    """Запуск всех тестов с измерением покрытия"""
    cmd = (
        "pytest -c tests/pytest.ini tests/ -v --tb=short "
        "--cov=algebra --cov=services --cov=managers --cov=database --cov=handlers --cov=utils "
        "--cov-report=html:tests/reports/coverage_html "
        "--cov-report=term-missing"
    )
    return run_command(cmd, "Запуск всех тестов с покрытием кода")


def run_parallel_tests():
    """Запуск тестов в параллельном режиме"""
    num_cores = os.cpu_count() or 1
    cmd = f"pytest -c tests/pytest.ini tests/ -v -n {num_cores} --tb=short"
    return run_command(cmd, f"Запуск тестов в параллельном режиме ({num_cores} процессов)")


def main():
    """Основная функция"""
    parser = argparse.ArgumentParser(description="Запуск тестов rankforge")
    parser.add_argument(
        "--type",
        choices=["unit", "integration", "functional", "all", "parallel"],
        default="all",
        help="Тип тестов для запуска"
    )
    parser.add_argument("--marker", help="Запуск тестов по конкретному маркеру (linalg, attack, estimator, ...)")
    parser.add_argument("--file", help="Запуск конкретного файла тестов")
    parser.add_argument("--fast", action="store_true", help="Пропустить тесты с маркером slow")
    parser.add_argument("--install-deps", action="store_true", help="Установить зависимости для тестирования")
    parser.add_argument("--coverage", action="store_true", help="Включить измерение покрытия кода")

    args = parser.parse_args()

    # Переходим в корневую директорию проекта
    os.chdir(Path(__file__).parent.parent)

    print("🧪 rankforge - Система тестирования")
    print("=" * 60)

    if args.install_deps and not install_dependencies():
        sys.exit(1)

    if args.file:
        success = run_command(f"pytest -c tests/pytest.ini {args.file} -v --tb=long", f"Запуск {args.file}")
    elif args.marker:
        success = run_command(f"pytest -c tests/pytest.ini tests/ -v -m {args.marker} --tb=short",
                              f"Запуск тестов с маркером '{args.marker}'")
    elif args.type == "parallel":
        success = run_parallel_tests()
    elif args.type == "all" and args.coverage:
        success = run_all_tests_with_coverage()
    elif args.type == "all":
        success = True
        for kind in ("unit", "integration", "functional"):
            success &= run_suite(kind, args.fast)
    else:
        success = run_suite(args.type, args.fast)

    print("\n" + "="*60)
    if success:
        print("🎉 Все тесты завершены успешно!")
        coverage_html = Path("tests/reports/coverage_html/index.html")
        if coverage_html.exists():
            print(f"  • HTML отчет покрытия: {coverage_html}")
    else:
        print("❌ Некоторые тесты завершились с ошибками!")
        sys.exit(1)


if __name__ == "__main__":
    main()
