import json
import random
from pathlib import Path

import pytest

from jsonlens.jsonc import parse

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def produce_schema():
    from jsonlens.schema import load_schema

    return load_schema((FIXTURES / "produce.schema.json").read_text())


@pytest.fixture(scope="session")
def chart_schema():
    from jsonlens.schema import load_schema

    return load_schema((FIXTURES / "chart.schema.json").read_text())


@pytest.fixture(scope="session")
def tracery_schema():
    from jsonlens.schema import load_schema

    return load_schema((FIXTURES / "tracery.schema.json").read_text())


@pytest.fixture(scope="session")
def cyclic_schema():
    from jsonlens.schema import load_schema

    return load_schema((FIXTURES / "cyclic.schema.json").read_text())


@pytest.fixture(scope="session")
def corpus() -> list[str]:
    return [p.read_text(encoding="utf-8") for p in sorted((FIXTURES / "corpus").glob("*.jsonc"))]


# --- deterministic generators shared by property suites ---


def random_json_value(rnd: random.Random, depth: int = 3):
    kinds = ["int", "float", "str", "bool", "null"]
    if depth > 0:
        kinds += ["obj", "arr", "obj", "arr"]
    kind = rnd.choice(kinds)
    if kind == "int":
        return rnd.randint(-999, 999)
    if kind == "float":
        return round(rnd.uniform(-50, 50), 2)
    if kind == "str":
        return "".join(rnd.choice("ab cd_é0") for _ in range(rnd.randint(0, 6)))
    if kind == "bool":
        return rnd.random() < 0.5
    if kind == "null":
        return None
    if kind == "obj":
        # distinct keys so key paths stay invertible
        n = rnd.randint(0, 4)
        return {f"k{i}{rnd.choice('xyz')}": random_json_value(rnd, depth - 1) for i in range(n)}
    return [random_json_value(rnd, depth - 1) for _ in range(rnd.randint(0, 4))]


def random_document_text(rnd: random.Random) -> str:
    value = random_json_value(rnd)
    if rnd.random() < 0.5:
        return json.dumps(value, indent=2, ensure_ascii=False)
    return json.dumps(value, ensure_ascii=False)


def random_well_formed_tree(rnd: random.Random):
    tree = parse(random_document_text(rnd))
    assert tree.is_well_formed
    return tree
