import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from semiprime import build_prime_table  # noqa: E402


@pytest.fixture(scope="session")
def table_1e4():
    return build_prime_table(10**4)


@pytest.fixture(scope="session")
def table_half_1e6():
    return build_prime_table(5 * 10**5)
