import pytest

from snowflake_groups import GroupParams, bfs_ball


@pytest.fixture(scope="session")
def p6():
    return GroupParams(6)


@pytest.fixture(scope="session")
def p8():
    return GroupParams(8)


@pytest.fixture(scope="session")
def p10():
    return GroupParams(10)


@pytest.fixture(scope="session")
def p12():
    return GroupParams(12)


@pytest.fixture(scope="session")
def ball6_r6(p6):
    """A small L = 6 ball reused as the brute-force distance oracle."""
    return bfs_ball(p6, 6)
