"""共享夹具与 slow 标记"""
import pytest

from freight_engine.scenarios.engine import base_case_sample
from freight_engine.schemas.solver import SolverParams
from freight_engine.tests.factories import intermodal_demand, intermodal_network, parallel_links_network


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="运行耗时较长的统计验收测试")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 耗时较长，需 --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def tight_params() -> SolverParams:
    """用于对照解析解的严格收敛参数"""
    return SolverParams(gap_tol=1e-12, max_iters=5000)


@pytest.fixture
def parallel_net():
    return parallel_links_network()


@pytest.fixture
def toy_net():
    return intermodal_network()


@pytest.fixture
def toy_demand():
    return intermodal_demand()


@pytest.fixture
def toy_base(toy_net):
    return base_case_sample(toy_net)
