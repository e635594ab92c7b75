import pytest

from helpers import chain_bn, chain_spec, five_node_dag_bn


@pytest.fixture
def chain():
    return chain_bn()


@pytest.fixture
def chain_analysis():
    return chain_spec()


@pytest.fixture
def five_node():
    return five_node_dag_bn()
