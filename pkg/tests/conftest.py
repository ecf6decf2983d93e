import pytest

from shavis import dataio
from shavis.curves import WeierstrassModel


@pytest.fixture(scope="session")
def dataset():
    return dataio.load_dataset()


@pytest.fixture(scope="session")
def e1_52():
    return WeierstrassModel.from_list([0, 0, 0, 1, -10])


@pytest.fixture(scope="session")
def e2_364():
    return WeierstrassModel.from_list([0, 0, 0, -584, 5444])
