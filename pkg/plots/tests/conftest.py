"""Golden inputs: CSV logs and the scenario files that produced them, checked
in under data/ so these tests exercise the real file contracts end to end."""

import pathlib

import pytest

from snsik_plots import read_log_file, read_scenario_file

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def planar_csv():
    return DATA / "planar6r.csv"


@pytest.fixture(scope="session")
def planar_scn():
    return DATA / "planar6r.scn"


@pytest.fixture(scope="session")
def spatial_csv():
    return DATA / "lwr7r.csv"


@pytest.fixture(scope="session")
def spatial_scn():
    return DATA / "lwr7r.scn"


@pytest.fixture(scope="session")
def planar_log(planar_csv):
    return read_log_file(planar_csv)


@pytest.fixture(scope="session")
def planar_meta(planar_scn):
    return read_scenario_file(planar_scn)


@pytest.fixture(scope="session")
def spatial_log(spatial_csv):
    return read_log_file(spatial_csv)


@pytest.fixture(scope="session")
def spatial_meta(spatial_scn):
    return read_scenario_file(spatial_scn)
