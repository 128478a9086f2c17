# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

import numpy as np
import pytest

from shapegeo.mesh import make_icosphere

CUBE_OFF = """OFF
# unit cube, outward faces
8 12 18
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
3 0 2 1
3 0 3 2
3 4 5 6
3 4 6 7
3 0 1 5
3 0 5 4
3 3 7 6
3 3 6 2
3 0 4 7
3 0 7 3
3 1 2 6
3 1 6 5
"""


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run the long geodesic experiments"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long experiment run, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def icosahedron():
    return make_icosphere(0)


@pytest.fixture(scope="session")
def sphere1():
    return make_icosphere(1)


@pytest.fixture(scope="session")
def sphere2():
    return make_icosphere(2)


@pytest.fixture(scope="session")
def sphere3():
    return make_icosphere(3)


@pytest.fixture
def cube_file(tmp_path):
    path = tmp_path / "cube.off"
    path.write_text(CUBE_OFF, encoding="utf-8")
    return path


@pytest.fixture
def cube(cube_file):
    from shapegeo.meshfile import load_mesh

    return load_mesh(cube_file)


@pytest.fixture
def rng():
    return np.random.default_rng(20260418)


@pytest.fixture
def rotation(rng):
    """A proper rotation matrix from the QR decomposition of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q