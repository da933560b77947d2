"""
Pytest configuration file.
This file is automatically loaded by pytest and can be used to configure the test environment.
"""

import os
import random
import sys
import tempfile

# Add the project root directory to the Python path
# This allows the tests to import modules from the app package
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, project_root)

# Keep the test run away from the user's settings file
_settings_dir = tempfile.mkdtemp(prefix='pn-slicer-test-')
os.environ.setdefault('PN_SLICER_SETTINGS', os.path.join(_settings_dir, 'settings.json'))

# Import pytest fixtures that should be available to all tests
import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from app.config import BUNDLED_NETS_FOLDER
from app.models.generator import random_marked_net
from app.models.net import MarkedPetriNet, Marking, make_net

hypothesis_settings.register_profile(
    'workbench', max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
hypothesis_settings.load_profile('workbench')

FIXTURES_FOLDER = os.path.join(BUNDLED_NETS_FOLDER, 'fixtures')


@pytest.fixture(scope="session", autouse=True)
def setup_test_environment():
    """
    Set up the test environment.
    This fixture runs automatically before any tests and sets up the environment.
    """
    print(f"Setting up test environment")
    print(f"Project root: {project_root}")
    print(f"Settings file: {os.environ['PN_SLICER_SETTINGS']}")

    yield

    print(f"Cleaning up test environment")


@pytest.fixture
def net_a():
    """p1 -> t1 -> p2 with one token on p1"""
    net = make_net(['p1', 'p2'], ['t1'], [('p1', 't1'), ('t1', 'p2')], name='NetA')
    return MarkedPetriNet(net, Marking({'p1': 1}))


@pytest.fixture
def net_b():
    """p1 -> t1 -> p3 and p2 -> t2 -> p3 with one token on p1"""
    net = make_net(['p1', 'p2', 'p3'], ['t1', 't2'],
                   [('p1', 't1'), ('t1', 'p3'), ('p2', 't2'), ('t2', 'p3')], name='NetB')
    return MarkedPetriNet(net, Marking({'p1': 1}))


@pytest.fixture
def net_dead():
    """p1 -> t1 -> p2 without tokens"""
    net = make_net(['p1', 'p2'], ['t1'], [('p1', 't1'), ('t1', 'p2')], name='NetDead')
    return MarkedPetriNet(net, Marking())


@pytest.fixture
def fixture_file():
    """Path of a bundled fixture document by net name"""
    def path(name):
        return os.path.join(FIXTURES_FOLDER, f"{name}.pnml")
    return path


def _random_suite(count, seed, ordinary=False, max_places=6, max_transitions=6):
    rng = random.Random(seed)
    suite = []
    for i in range(count):
        s = random_marked_net(rng, max_places, max_transitions, ordinary=ordinary,
                              name=f"r{seed}_{i}")
        places = s.net.sorted_places()
        q = frozenset(rng.sample(places, rng.randint(1, min(3, len(places)))))
        suite.append((s, q))
    return suite


@pytest.fixture
def random_suite():
    """Seeded (net, criterion) pairs for the oracle-backed suites"""
    return _random_suite
