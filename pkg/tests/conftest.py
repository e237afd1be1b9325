import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile(
    "default", max_examples=40, deadline=None, derandomize=True
)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def trefoil_diagram():
    from flatknot.diagram import detect_crossings
    from flatknot.fixtures import trefoil_curve

    return detect_crossings(trefoil_curve(512))


@pytest.fixture(scope="session")
def infinity_curve():
    from flatknot.pendulum import build_infinity_curve

    return build_infinity_curve(2, 1024)


@pytest.fixture(scope="session")
def critical_xi():
    from flatknot.pendulum import find_critical_xi

    return find_critical_xi(2)
