import pytest

from invpow.ansatz import select_B, solve, solve_B
from invpow.potential import Channel, Potential

# mpmath (30 digits) roots of the constraint for A=4, C=2, D=-2
B_3D = 5.87001542822607030552754702144
B_2D = 5.65033227924409770230097394092


def ref_case(dim):
    ch = Channel(dim, 0)
    B = select_B(solve_B(4.0, 2.0, -2.0, ch))
    return Potential(4.0, B, 2.0, -2.0), ch


@pytest.fixture(params=[3, 2], ids=["3d", "2d"])
def ref(request):
    return ref_case(request.param)


@pytest.fixture
def ref3d():
    return ref_case(3)


@pytest.fixture
def ref2d():
    return ref_case(2)


@pytest.fixture
def sol3d(ref3d):
    return solve(*ref3d)


@pytest.fixture
def sol2d(ref2d):
    return solve(*ref2d)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
