import numpy as np
import pytest

from fusionframes import FusionFrame

SQ2 = np.sqrt(2.0)


def riesz_r3(w1=1.0, w2=1.0):
    """span{(1,1,0)} and {0} x R^2 in R^3."""
    return FusionFrame.from_spans([[[1, 1, 0]], [[0, 1, 0], [0, 0, 1]]], [w1, w2])


def orthogonal_r3(w1=1.0, w2=1.0):
    """R^2 x {0} and {0} x {0} x R."""
    return FusionFrame.from_spans([[[1, 0, 0], [0, 1, 0]], [[0, 0, 1]]], [w1, w2])


def excess_r4():
    e = np.eye(4)
    return FusionFrame.from_spans([[e[0], e[1]], [e[0], e[2]], [e[3]]])


def enlarged_r3():
    return FusionFrame.from_spans([[[1, 1, 0], [0, 1, 1]], [[0, 1, 0], [0, 0, 1]]])


def split_r5(a=(1, 1, 1, 1, 1, 2)):
    a1, a2, a3, a4, a5, a6 = a
    e = np.eye(5)
    return FusionFrame.from_spans([
        [e[0]],
        [a1 * e[0] + a2 * e[1]],
        [a1 * e[0] + a2 * e[1]],
        [a3 * e[2] + a4 * e[3], e[4]],
        [a5 * e[2] + a6 * e[3]],
    ])


def split_r5_operator(a=(1, 1, 1, 1, 1, 2)):
    a1, a2, a3, a4, a5, a6 = a
    return np.array([
        [a2, -a1, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, a4, -a3, 0],
        [0, 0, a6, -a5, 0],
        [0, 0, 0, 0, 1],
    ], dtype=float)


def lines_r2(theta=np.pi / 6, psi=np.pi / 2):
    return FusionFrame.from_spans([[[1, 0]], [[np.cos(theta), np.sin(theta)]],
                                   [[np.cos(psi), np.sin(psi)]]])


def duplicated_line():
    return FusionFrame.from_spans([[[1, 0]], [[1, 0]], [[0, 1]]])


EXAMPLE_U = np.array([[1, 0, 0], [1, -1, 0], [1, -1, 1]], dtype=float)
ROTATION_K = np.array([[1, 0, 1], [0, SQ2, 0], [-1, 0, 1]]) / SQ2


def family_T(a1, a2, a3, a4, a5):
    return np.array([[a1, 0, 0], [a2, -a2, a3], [a4, -a4, a5]], dtype=float)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance report ----------------------------------------------------------

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else "")
        lines.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
