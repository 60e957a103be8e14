import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pachgap import kernels  # noqa: E402
from pachgap.complex_maps import PLMapInstance, sample_generic_embedding  # noqa: E402
from pachgap.lattice import build_subspace_lattice  # noqa: E402


@pytest.fixture(scope="session")
def fano():
    return build_subspace_lattice(3, 2)


@pytest.fixture(scope="session")
def fano_map(fano):
    E = sample_generic_embedding(fano, 2, seed=42, verify_mode="sampled")
    return PLMapInstance(fano, E)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
