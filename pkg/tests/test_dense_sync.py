# End-to-end agreement between the tableau and a dense state vector on the
# smallest three-color torus, both bases, through random Pauli/measurement
# trajectories. Heavyweight but decisive.

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest  # noqa: E402

from fullsync_check import run  # noqa: E402


@pytest.mark.slow
@pytest.mark.parametrize("basis", ["zero", "plus"])
def test_full_torus_dense_sync(basis):
    run(basis, nsteps=30, seed=7, verbose=False)
