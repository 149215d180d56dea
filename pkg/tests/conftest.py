import pytest

from ampstep import gearbox, sim


@pytest.fixture(scope="session", autouse=True)
def backend_warmup():
    """Run one small circuit up front so JIT compilation of the active
    backend never lands inside a timed test."""
    sim.run_circuit(gearbox.build_gearbox(gearbox.GearboxSpec(1, 0.3)))
