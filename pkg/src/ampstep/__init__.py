"""Amplitude-based unit-step-function circuits with exact state-vector simulation.

Subpackages and modules:
    backend   -- numba/numpy kernel selection (AMPSTEP_BACKEND env flag)
    circuits  -- gate/circuit IR, Toffoli decompositions, multiplexed Ry,
                 ZSX basis rewriting, OpenQASM 2.0 export
    sim       -- dense state-vector simulation, dense-matrix oracle,
                 post-selection and shot sampling
    gearbox   -- d-step gearbox builders and closed-form analytics
    amparith  -- amplitude addition / subtraction / composition circuits
    fourier   -- Fourier-series approximation, cos^2 rewriting, compilation
                 to amplitude circuits, positive/negative splitting
    cli       -- command-line front end (sweep, fourier, validate, export)
"""

from ampstep.backend import active_backend, set_backend

__all__ = ["active_backend", "set_backend"]
__version__ = "0.1.0"
