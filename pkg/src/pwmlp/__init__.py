"""Design multilevel PWM waveforms with prescribed harmonic content.

The waveform-design problem -- pick one of m admissible levels for each of
N time samples so that chosen Fourier coefficients hit their targets and
the total harmonic distortion is near-minimal -- is relaxed to a linear
program over row-stochastic assignment matrices, solved to a vertex with a
two-phase revised simplex, and quantized back onto the level grid by
nearest-level clamping.  Every produced design ships with certificates
bounding the constraint residual and energy perturbation introduced by the
clamping step.

Typical use::

    from pwmlp import PwmDesigner

    designer = PwmDesigner(levels=[-2, 0, 2], n_samples=2048)
    designer.fit({1: 1 - 1j, 5: 0, 7: 0})
    designer.thd_, designer.waveform_

or, functionally, :func:`pwmlp.design`.  The ``pwmlp`` command-line tool
exposes the same pipeline plus the bundled benchmark presets.
"""

from . import exceptions
from .config import PRESETS, RunConfig, load_config, preset
from .design import LevelQuantizer, PwmDesigner, design
from .formulation import PwmLp, apply_half_wave, build_lp, formulate, recover_waveform
from .model import (
    AssignmentMatrix,
    BoundCertificate,
    DesignResult,
    HarmonicSpec,
    LevelSet,
    Waveform,
    harmonic_spec,
    validate_level_set,
    validate_spec,
)
from .refine import ClampProfile, certify, clamp, clamp_profile, delta_constant, jensen_gap
from .simplex import (
    DenseColumns,
    LpSolution,
    SimplexSolver,
    SolveStatus,
    StandardLp,
    solve,
)
from .spectrum import FourierRow, energy, fourier_row, full_spectrum, harmonic, thd

__version__ = "0.1.0"

__all__ = [
    "AssignmentMatrix",
    "BoundCertificate",
    "ClampProfile",
    "DenseColumns",
    "DesignResult",
    "FourierRow",
    "HarmonicSpec",
    "LevelQuantizer",
    "LevelSet",
    "LpSolution",
    "PRESETS",
    "PwmDesigner",
    "PwmLp",
    "RunConfig",
    "SimplexSolver",
    "SolveStatus",
    "StandardLp",
    "Waveform",
    "apply_half_wave",
    "build_lp",
    "certify",
    "clamp",
    "clamp_profile",
    "delta_constant",
    "design",
    "energy",
    "exceptions",
    "formulate",
    "fourier_row",
    "full_spectrum",
    "harmonic",
    "harmonic_spec",
    "jensen_gap",
    "load_config",
    "preset",
    "recover_waveform",
    "solve",
    "thd",
    "validate_level_set",
    "validate_spec",
]
