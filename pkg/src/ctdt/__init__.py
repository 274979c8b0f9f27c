"""First-order continuous- and discrete-time LTI systems: design, simulation, analysis."""
from .blocks import BlockGraph, Edge, Node, NodeKind, canonical, compose, flatten, parse_netlist, simulate_graph
from .calculus import backward_difference, error_order, rect_integrate, trap_integrate
from .ct import evaluate_impulse, freq_response, hpf, impulse_model, lpf
from .discretize import (
    backward_euler,
    dt_hpf,
    dt_lpf,
    exact_map,
    inv_map,
    matched_pz,
    negative_pole_filter,
    retune,
    tustin,
)
from .dt import DifferenceEquation, Sequence, dt_freq_response, impulse_response_dt, simulate, step_response_dt
from .errors import LTIError
from .rational import (
    Domain,
    PoleZeroGain,
    Polynomial,
    RationalTF,
    Root,
    cascade,
    from_pzg,
    is_stable,
    partial_fractions,
    poly_roots,
    to_pzg,
)
from .spectral import dft, dtft_sample, leakage_ratio, z_transform_finite

__version__ = "0.1.0"
