"""Band structure, Zak phases, and edge states of a one-dimensional massive
Dirac operator with a periodic array of U(2) point interactions."""

from .coupling import (
    Coupling,
    Permeability,
    SymmetryClass,
    chiral_impermeable,
    classify_symmetry,
    coupling_from_dict,
    coupling_from_matrix,
    coupling_matrix,
    family_aiii,
    family_bdi,
    family_d,
    make_coupling,
    permeability,
    pseudo_periodic,
)
from .kurasov import (
    SINGULAR,
    Strengths,
    coupling_to_strengths,
    delta_invariant,
    delta_matrix,
    interaction_matrix,
    strengths_to_coupling,
)
from .spectral import (
    BandStructure,
    Gap,
    ZeroModeReport,
    band_structure,
    check_spectral_symmetries,
    default_window,
    spectral_value,
    spectral_value_matrix_form,
    wavenumber,
    zero_modes,
)
from .bloch import (
    BlochState,
    Overlap,
    bloch_state,
    evaluate_spinor,
    evaluate_zak_gauge,
    state_norm_sq,
    zak_gauge_overlap,
)
from .zak import (
    ZakResult,
    make_family_coupling,
    translated_cell_zak,
    translated_zak,
    zak_phase,
    zak_sweep,
)
from .boundary import (
    BbcVerdict,
    EdgeState,
    EigenSplit,
    TransferMatrix,
    band_condition,
    bbc_verdict,
    boundary_spectral_value,
    edge_counts,
    edge_states,
    edge_sweep,
    propagator,
    sign_factor,
    split_eigenpairs,
    transfer_matrix,
)

__version__ = "0.1.0"
