"""Exact-arithmetic slope and flop-slope stability engine for asymptotically
log del Pezzo surface pairs."""

from .mpoly import (
    MPoly,
    MissingVariableError,
    UnknownVariableError,
    ZeroPolynomialError,
    limit_at_zero_plus,
    parse_poly,
    poly_eval,
    poly_substitute,
)
from .roots import (
    AlgebraicRoot,
    Interval,
    Sign,
    SignAnalysis,
    isolate_real_roots,
    sign_on_interval,
)
from .surface import (
    BetaFunctionClass,
    BlowupPoint,
    DivisorClass,
    PicardLattice,
    SurfacePair,
    adjunction_genus,
    amp_region,
    blow_up,
    intersect,
    is_ample,
    k_plus_c_squared,
    log_polarization,
    proper_transform,
    pseff_threshold_certificate,
    seshadri,
)
from .dnc import (
    DNCConfig,
    FutakiPoly,
    general_futaki,
    p_ample_window,
    slope_futaki,
    slope_verdict,
    triple_products,
)
from .flop import (
    FlopSpec,
    FlopTriple,
    blowup_oracle_triple,
    flop_curve_pairings,
    flop_futaki,
    flop_triple_product,
    flop_window,
)
from .analyzer import (
    closed_form_small_beta,
    flop_destabilize,
    maeda_destabilize,
    slope_destabilize,
    small_beta_bound,
    theorem_check,
    unstable_beta_range,
)
from .stability import PolyInterval, SignRange, StabilityReport, Verdict, Witness
from . import catalog

__version__ = "0.1.0"
