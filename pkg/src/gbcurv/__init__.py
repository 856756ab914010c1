"""gbcurv: double-form algebra, Gauss-Bonnet curvatures, Einstein-Lovelock
tensors, and a finite-difference lattice harness that verifies their
variational and divergence identities numerically."""

from .double_forms import (
    MAX_DIM,
    CurvatureTensor,
    DoubleForm,
    bianchi_defect,
    contract,
    contract_iter,
    hodge,
    inner,
    metric_form,
    multi_indices,
    norm,
    one_form,
    power,
    transpose,
    wedge,
    zero_form,
)
from .curvature import (
    LovelockCoefficients,
    ShapeOperatorData,
    as_operator,
    einstein_lovelock,
    einstein_pq_defect,
    elementary_symmetric,
    even_intrinsic_identity,
    gauss_bonnet_even,
    gauss_bonnet_odd,
    gauss_equation,
    generalized_ricci,
    h4k_positivity_check,
    lovelock_lagrangian,
    mean_curvature_s,
    minimality_defect,
    sectional_2p,
    thorpe_oracle,
    weitzenbock_form,
)
from .models import (
    ModelSpec,
    build_model,
    constant_curvature,
    hypersurface_model,
    product,
    random_bianchi,
    random_einstein,
    random_shape_operator,
)
from .discrete import (
    MetricField,
    christoffel,
    divergence,
    ell_2k,
    hessian,
    integrate,
    riemann_at,
    selfadjointness_check,
    total_gauss_bonnet,
    variational_check,
)
from .report import CONVENTIONS, InvariantReport, emit, parse
from .rng import RNG_ID, SplitMix64

__version__ = "0.1.0"
