"""Single-qubit polarization tomography.

Measured counts or intensities become a Stokes vector. Physical data give the
density matrix directly. Unphysical data are repaired either by a
Nelder-Mead fit in T-matrix space, seeded analytically, or by radial
projection onto the Bloch sphere.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .core import (
    DensityMatrix,
    StokesVector,
    density_from_stokes,
    eigenvalues,
    fidelity,
    is_physical,
    purity,
    stokes_from_density,
)
from .errors import (
    DegenerateParametersError,
    EmptyBasisError,
    EmptyEnsembleError,
    InvalidInputError,
    OptimizerAbort,
    ParseError,
    PureStateLimitError,
    RecordError,
    SchemaError,
    TomofitError,
    UnphysicalInputError,
    ValidationError,
    ZeroIntensityError,
)
from .ingest import (
    CountRecord,
    IntensityRecord,
    SixCountRecord,
    parse_records,
    stokes_from_counts,
    stokes_from_intensities,
    stokes_from_record,
    stokes_from_six_counts,
)
from .mle import (
    FitOptions,
    FitResult,
    cost_count_likelihood,
    cost_stokes_lsq,
    fit,
    make_objective,
    optimize,
)
from .projection import fit_by_projection, physical_density_via_projection, project_to_bloch_ball
from .tmatrix import (
    SeedReport,
    TParams,
    density_from_t,
    is_mixed,
    seed_from_stokes,
    t2_from_t1,
    t_from_pure_angles,
)
