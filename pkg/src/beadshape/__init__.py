"""Cross-section prediction for extruded cementitious filament.

Pipeline: seven print parameters -> five dimensionless inputs -> a
residual network emitting Fourier descriptors -> a closed symmetric
contour, plus geometric features and printability screening.
"""

from .exceptions import BeadshapeError, DomainError, RangeViolation, ValidationError
from .params import (
    INPUT_BOUNDS,
    INPUT_FIELDS,
    PARAM_BOUNDS,
    PARAM_FIELDS,
    STANDARD_GRAVITY,
    ModelInputs,
    NormStats,
    PrintParams,
    check_ranges,
    denormalize,
    normalize,
    to_dimensionless,
    validate,
    validate_params,
)
from .contour import (
    area,
    canonicalize,
    check_contour,
    is_simple,
    perimeter,
    read_contour,
    resample_uniform_arc,
    signed_area,
    write_contour,
)
from .fourier import (
    FourierDescriptorTransformer,
    FourierShape,
    SampledCurve,
    fit,
    mirror_x,
    reconstruction_error,
    sample,
    uniform_grid,
)
from .printability import (
    CheckResult,
    PrintabilityReport,
    RheologyExtras,
    check_all,
    check_buckling,
    check_slug,
    check_tearing_geffrault,
    check_tearing_wolfs,
)
from .surrogate import (
    SurrogateConfig,
    build_dataset,
    lhs_sample,
    load_dataset,
    split_arrays,
    surrogate_contour,
)
from .features import FeatureSet, contact_length, extract, features_csv
from .network import (
    NetworkConfig,
    TrainReport,
    TrainedModel,
    curve_loss,
    train,
)
from .estimator import FilamentShapeRegressor
from .pipeline import predict_response

__version__ = "1.0.0"

__all__ = [
    "BeadshapeError", "DomainError", "RangeViolation", "ValidationError",
    "INPUT_BOUNDS", "INPUT_FIELDS", "PARAM_BOUNDS", "PARAM_FIELDS",
    "STANDARD_GRAVITY", "ModelInputs", "NormStats", "PrintParams",
    "check_ranges", "denormalize", "normalize", "to_dimensionless",
    "validate", "validate_params",
    "area", "canonicalize", "check_contour", "is_simple", "perimeter",
    "read_contour", "resample_uniform_arc", "signed_area", "write_contour",
    "FourierDescriptorTransformer", "FourierShape", "SampledCurve", "fit",
    "mirror_x", "reconstruction_error", "sample", "uniform_grid",
    "CheckResult", "PrintabilityReport", "RheologyExtras", "check_all",
    "check_buckling", "check_slug", "check_tearing_geffrault",
    "check_tearing_wolfs",
    "SurrogateConfig", "build_dataset", "lhs_sample", "load_dataset",
    "split_arrays", "surrogate_contour",
    "FeatureSet", "contact_length", "extract", "features_csv",
    "NetworkConfig", "TrainReport", "TrainedModel", "curve_loss", "train",
    "FilamentShapeRegressor", "predict_response",
    "__version__",
]
