"""Fréchet Radiomic Distance: radiomic feature distances, OOD detection and interpretability."""

from .corruptions import CorruptionKind, CorruptionSpec, apply, apply_to_set
from .errors import (
    CatalogError,
    ChannelError,
    DimError,
    EmptyInput,
    FileError,
    FRDError,
    InternalError,
    KernelError,
    NumericError,
    PairingError,
    ParamError,
    SampleSizeError,
)
from .imageio import Image, ImageSet, load_image, load_image_set, write_image
from .interpret import DeltaReport, ImageChangeRanking, delta_report, rank_image_changes
from .metrics import (
    DistanceResult,
    GaussianSummary,
    Metric,
    NormalizationStats,
    fit_gaussian,
    fit_normalization,
    frd,
    frd_v0,
    frechet,
    frechet_distance,
    mmd,
)
from .ood import (
    OODReport,
    OODScoreSet,
    auc,
    classify_by_reference,
    detect,
    loo_reference_scores,
    nfrd_group,
    ood_score,
    select_threshold,
)
from .radiomics import FULL_CATALOG, FeatureCatalog, FeatureMatrix, extract_features
from .wavelet import COIF1, HAAR, FilterVariant, WaveletKernel, filter_bank

__version__ = "0.1.0"
