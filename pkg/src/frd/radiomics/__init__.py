from .catalog import (
    FAMILY_FEATURES,
    FULL_CATALOG,
    CatalogEntry,
    Family,
    FeatureCatalog,
    parse_families,
    parse_variants,
)
from .discretize import DEFAULT_BIN_COUNT, DiscretizedImage, discretize
from .extract import FeatureMatrix, extract_features, extract_image
from .firstorder import first_order_features
from .glcm import glcm_features
from .gldm import gldm_features
from .glrlm import glrlm_features
from .glszm import glszm_features
from .ngtdm import ngtdm_features

__all__ = [
    "FAMILY_FEATURES",
    "FULL_CATALOG",
    "CatalogEntry",
    "DEFAULT_BIN_COUNT",
    "DiscretizedImage",
    "Family",
    "FeatureCatalog",
    "FeatureMatrix",
    "discretize",
    "extract_features",
    "extract_image",
    "first_order_features",
    "glcm_features",
    "gldm_features",
    "glrlm_features",
    "glszm_features",
    "ngtdm_features",
    "parse_families",
    "parse_variants",
]
