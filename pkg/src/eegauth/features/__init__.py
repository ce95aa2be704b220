from .ar import ar_features, burg
from .combine import ReferenceStats, combine_features
from .extract import extract_features
from .interchange import (
    export_embeddings,
    import_embeddings,
    read_embeddings_binary,
    write_embeddings_binary,
)
from .psd import psd_features, welch_psd_matrix
from .spec import ArSpec, FeatureSpec, FeatureVector, PsdSpec, check_same_feature_id

__all__ = [
    "ArSpec",
    "FeatureSpec",
    "FeatureVector",
    "PsdSpec",
    "ReferenceStats",
    "ar_features",
    "burg",
    "check_same_feature_id",
    "combine_features",
    "export_embeddings",
    "extract_features",
    "import_embeddings",
    "psd_features",
    "read_embeddings_binary",
    "welch_psd_matrix",
    "write_embeddings_binary",
]
