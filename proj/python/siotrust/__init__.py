"""Trust management over rating graphs: Hellinger friendship networks,
socially regularized logistic matrix factorization, hold-out metrics and a
hostile-environment simulator."""

from ._core import (
    DataError,
    DistanceMatrix,
    DivergenceError,
    LatentFactors,
    Predictions,
    SocialBuild,
    SocialNetwork,
    TrainConfig,
    TrustGraph,
    TrustPattern,
    binary_trust_pattern,
    build_social_network,
    build_social_network_percentile,
    evaluate,
    load_factors,
    predict,
    predict_blended,
    rank_trustees,
    read_ratings_tsv,
    read_ratings_tsv_file,
    save_factors,
    simulate,
    train,
    trust_pattern,
    write_ratings_tsv,
    __version__,
)

__all__ = [
    "DataError",
    "DistanceMatrix",
    "DivergenceError",
    "LatentFactors",
    "Predictions",
    "SocialBuild",
    "SocialNetwork",
    "TrainConfig",
    "TrustGraph",
    "TrustPattern",
    "binary_trust_pattern",
    "build_social_network",
    "build_social_network_percentile",
    "evaluate",
    "load_factors",
    "predict",
    "predict_blended",
    "rank_trustees",
    "read_ratings_tsv",
    "read_ratings_tsv_file",
    "save_factors",
    "simulate",
    "train",
    "trust_pattern",
    "write_ratings_tsv",
    "__version__",
]
