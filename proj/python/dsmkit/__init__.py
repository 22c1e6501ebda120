"""Count-based distributional semantic models: training, evaluation, RSA."""

from ._core import (
    BenchmarkDataset,
    CooccurrenceMatrix,
    DsmError,
    EmbeddingSpace,
    Rsm,
    Vocabulary,
    build_rsm,
    build_vocabulary,
    build_vocabulary_from_corpus,
    cosine,
    dunn_test,
    evaluate,
    evaluate_file,
    extract_cooccurrence,
    extract_cooccurrence_from_corpus,
    kmeans,
    kruskal_wallis,
    load_dataset,
    load_embeddings,
    load_matrix,
    load_vocabulary,
    log_entropy,
    pool_tokens,
    ppmi,
    prune_contexts,
    purity,
    rsa_correlate,
    sample_strata,
    spearman,
    subsample,
    svd_embeddings,
    train_ri,
    truncated_svd,
    wilcoxon_signed_rank,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkDataset",
    "CooccurrenceMatrix",
    "DsmError",
    "EmbeddingSpace",
    "Rsm",
    "Vocabulary",
    "build_rsm",
    "build_vocabulary",
    "build_vocabulary_from_corpus",
    "cosine",
    "dunn_test",
    "evaluate",
    "evaluate_file",
    "extract_cooccurrence",
    "extract_cooccurrence_from_corpus",
    "kmeans",
    "kruskal_wallis",
    "load_dataset",
    "load_embeddings",
    "load_matrix",
    "load_vocabulary",
    "log_entropy",
    "pool_tokens",
    "ppmi",
    "prune_contexts",
    "purity",
    "rsa_correlate",
    "sample_strata",
    "spearman",
    "subsample",
    "svd_embeddings",
    "train_ri",
    "truncated_svd",
    "wilcoxon_signed_rank",
]
