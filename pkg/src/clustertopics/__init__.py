"""Topic modeling by clustering pre-trained word embeddings."""

from .corpus import (
    Document,
    Vocabulary,
    build_vocabulary,
    load_20ng,
    load_lines,
    load_stopwords,
    preprocess,
    split_documents,
)
from .embeddings import (
    EmbeddingTable,
    load_embeddings,
    normalize_rows,
    pca_reduce,
    save_word2vec_text,
)
from .weighting import (
    WeightVector,
    scheme_weights,
    tf_df_weights,
    tf_idf_weights,
    tf_weights,
    uniform_weights,
)
from .clustering import (
    ClusterModel,
    GmmParams,
    fit_gmm,
    fit_kmeans,
    fit_kmedoids,
    fit_spherical_kmeans,
    load_model,
    save_model,
)
from .topics import (
    Provenance,
    Topic,
    TopicSet,
    extract_top_j,
    jaccard,
    load_topics_json,
    rerank,
    save_topics_json,
    save_topics_text,
)
from .evaluation import (
    CooccurrenceIndex,
    NpmiReport,
    build_index,
    evaluate_run,
    npmi,
    npmi_pair,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
