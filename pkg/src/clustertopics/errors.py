"""Exception types shared across the library."""


class ClusterTopicsError(Exception):
    """Base class for every error this package raises deliberately."""


class EmptyVocabulary(ClusterTopicsError):
    """No type survived the minimum-document-frequency filter."""


class MissingSplit(ClusterTopicsError):
    """A corpus directory is missing its train or test part."""


class FormatError(ClusterTopicsError):
    """An embedding file does not parse under its declared format."""


class DimensionMismatch(ClusterTopicsError):
    """Rows of an embedding file disagree on vector dimension."""


class ZeroVector(ClusterTopicsError):
    """A zero row cannot be normalized to unit length."""


class RankDeficient(ClusterTopicsError):
    """Fewer nonzero singular values than the requested PCA dimension."""


class DegenerateInput(ClusterTopicsError):
    """More clusters requested than distinct data rows available."""


class SingularCovariance(ClusterTopicsError):
    """A regularized covariance still failed Cholesky factorization."""


class MismatchedK(ClusterTopicsError):
    """Two topic sets with different cluster counts cannot be compared."""


class ProvenanceMismatch(ClusterTopicsError):
    """Topic sets aggregated together must share provenance except seed."""
