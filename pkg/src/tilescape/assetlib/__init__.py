"""Reference-image library: manifest index plus token/dimension retrieval."""

from .index import (
    AssetEntry,
    LibraryIndex,
    ManifestError,
    RetrievalQuery,
    RetrievalTrace,
    bundled_library,
    build_index,
    normalize,
    retrieve_asset,
    retrieve_traced,
    stopwords,
)

__all__ = [
    "AssetEntry",
    "LibraryIndex",
    "ManifestError",
    "RetrievalQuery",
    "RetrievalTrace",
    "build_index",
    "bundled_library",
    "normalize",
    "retrieve_asset",
    "retrieve_traced",
    "stopwords",
]
