"""scikit-learn style front end.

>>> import numpy as np
>>> est = ConceptLattice(workers=1).fit(np.eye(3, dtype=bool))
>>> est.n_concepts_
5
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .context import FormalContext, to_bits
from .engine import BACKENDS, KERNELS, enumerate_concepts
from .lattice import build_lattice

__all__ = ["ConceptLattice", "check_binary"]


def check_binary(X, *, n_features=None) -> np.ndarray:
    """Validate a 2-D 0/1 (or boolean) matrix and return it as bool."""
    X = check_array(X, dtype=None, ensure_min_samples=0, ensure_min_features=0)
    if X.dtype != bool:
        if not np.isin(X, (0, 1)).all():
            raise ValueError("incidence matrix must contain only 0/1 or boolean values")
        X = X.astype(bool)
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"X has {X.shape[1]} features, but the lattice was fit with {n_features}")
    return X


class ConceptLattice(TransformerMixin, BaseEstimator):
    """Enumerate the concept lattice of a binary object-by-attribute matrix.

    Parameters
    ----------
    workers : int, default=1
        Number of parallel workers used during enumeration.
    backend : {"process", "thread"}, default="process"
        Worker pool flavour when ``workers > 1``.
    kernel : {"vectorized", "minset"}, default="vectorized"
        How valid upper neighbors are computed.  ``"minset"`` runs the
        per-object min-set loop and is only sensible for small contexts.

    Attributes
    ----------
    context_ : FormalContext
    concepts_ : list of Concept
        Sorted by (level, intent).
    evidence_ : set of (int, int)
        Parent/child intent pairs recorded during enumeration.
    lattice_ : LatticeGraph
    stats_ : RunStats
    n_concepts_ : int
    n_features_in_ : int

    ``transform`` maps each row to a membership vector over ``concepts_``:
    entry ``j`` is 1 when the row has every attribute of concept ``j``'s intent.
    """

    def __init__(self, workers=1, backend="process", kernel="vectorized"):
        self.workers = workers
        self.backend = backend
        self.kernel = kernel

    def _validate_params(self):
        if not isinstance(self.workers, (int, np.integer)) or self.workers < 1:
            raise ValueError(f"workers must be a positive integer, got {self.workers!r}")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.kernel not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}, got {self.kernel!r}")

    def fit(self, X, y=None):
        self._validate_params()
        if isinstance(X, FormalContext):
            ctx = X
        else:
            ctx = FormalContext.from_array(check_binary(X))
        concepts, evidence, stats = enumerate_concepts(
            ctx, int(self.workers), backend=self.backend, kernel=self.kernel
        )
        self.context_ = ctx
        self.concepts_ = concepts
        self.evidence_ = evidence
        self.stats_ = stats
        self.lattice_ = build_lattice(concepts, evidence, ctx)
        self.n_concepts_ = len(concepts)
        self.n_features_in_ = ctx.n_attributes
        return self

    def transform(self, X):
        check_is_fitted(self, "concepts_")
        if isinstance(X, FormalContext):
            X = X.to_array()
        X = check_binary(X, n_features=self.n_features_in_)
        rows = [to_bits(np.flatnonzero(r).tolist()) for r in X]
        out = np.zeros((len(rows), len(self.concepts_)), dtype=np.uint8)
        for j, c in enumerate(self.concepts_):
            b = c.intent
            for i, r in enumerate(rows):
                if r & b == b:
                    out[i, j] = 1
        return out
