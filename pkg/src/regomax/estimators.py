"""scikit-learn style wrappers: configure with parameters, ``fit`` on a graph.

Parameters are plain attributes so ``get_params``/``set_params``/``clone``
work as for any estimator; fitted state ends with an underscore.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_alpha, check_graph, check_positive, check_selection
from .graph import GoogleOperator
from .rank import pagerank
from .reduced import compute_reduced


class PageRank(TransformerMixin, BaseEstimator):
    """PageRank (``direction="forward"``) or CheiRank (``"inverted"``) of a graph.

    ``fit_transform`` returns the probability vector.

    Examples
    --------
    >>> import numpy as np
    >>> PageRank().fit(np.array([[0, 1], [1, 0]])).probabilities_
    array([0.5, 0.5])
    """

    def __init__(self, alpha=0.85, tol=1e-12, max_iter=1000, direction="forward"):
        self.alpha = alpha
        self.tol = tol
        self.max_iter = max_iter
        self.direction = direction

    def fit(self, X, y=None):
        graph = check_graph(X)
        alpha = check_alpha(self.alpha)
        check_positive(self.tol, "tol")
        check_positive(self.max_iter, "max_iter", integer=True)
        self.rank_ = pagerank(GoogleOperator(graph, alpha, self.direction), self.tol, self.max_iter)
        self.probabilities_ = self.rank_.probabilities
        self.order_ = self.rank_.order
        self.n_iter_ = self.rank_.iterations
        self.n_features_in_ = graph.n_nodes
        return self

    def transform(self, X=None):
        check_is_fitted(self, "rank_")
        return self.probabilities_


class CheiRank(PageRank):
    def __init__(self, alpha=0.85, tol=1e-12, max_iter=1000, direction="inverted"):
        super().__init__(alpha, tol, max_iter, direction)


class ReducedGoogleMatrix(BaseEstimator):
    """Reduced Google matrix of ``selection`` and its G_rr/G_pr/G_qr split.

    After ``fit`` the components are available as ``G_R_``, ``G_rr_``,
    ``G_pr_``, ``G_qr_`` with the full result in ``reduced_``.
    """

    def __init__(self, selection=None, alpha=0.85, series_tol=1e-13, batch_size=16,
                 n_jobs=1, eig_tol=1e-12):
        self.selection = selection
        self.alpha = alpha
        self.series_tol = series_tol
        self.batch_size = batch_size
        self.n_jobs = n_jobs
        self.eig_tol = eig_tol

    def fit(self, X, y=None):
        graph = check_graph(X)
        if self.selection is None:
            raise ValueError("ReducedGoogleMatrix needs a selection")
        selection = check_selection(self.selection, graph.n_nodes)
        check_positive(self.series_tol, "series_tol")
        check_positive(self.batch_size, "batch_size", integer=True)
        R = compute_reduced(graph, check_alpha(self.alpha), selection, self.series_tol,
                            self.batch_size, self.n_jobs, eig_tol=self.eig_tol)
        self.reduced_ = R
        self.G_R_, self.G_rr_, self.G_pr_, self.G_qr_ = R.G_R, R.G_rr, R.G_pr, R.G_qr
        self.lambda_c_ = R.lambda_c
        self.weights_ = R.weights()
        return self

    def pagerank(self, tol=1e-13, max_iter=100_000):
        """Normalized PageRank of the fitted reduced matrix."""
        check_is_fitted(self, "reduced_")
        return pagerank(self.G_R_, tol, max_iter)
