"""scikit-learn style wrappers around the functional API.

These exist so the solvers can sit in pipelines and parameter searches; the
fitted attributes mirror the dataclasses returned by the underlying
functions.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .alternative import decide_alternative, verify_certificate
from .construct import inf_convolution, sup_convolution
from .core import Tolerance
from .mazur import SampledSequence, mazur_extract
from .minimax import value_report


def _tol(est) -> Tolerance:
    return Tolerance(est.eps_feas, est.eps_opt, est.eps_cert)


class _TolMixin:
    def _set_tol_defaults(self, eps_feas, eps_opt, eps_cert):
        self.eps_feas = eps_feas
        self.eps_opt = eps_opt
        self.eps_cert = eps_cert


class ZeroSumGame(_TolMixin, BaseEstimator):
    """Solve the game given by a payoff matrix; rows minimize.

    After ``fit`` the attributes ``value_``, ``lower_``, ``upper_``, ``gap_``,
    ``row_weights_`` and ``col_weights_`` are set.
    """

    def __init__(self, eps_feas=1e-9, eps_opt=1e-7, eps_cert=1e-7):
        self._set_tol_defaults(eps_feas, eps_opt, eps_cert)

    def fit(self, X, y=None):
        report = value_report(X, _tol(self))
        self.value_ = report.mixed
        self.lower_ = report.lower
        self.upper_ = report.upper
        self.gap_ = report.gap
        self.row_weights_ = report.row_weights
        self.col_weights_ = report.col_weights
        self.n_features_in_ = np.asarray(X).shape[1]
        return self

    def predict(self, X):
        """Payoff each row earns against the fitted column strategy."""
        check_is_fitted(self, "col_weights_")
        return np.asarray(X, dtype=float) @ self.col_weights_

    def score(self, X, y=None):
        # the worst row guarantee; equals value_ on the fitted matrix
        return float(self.predict(X).min())


class InfConvolution(TransformerMixin, BaseEstimator):
    """``f = min_z (g[z] + K * phi[., z])`` applied to the matrix passed in.

    ``xi`` defaults to the row index scaled into [0, 1].
    """

    def __init__(self, xi=None, K=1.0):
        self.xi = xi
        self.K = K

    def _xi_for(self, rows):
        if self.xi is None:
            return np.linspace(0.0, 1.0, rows)
        return np.asarray(self.xi, dtype=float)

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        self.xi_ = self._xi_for(X.shape[0])
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "xi_")
        return np.asarray(inf_convolution(X, self.xi_, self.K).f)


class SupConvolution(TransformerMixin, BaseEstimator):
    """Column-side counterpart: ``G[x, y] = max_w (h[x, w] - K * phi_eta[y, w])``."""

    def __init__(self, eta=None, K=1.0):
        self.eta = eta
        self.K = K

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        cols = X.shape[1]
        self.eta_ = np.linspace(0.0, 1.0, cols) if self.eta is None else np.asarray(self.eta, dtype=float)
        self.n_features_in_ = cols
        return self

    def transform(self, X):
        check_is_fitted(self, "eta_")
        return np.asarray(sup_convolution(X, self.eta_, self.K))


class MazurExtractor(_TolMixin, TransformerMixin, BaseEstimator):
    """Fit minimum sup-norm weights on a window of a sampled sequence.

    ``X`` has one row per function (``N x Z``) or is ``N x Z x d``.
    ``tail_start``/``window_end`` are 1-based; ``None`` means the full range.
    ``transform`` returns the fitted combination of the same window of ``X``.
    """

    def __init__(self, tail_start=1, window_end=None, eps_feas=1e-9, eps_opt=1e-7, eps_cert=1e-7):
        self.tail_start = tail_start
        self.window_end = window_end
        self._set_tol_defaults(eps_feas, eps_opt, eps_cert)

    def fit(self, X, y=None):
        seq = SampledSequence(X)
        end = seq.N if self.window_end is None else self.window_end
        self.result_ = mazur_extract(seq, self.tail_start, end, _tol(self))
        self.weights_ = self.result_.weights
        self.norm_ = self.result_.norm
        return self

    def transform(self, X):
        check_is_fitted(self, "result_")
        combo = self.result_.combination(SampledSequence(X))
        return combo[:, 0] if np.ndim(X) == 2 else combo


class AlternativeDecider(_TolMixin, BaseEstimator):
    """Decide the A1/A2 dichotomy for the family whose generators are the rows of ``X``."""

    def __init__(self, eps_feas=1e-9, eps_opt=1e-7, eps_cert=1e-7):
        self._set_tol_defaults(eps_feas, eps_opt, eps_cert)

    def fit(self, X, y=None):
        self.outcome_ = decide_alternative(X, _tol(self))
        self.tag_ = self.outcome_.tag
        self.margin_ = self.outcome_.margin
        self.verified_ = verify_certificate(self.outcome_, X, _tol(self))
        return self

    def predict(self, X):
        check_is_fitted(self, "outcome_")
        return decide_alternative(X, _tol(self)).tag
