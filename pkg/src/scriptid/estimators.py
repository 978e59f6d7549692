"""scikit-learn compatible wrappers.

``WordFeatureExtractor`` turns cropped word rasters into a feature matrix and
``ScriptClassifier`` applies the fixed decision rules to that matrix, so the
two compose in a ``sklearn.pipeline.Pipeline``::

    >>> from sklearn.pipeline import make_pipeline
    >>> model = make_pipeline(WordFeatureExtractor(), ScriptClassifier()).fit(words)
    >>> model.predict(words)

Nothing is learned from data: ``fit`` only validates parameters.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_binary_image
from .classifier import PROFILES, ClassifierConfig, ScriptLabel, classify_ratio
from .errors import InvalidParameter
from .features import FEATURE_NAMES, _check_tau, crop_features

_RATIO = FEATURE_NAMES.index("ratio")
_VS = FEATURE_NAMES.index("vs")


def _check_words(X):
    if isinstance(X, np.ndarray) and X.ndim == 2:
        raise InvalidParameter("expected a sequence of 2-D word images, got a single 2-D array")
    return [check_binary_image(w) for w in X]


class WordFeatureExtractor(TransformerMixin, BaseEstimator):
    """Map cropped binary word images to rows of ``FEATURE_NAMES``.

    Undefined ``lp`` / ``ratio`` (single-row words) become NaN.
    """

    def __init__(self, tau=1.0):
        self.tau = tau

    def fit(self, X, y=None):
        _check_tau(self.tau)
        _check_words(X)
        self.n_features_out_ = len(FEATURE_NAMES)
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_out_")
        words = _check_words(X)
        rows = [crop_features(w, self.tau).as_row() for w in words]
        return np.asarray(rows, dtype=np.float64).reshape(len(rows), len(FEATURE_NAMES))

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURE_NAMES, dtype=object)


class ScriptClassifier(ClassifierMixin, BaseEstimator):
    """Label feature rows as Kannada, English, Hindi or Unknown.

    ``X`` has the columns of ``FEATURE_NAMES``; only ``ratio`` and ``vs`` are
    read. Explicit ranges override the chosen ``profile``.
    """

    def __init__(self, profile="table1", hindi_range=None, kannada_range=None,
                 english_range=None, hindi_min_vs=2, english_min_vs=2,
                 kannada_max_vs=1, ratio_only=False):
        self.profile = profile
        self.hindi_range = hindi_range
        self.kannada_range = kannada_range
        self.english_range = english_range
        self.hindi_min_vs = hindi_min_vs
        self.english_min_vs = english_min_vs
        self.kannada_max_vs = kannada_max_vs
        self.ratio_only = ratio_only

    def _config(self):
        if self.profile not in PROFILES:
            raise InvalidParameter(f"unknown profile {self.profile!r}")
        ranges = {k: v for k, v in (("hindi_range", self.hindi_range),
                                    ("kannada_range", self.kannada_range),
                                    ("english_range", self.english_range)) if v is not None}
        return ClassifierConfig.from_profile(
            self.profile, hindi_min_vs=self.hindi_min_vs, english_min_vs=self.english_min_vs,
            kannada_max_vs=self.kannada_max_vs, ratio_only=self.ratio_only, **ranges)

    def fit(self, X, y=None):
        X = check_array(X, ensure_all_finite="allow-nan")
        if X.shape[1] != len(FEATURE_NAMES):
            raise InvalidParameter(f"expected {len(FEATURE_NAMES)} feature columns, got {X.shape[1]}")
        self.config_ = self._config()
        self.classes_ = np.asarray(sorted(label.value for label in ScriptLabel), dtype=object)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "config_")
        X = check_array(X, ensure_all_finite="allow-nan")
        if X.shape[1] != self.n_features_in_:
            raise InvalidParameter(f"expected {self.n_features_in_} feature columns, got {X.shape[1]}")
        labels = [classify_ratio(float(r), v, self.config_).value
                  for r, v in zip(X[:, _RATIO], X[:, _VS])]
        return np.asarray(labels, dtype=object)
