"""Hate-speech corpus analytics and tweet-popularity prediction toolkit.

Thin Python surface over the C++ core; the heavy lifting lives in the
`_tweetlab` extension module.
"""

try:
    from . import _tweetlab as _impl  # installed layout: extension inside the package
except ImportError:  # pragma: no cover - build-tree layout
    import _tweetlab as _impl

from_impl = [
    "ParseError",
    "ValidationError",
    "Subset",
    "InteractionKind",
    "ModelKind",
    "Corpus",
    "load_corpus",
    "synth_corpus",
    "label_distribution",
    "interaction_histogram",
    "classify_users",
    "char_ngrams",
    "VectorizerConfig",
    "FittedVectorizer",
    "TrainConfig",
    "TrainedModel",
    "train_logistic",
    "train_svm",
    "predict",
    "predict_proba",
    "stratified_kfold",
    "confusion_and_metrics",
    "chi2_test",
    "information_gain",
]

for _name in from_impl:
    globals()[_name] = getattr(_impl, _name)

__all__ = list(from_impl)
del _name, from_impl
