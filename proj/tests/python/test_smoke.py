import math

import pytest

import tweetlab as tl


def test_char_ngrams():
    grams = tl.char_ngrams("ab", 1, 2)
    assert grams == {"a": 1, "b": 1, "ab": 1}


def test_vectorizer_fit_transform():
    cfg = tl.VectorizerConfig()
    cfg.n_max = 1
    vec = tl.FittedVectorizer.fit(["aa", "ab"], cfg)
    assert vec.vocabulary_size == 2
    x = dict(vec.transform("ab"))
    norm = math.sqrt(sum(v * v for v in x.values()))
    assert norm == pytest.approx(1.0)


def test_train_and_predict():
    X = [[-1.0], [-2.0], [1.0], [2.0]]
    y = [False, False, True, True]
    cfg = tl.TrainConfig()
    cfg.learning_rate = 1.0
    cfg.max_epochs = 500
    model = tl.train_logistic(X, y, cfg)
    assert tl.predict(model, X) == y
    assert 0.5 < tl.predict_proba(model, [2.0]) <= 1.0


def test_chi2():
    stat, df, p = tl.chi2_test([[10, 20], [30, 40]])
    assert stat == pytest.approx(0.79365, abs=1e-5)
    assert df == 1
    assert 0.0 < p < 1.0


def test_information_gain():
    ig = tl.information_gain([1.0, 1.0, 0.0, 0.0], [True, True, False, False])
    assert ig == pytest.approx(1.0)


def test_synth_corpus_and_stats():
    corpus = tl.synth_corpus(n_non_hate=100, n_hate=50, seed=7)
    assert len(corpus) == 150
    dist = tl.label_distribution(corpus)
    assert dist["none"] == 100
    assert dist["hate"] == 50
    hist = tl.interaction_histogram(corpus, tl.InteractionKind.likes)
    assert sum(hist) == 150
    users = tl.classify_users(corpus)
    assert users["total"] == users["non_hate"] + users["hate"]


def test_kfold_and_metrics():
    labels = [i % 2 == 0 for i in range(40)]
    assignment = tl.stratified_kfold(labels, k=4, seed=1)
    assert len(assignment) == 40
    assert set(assignment) == {0, 1, 2, 3}
    m = tl.confusion_and_metrics([True, True, False, False], [True, False, False, False])
    assert m["accuracy"] == pytest.approx(0.75)
    assert m["f1_positive"] == pytest.approx(2.0 / 3.0)


def test_validation_error_is_raised():
    with pytest.raises(tl.ParseError):
        tl.load_corpus("/nonexistent/annotations.tsv", "/nonexistent/tweets.jsonl")
