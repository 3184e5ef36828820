#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tweetlab/corpus.hpp"
#include "tweetlab/eval.hpp"
#include "tweetlab/features.hpp"
#include "tweetlab/models.hpp"
#include "tweetlab/synth.hpp"
#include "tweetlab/textvec.hpp"

namespace py = pybind11;
using namespace tweetlab;

namespace {

SparseMatrix dense_to_sparse(const std::vector<std::vector<double>>& rows) {
    SparseMatrix m = SparseMatrix::from_dense(rows);
    if (!rows.empty()) m.n_cols = rows[0].size();
    return m;
}

std::vector<std::pair<std::uint32_t, double>> sparse_to_pairs(const SparseVector& v) {
    std::vector<std::pair<std::uint32_t, double>> out;
    out.reserve(v.size());
    for (const SparseEntry& e : v) out.emplace_back(e.index, e.value);
    return out;
}

}  // namespace

PYBIND11_MODULE(_tweetlab, m) {
    m.doc() = "hate-speech corpus analytics and popularity prediction toolkit";

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<ValidationError>(m, "ValidationError");

    py::enum_<Subset>(m, "Subset")
        .value("all", Subset::all)
        .value("hate", Subset::hate)
        .value("non_hate", Subset::non_hate)
        .value("racism", Subset::racism)
        .value("sexism", Subset::sexism);

    py::enum_<InteractionKind>(m, "InteractionKind")
        .value("likes", InteractionKind::likes)
        .value("retweets", InteractionKind::retweets)
        .value("replies", InteractionKind::replies);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("logistic", ModelKind::logistic)
        .value("hinge", ModelKind::hinge);

    py::class_<Corpus>(m, "Corpus")
        .def("__len__", [](const Corpus& c) { return c.tweets().size(); })
        .def_property_readonly("reference_time", &Corpus::reference_time)
        .def("texts",
             [](const Corpus& c) {
                 std::vector<std::string> out;
                 for (const TweetRecord& t : c.tweets()) out.push_back(t.text);
                 return out;
             })
        .def("hate_labels", [](const Corpus& c) {
            std::vector<bool> out;
            for (const TweetRecord& t : c.tweets()) out.push_back(t.labels.hate());
            return out;
        });

    m.def(
        "load_corpus",
        [](const std::string& annotations_path, const std::string& tweets_path) {
            AnnotationMap ann = load_annotations(annotations_path);
            CorpusLoadResult r = load_corpus(ann, tweets_path);
            return py::make_tuple(std::move(r.corpus), r.unavailable.size());
        },
        py::arg("annotations_path"), py::arg("tweets_path"),
        "Load an annotated corpus; returns (corpus, n_unavailable).");

    m.def(
        "synth_corpus",
        [](std::int64_t n_non_hate, std::int64_t n_hate, double planted_rate, std::uint64_t seed) {
            SynthSpec spec;
            spec.n_non_hate = n_non_hate;
            spec.n_hate = n_hate;
            spec.planted_rate = planted_rate;
            return synth_corpus(spec, seed);
        },
        py::arg("n_non_hate") = 1000, py::arg("n_hate") = 500, py::arg("planted_rate") = 0.9,
        py::arg("seed") = 42);

    m.def("label_distribution", [](const Corpus& c) {
        LabelDistribution d = label_distribution(c);
        return py::dict(py::arg("none") = d.none, py::arg("hate") = d.hate,
                        py::arg("racism") = d.racism, py::arg("sexism") = d.sexism,
                        py::arg("total") = d.total);
    });

    m.def(
        "interaction_histogram",
        [](const Corpus& c, InteractionKind kind, Subset subset) {
            InteractionHistogram h = interaction_histogram(c, kind, subset);
            return std::vector<std::int64_t>(h.bins.begin(), h.bins.end());
        },
        py::arg("corpus"), py::arg("kind"), py::arg("subset") = Subset::all);

    m.def("classify_users", [](const Corpus& c) {
        UserTypeTable t = classify_users(c);
        return py::dict(py::arg("non_hate") = t.non_hate, py::arg("racist") = t.racist,
                        py::arg("sexist") = t.sexist,
                        py::arg("racist_and_sexist") = t.racist_and_sexist,
                        py::arg("hate") = t.hate(), py::arg("total") = t.total());
    });

    m.def("char_ngrams", &char_ngrams, py::arg("text"), py::arg("n_min") = 1, py::arg("n_max") = 4);

    py::class_<VectorizerConfig>(m, "VectorizerConfig")
        .def(py::init<>())
        .def_readwrite("n_min", &VectorizerConfig::n_min)
        .def_readwrite("n_max", &VectorizerConfig::n_max)
        .def_readwrite("lowercase", &VectorizerConfig::lowercase)
        .def_readwrite("min_df", &VectorizerConfig::min_df);

    py::class_<FittedVectorizer>(m, "FittedVectorizer")
        .def_static(
            "fit",
            [](const std::vector<std::string>& docs, const VectorizerConfig& config) {
                return FittedVectorizer::fit(docs, config);
            },
            py::arg("docs"), py::arg("config") = VectorizerConfig{})
        .def("transform",
             [](const FittedVectorizer& v, const std::string& doc) {
                 return sparse_to_pairs(v.transform(doc));
             })
        .def_property_readonly("vocabulary_size", &FittedVectorizer::vocabulary_size)
        .def_property_readonly("idf", &FittedVectorizer::idf)
        .def_property_readonly("terms", &FittedVectorizer::terms)
        .def("save", &FittedVectorizer::save)
        .def_static("load", &FittedVectorizer::load);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("max_epochs", &TrainConfig::max_epochs)
        .def_readwrite("l2_lambda", &TrainConfig::l2_lambda)
        .def_readwrite("tolerance", &TrainConfig::tolerance)
        .def_readwrite("seed", &TrainConfig::seed);

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_readonly("kind", &TrainedModel::kind)
        .def_readonly("weights", &TrainedModel::weights)
        .def_readonly("bias", &TrainedModel::bias)
        .def_readonly("final_loss", &TrainedModel::final_loss)
        .def_readonly("epochs_run", &TrainedModel::epochs_run)
        .def("save", &TrainedModel::save)
        .def_static("load", &TrainedModel::load);

    m.def(
        "train_logistic",
        [](const std::vector<std::vector<double>>& X, const std::vector<bool>& y,
           const TrainConfig& config) { return train_logistic(dense_to_sparse(X), y, config); },
        py::arg("X"), py::arg("y"), py::arg("config") = TrainConfig{});

    m.def(
        "train_svm",
        [](const std::vector<std::vector<double>>& X, const std::vector<bool>& y,
           const TrainConfig& config) { return train_svm(dense_to_sparse(X), y, config); },
        py::arg("X"), py::arg("y"), py::arg("config") = TrainConfig{});

    m.def(
        "predict",
        [](const TrainedModel& model, const std::vector<std::vector<double>>& X,
           double threshold) {
            SparseMatrix sm = dense_to_sparse(X);
            std::vector<bool> out;
            for (const SparseVector& row : sm.rows) out.push_back(predict(model, row, threshold));
            return out;
        },
        py::arg("model"), py::arg("X"), py::arg("threshold") = 0.5);

    m.def(
        "predict_proba",
        [](const TrainedModel& model, const std::vector<double>& x) {
            SparseVector v;
            for (std::size_t j = 0; j < x.size(); ++j) {
                if (x[j] != 0.0) v.push_back({static_cast<std::uint32_t>(j), x[j]});
            }
            return predict_proba(model, v);
        },
        py::arg("model"), py::arg("x"));

    m.def(
        "stratified_kfold",
        [](const std::vector<bool>& labels, int k, std::uint64_t seed) {
            return stratified_kfold(labels, k, seed).assignment;
        },
        py::arg("labels"), py::arg("k") = 10, py::arg("seed") = 0);

    m.def("confusion_and_metrics", [](const std::vector<bool>& y_true,
                                      const std::vector<bool>& y_pred) {
        Metrics mm = confusion_and_metrics(y_true, y_pred);
        return py::dict(py::arg("accuracy") = mm.accuracy, py::arg("precision") = mm.precision,
                        py::arg("recall") = mm.recall, py::arg("f1_positive") = mm.f1_positive,
                        py::arg("f1_weighted") = mm.f1_weighted);
    });

    m.def(
        "chi2_test",
        [](const std::vector<std::vector<double>>& observed) {
            Chi2Result r = chi2_test(observed);
            return py::make_tuple(r.statistic, r.df, r.p_value);
        },
        py::arg("observed"), "Pearson chi-squared test; returns (statistic, df, p_value).");

    m.def("information_gain",
          [](const std::vector<double>& column, const std::vector<bool>& labels, int bins) {
              return information_gain(column, labels, bins);
          },
          py::arg("column"), py::arg("labels"), py::arg("bins") = 10);
}
