// tweetlab: corpus statistics, hate-speech detection and tweet-popularity
// prediction pipelines with reproducible reports.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tweetlab/corpus.hpp"
#include "tweetlab/eval.hpp"
#include "tweetlab/features.hpp"
#include "tweetlab/models.hpp"
#include "tweetlab/report.hpp"
#include "tweetlab/synth.hpp"
#include "tweetlab/text_util.hpp"
#include "tweetlab/textvec.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tweetlab;

namespace {

struct CommonOpts {
    std::string annotations;
    std::string tweets;
    std::string out = "reports";
    std::string tag = "latest";
    std::string reference_time;  // ISO-8601 override
    std::uint64_t seed = 42;

    std::string blacklist, positive, negative, subjective;

    std::string task = "detect";          // detect | popularity
    std::string target = "hate";          // hate | liked | retweeted | replied
    std::string subset = "all";           // all | hate | non-hate
    std::string model = "logistic";       // logistic | hinge
    std::string groups = "tweet,user,content";
    bool include_user_id = false;

    int ngram_min = 1;
    int ngram_max = 4;
    int min_df = 1;
    bool no_lowercase = false;

    int folds = 10;
    int ig_bins = 10;

    double learning_rate = 0.1;
    int epochs = 500;
    double l2_lambda = 1e-4;
    double tolerance = 1e-6;
};

void add_corpus_options(CLI::App* cmd, CommonOpts& o, bool required = true) {
    auto* a = cmd->add_option("--annotations", o.annotations, "annotation TSV file");
    auto* t = cmd->add_option("--tweets", o.tweets, "hydrated tweets JSONL file");
    if (required) {
        a->required();
        t->required();
    }
    cmd->add_option("--reference-time", o.reference_time,
                    "ISO-8601 reference time for age features (default: max created_at)");
}

void add_output_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "output base directory");
    cmd->add_option("--tag", o.tag, "run tag (subdirectory under <out>/<command>/)");
}

void add_lexicon_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--blacklist", o.blacklist, "blacklist lexicon file");
    cmd->add_option("--positive", o.positive, "positive-sentiment lexicon file");
    cmd->add_option("--negative", o.negative, "negative-sentiment lexicon file");
    cmd->add_option("--subjective", o.subjective, "subjectivity lexicon file");
}

void add_feature_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--groups", o.groups, "feature groups (comma list of tweet,user,content)");
    cmd->add_flag("--include-user-id", o.include_user_id,
                  "add the opaque user_id column (analysis only)");
}

void add_vectorizer_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--ngram-min", o.ngram_min, "minimum character n-gram length");
    cmd->add_option("--ngram-max", o.ngram_max, "maximum character n-gram length");
    cmd->add_option("--min-df", o.min_df, "minimum document frequency");
    cmd->add_flag("--no-lowercase", o.no_lowercase, "keep case before n-gram extraction");
}

void add_train_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--model", o.model, "model kind: logistic|hinge");
    cmd->add_option("--learning-rate", o.learning_rate, "initial gradient step");
    cmd->add_option("--epochs", o.epochs, "maximum training epochs");
    cmd->add_option("--lambda", o.l2_lambda, "L2 regularization strength");
    cmd->add_option("--tolerance", o.tolerance, "stop when loss decrease falls below this");
}

void add_eval_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--folds", o.folds, "cross-validation folds");
    cmd->add_option("--seed", o.seed, "master seed (subsystem seeds derive from it)");
    cmd->add_option("--ig-bins", o.ig_bins, "information-gain discretization bins");
}

std::optional<std::int64_t> parse_reference_time(const CommonOpts& o) {
    if (o.reference_time.empty()) return std::nullopt;
    return parse_iso8601_utc(o.reference_time);
}

CorpusLoadResult load(const CommonOpts& o) {
    AnnotationMap annotations = load_annotations(o.annotations);
    return load_corpus(annotations, o.tweets, parse_reference_time(o));
}

LexiconSet lexicons(const CommonOpts& o) {
    return LexiconSet::load(o.blacklist, o.positive, o.negative, o.subjective);
}

std::set<FeatureGroup> parse_groups(const std::string& spec) {
    std::set<FeatureGroup> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.insert(feature_group_from_string(item));
    }
    if (out.empty()) throw ValidationError("empty feature group list");
    return out;
}

VectorizerConfig vectorizer_config(const CommonOpts& o) {
    VectorizerConfig c;
    c.n_min = o.ngram_min;
    c.n_max = o.ngram_max;
    c.min_df = o.min_df;
    c.lowercase = !o.no_lowercase;
    return c;
}

TrainConfig train_config(const CommonOpts& o) {
    TrainConfig c;
    c.learning_rate = o.learning_rate;
    c.max_epochs = o.epochs;
    c.l2_lambda = o.l2_lambda;
    c.tolerance = o.tolerance;
    c.seed = o.seed;
    return c;
}

Subset parse_subset(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "all") return Subset::all;
    if (n == "hate") return Subset::hate;
    if (n == "non-hate" || n == "non_hate" || n == "nonhate") return Subset::non_hate;
    if (n == "racism") return Subset::racism;
    if (n == "sexism") return Subset::sexism;
    throw ValidationError("unknown subset '" + name + "'");
}

json resolved_config(const CommonOpts& o) {
    return {{"annotations", o.annotations},
            {"tweets", o.tweets},
            {"reference_time", o.reference_time},
            {"seed", o.seed},
            {"task", o.task},
            {"target", o.target},
            {"subset", o.subset},
            {"model", o.model},
            {"groups", o.groups},
            {"include_user_id", o.include_user_id},
            {"ngram_min", o.ngram_min},
            {"ngram_max", o.ngram_max},
            {"min_df", o.min_df},
            {"lowercase", !o.no_lowercase},
            {"folds", o.folds},
            {"ig_bins", o.ig_bins},
            {"learning_rate", o.learning_rate},
            {"epochs", o.epochs},
            {"l2_lambda", o.l2_lambda},
            {"tolerance", o.tolerance},
            {"lexicons",
             {{"blacklist", o.blacklist},
              {"positive", o.positive},
              {"negative", o.negative},
              {"subjective", o.subjective}}}};
}

fs::path report_dir(const CommonOpts& o, const std::string& command) {
    fs::path dir = fs::path(o.out) / command / o.tag;
    fs::create_directories(dir);
    return dir;
}

void write_json(const fs::path& path, const json& obj) {
    write_text_file(path.string(), obj.dump(2) + "\n");
}

// Restrict a corpus to a subset of its tweets (popularity subsets).
Corpus restrict_corpus(const Corpus& corpus, Subset subset) {
    if (subset == Subset::all) return corpus;
    std::vector<TweetRecord> tweets;
    for (std::size_t i = 0; i < corpus.tweets().size(); ++i) {
        if (corpus.in_subset(i, subset)) tweets.push_back(corpus.tweets()[i]);
    }
    if (tweets.empty()) throw ValidationError("subset is empty");
    return Corpus(std::move(tweets), corpus.users(), corpus.reference_time());
}

// ---------------------------------------------------------------- commands

int cmd_synth(const CommonOpts& o, const SynthSpec& spec) {
    spec.validate();
    Corpus corpus = synth_corpus(spec, o.seed);
    fs::path dir = fs::path(o.out);
    fs::create_directories(dir);
    write_tweets_jsonl(corpus, (dir / "tweets.jsonl").string());
    write_annotations(annotations_of(corpus), (dir / "annotations.tsv").string());
    json summary = {{"tweets", corpus.tweets().size()},
                    {"users", corpus.users().size()},
                    {"seed", o.seed},
                    {"spec",
                     {{"n_non_hate", spec.n_non_hate},
                      {"n_hate", spec.n_hate},
                      {"racism_fraction", spec.racism_fraction},
                      {"planted_rate", spec.planted_rate},
                      {"planted_tokens", spec.planted_tokens},
                      {"n_users", spec.n_users}}}};
    write_json(dir / "synth.json", summary);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_ingest(const CommonOpts& o, const std::string& normalized_out) {
    CorpusLoadResult loaded = load(o);
    AnnotationMap annotations = load_annotations(o.annotations);
    LabelDistribution original;
    for (const auto& [_, labels] : annotations) {
        ++original.total;
        if (labels.none) ++original.none;
        if (labels.racism) ++original.racism;
        if (labels.sexism) ++original.sexism;
        if (labels.hate()) ++original.hate;
    }
    json summary = {{"config", resolved_config(o)},
                    {"original", label_distribution_to_json(original)},
                    {"available", label_distribution_to_json(label_distribution(loaded.corpus))},
                    {"unavailable", loaded.unavailable.size()},
                    {"record_errors", loaded.record_errors}};
    if (!normalized_out.empty()) {
        fs::create_directories(normalized_out);
        write_tweets_jsonl(loaded.corpus, (fs::path(normalized_out) / "tweets.jsonl").string());
        write_annotations(annotations_of(loaded.corpus),
                          (fs::path(normalized_out) / "annotations.tsv").string());
    }
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_stats(const CommonOpts& o, bool svg, const std::vector<std::string>& extra_tokens) {
    CorpusLoadResult loaded = load(o);
    const Corpus& corpus = loaded.corpus;
    AnnotationMap annotations = load_annotations(o.annotations);
    fs::path dir = report_dir(o, "stats");

    LabelDistribution available = label_distribution(corpus);
    LabelDistribution original;
    for (const auto& [_, labels] : annotations) {
        ++original.total;
        if (labels.none) ++original.none;
        if (labels.racism) ++original.racism;
        if (labels.sexism) ++original.sexism;
        if (labels.hate()) ++original.hate;
    }
    json availability = {{"original", label_distribution_to_json(original)},
                         {"available", label_distribution_to_json(available)},
                         {"deleted",
                          {{"none", original.none - available.none},
                           {"hate", original.hate - available.hate},
                           {"racism", original.racism - available.racism},
                           {"sexism", original.sexism - available.sexism},
                           {"total", original.total - available.total}}},
                         {"unavailable_ids", loaded.unavailable.size()}};

    json histograms = json::array();
    std::ofstream hist_csv(dir / "interaction_histograms.csv");
    hist_csv << "subset,kind,0,1,2,3,4,5plus\n";
    for (Subset subset : {Subset::all, Subset::non_hate, Subset::hate}) {
        for (InteractionKind kind :
             {InteractionKind::likes, InteractionKind::retweets, InteractionKind::replies}) {
            InteractionHistogram h = interaction_histogram(corpus, kind, subset);
            histograms.push_back(histogram_to_json(h));
            hist_csv << to_string(subset) << "," << to_string(kind);
            for (std::int64_t b : h.bins) hist_csv << "," << b;
            hist_csv << "\n";
        }
    }
    hist_csv.close();

    auto production = user_production_histogram(corpus);
    {
        std::ofstream csv(dir / "user_production.csv");
        csv << "user_id,hate_tweet_count\n";
        for (const auto& [id, count] : production) csv << id << "," << count << "\n";
    }
    if (svg) {
        std::vector<std::pair<std::string, std::int64_t>> bars;
        for (const auto& [id, count] : production) bars.push_back({std::to_string(id), count});
        write_text_file((dir / "user_production.svg").string(),
                        svg_log_bar_chart(bars, "hate tweets per user (log scale)"));
    }

    json token_shares;
    token_shares["rt_hate"] = token_share(corpus, Subset::hate, {"RT"}, /*case_sensitive=*/true);
    std::vector<std::string> mkr = {"#MKR", "@MyKitchenRules", "#MyKitchenRules"};
    token_shares["mkr_sexism"] = token_share(corpus, Subset::sexism, mkr, /*case_sensitive=*/false);
    if (!extra_tokens.empty()) {
        token_shares["custom"] = token_share(corpus, parse_subset(o.subset), extra_tokens,
                                             /*case_sensitive=*/false);
        token_shares["custom_patterns"] = extra_tokens;
    }

    json report = {{"config", resolved_config(o)},
                   {"availability", availability},
                   {"label_distribution", label_distribution_to_json(available)},
                   {"interaction_histograms", histograms},
                   {"user_types", user_table_to_json(classify_users(corpus))},
                   {"user_production_top",
                    [&] {
                        json top = json::array();
                        for (std::size_t i = 0; i < std::min<std::size_t>(production.size(), 10); ++i) {
                            top.push_back({{"user_id", production[i].first},
                                           {"hate_tweets", production[i].second}});
                        }
                        return top;
                    }()},
                   {"token_shares", token_shares}};
    write_json(dir / "report.json", report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_featurize(const CommonOpts& o) {
    CorpusLoadResult loaded = load(o);
    Corpus corpus = restrict_corpus(loaded.corpus, parse_subset(o.subset));
    FeatureMatrix matrix =
        build_matrix(corpus, lexicons(o), parse_groups(o.groups), o.include_user_id);
    fs::path dir = report_dir(o, "featurize");
    matrix.write_csv((dir / "features.csv").string());
    std::vector<bool> y = targets(corpus, target_kind_from_string(o.target));
    {
        std::ofstream csv(dir / "targets.csv");
        csv << "tweet_id,target_" << o.target << "\n";
        for (std::size_t i = 0; i < y.size(); ++i) {
            csv << corpus.tweets()[i].id << "," << (y[i] ? 1 : 0) << "\n";
        }
    }
    write_json(dir / "featurize.json",
               {{"config", resolved_config(o)},
                {"rows", matrix.rows.size()},
                {"columns", matrix.column_names}});
    std::cout << "wrote " << (dir / "features.csv").string() << " (" << matrix.rows.size()
              << " rows, " << matrix.column_names.size() << " columns)\n";
    return 0;
}

struct RunOutputs {
    CvReport cv;
    json report;
};

// The detect task: char n-gram TF-IDF + linear model on hate vs non-hate.
// The popularity task: Table-style metadata/content features, standardized,
// predicting whether a tweet gets liked/retweeted/replied.
RunOutputs run_pipeline(const CommonOpts& o, const Corpus& full_corpus, bool with_ig,
                        bool with_chi2, const std::string& ablate_unit) {
    ModelKind kind = model_kind_from_string(o.model);
    TrainConfig tc = train_config(o);
    Subset subset = parse_subset(o.subset);
    if (o.task == "detect" && subset != Subset::all) {
        throw ValidationError("subset splits only apply to the popularity task");
    }
    Corpus corpus = restrict_corpus(full_corpus, subset);

    RunOutputs out;
    json report;
    report["config"] = resolved_config(o);

    if (o.task == "detect") {
        std::vector<std::string> docs;
        std::vector<bool> y;
        for (const TweetRecord& t : corpus.tweets()) {
            docs.push_back(t.text);
            y.push_back(t.labels.hate());
        }
        FoldPlan plan = stratified_kfold(y, o.folds, tc.seed);
        VectorizerConfig vc = vectorizer_config(o);
        out.cv = cross_validate(
            [&]() { return std::make_unique<DetectPipeline>(docs, y, vc, kind, tc); }, y, plan);
        report["task"] = "detect";
        report["cv"] = cv_report_to_json(out.cv);
    } else if (o.task == "popularity") {
        TargetKind target = target_kind_from_string(o.target);
        if (target == TargetKind::hate) {
            throw ValidationError("target 'hate' belongs to --task detect; "
                                  "use liked|retweeted|replied");
        }
        FeatureMatrix matrix =
            build_matrix(corpus, lexicons(o), parse_groups(o.groups), o.include_user_id);
        std::vector<bool> y = targets(corpus, target);

        // Drop target-leaking columns and the id column from training.
        std::vector<std::size_t> keep;
        auto leaky = leaky_columns(target);
        for (std::size_t j = 0; j < matrix.column_names.size(); ++j) {
            const std::string& name = matrix.column_names[j];
            if (name == "user_id") continue;
            if (std::find(leaky.begin(), leaky.end(), name) != leaky.end()) continue;
            keep.push_back(j);
        }
        FeatureMatrix train_matrix = matrix.select(keep);

        FoldPlan plan = stratified_kfold(y, o.folds, tc.seed);
        out.cv = cross_validate(
            [&]() { return std::make_unique<PopularityPipeline>(train_matrix, y, kind, tc); }, y,
            plan);
        report["task"] = "popularity";
        report["cv"] = cv_report_to_json(out.cv);
        if (with_ig) {
            report["information_gain"] = ig_to_json(rank_features_ig(matrix, y, o.ig_bins));
        }
        if (!ablate_unit.empty()) {
            AblationUnit unit = ablate_unit == "group" ? AblationUnit::group
                                                        : AblationUnit::single;
            if (ablate_unit != "group" && ablate_unit != "single") {
                throw ValidationError("--ablate expects 'group' or 'single'");
            }
            report["ablation"] =
                ablation_to_json(ablate(train_matrix, y, plan, kind, tc, unit));
        }
    } else {
        throw ValidationError("unknown task '" + o.task + "' (expected detect|popularity)");
    }

    if (with_chi2) {
        json tests = json::array();
        for (InteractionKind k :
             {InteractionKind::likes, InteractionKind::retweets, InteractionKind::replies}) {
            tests.push_back(chi2_to_json(interaction_chi2(full_corpus, k, Chi2Mode::binary)));
        }
        report["chi_squared"] = std::move(tests);
    }
    out.report = std::move(report);
    return out;
}

int cmd_run(const CommonOpts& o, bool with_ig, bool with_chi2, const std::string& ablate_unit) {
    CorpusLoadResult loaded = load(o);
    RunOutputs out = run_pipeline(o, loaded.corpus, with_ig, with_chi2, ablate_unit);
    fs::path dir = report_dir(o, o.task);
    write_json(dir / "report.json", out.report);
    {
        std::ofstream csv(dir / "metrics.csv");
        csv << "fold,accuracy,precision,recall,f1_positive,f1_weighted\n";
        char buf[160];
        for (std::size_t i = 0; i < out.cv.per_fold.size(); ++i) {
            const Metrics& m = out.cv.per_fold[i];
            std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f,%.6f,%.6f\n", i, m.accuracy,
                          m.precision, m.recall, m.f1_positive, m.f1_weighted);
            csv << buf;
        }
        const Metrics& m = out.cv.mean;
        std::snprintf(buf, sizeof(buf), "mean,%.6f,%.6f,%.6f,%.6f,%.6f\n", m.accuracy,
                      m.precision, m.recall, m.f1_positive, m.f1_weighted);
        csv << buf;
    }
    std::cout << "mean accuracy " << out.cv.mean.accuracy << ", F1(positive) "
              << out.cv.mean.f1_positive << "\n";
    std::cout << "report: " << (dir / "report.json").string() << "\n";
    return 0;
}

int cmd_train(const CommonOpts& o) {
    CorpusLoadResult loaded = load(o);
    ModelKind kind = model_kind_from_string(o.model);
    TrainConfig tc = train_config(o);
    fs::path dir = report_dir(o, "train");
    if (o.task == "detect") {
        std::vector<std::string> docs;
        std::vector<bool> y;
        for (const TweetRecord& t : loaded.corpus.tweets()) {
            docs.push_back(t.text);
            y.push_back(t.labels.hate());
        }
        FittedVectorizer vec = FittedVectorizer::fit(docs, vectorizer_config(o));
        SparseMatrix X;
        X.n_cols = vec.vocabulary_size();
        for (const std::string& doc : docs) X.rows.push_back(vec.transform(doc));
        TrainedModel model =
            kind == ModelKind::logistic ? train_logistic(X, y, tc) : train_svm(X, y, tc);
        vec.save((dir / "vectorizer.json").string());
        model.save((dir / "model.json").string());
    } else {
        Corpus corpus = restrict_corpus(loaded.corpus, parse_subset(o.subset));
        TargetKind target = target_kind_from_string(o.target);
        FeatureMatrix matrix = build_matrix(corpus, lexicons(o), parse_groups(o.groups), false);
        std::vector<bool> y = targets(corpus, target);
        std::vector<std::size_t> keep;
        auto leaky = leaky_columns(target);
        for (std::size_t j = 0; j < matrix.column_names.size(); ++j) {
            if (std::find(leaky.begin(), leaky.end(), matrix.column_names[j]) != leaky.end())
                continue;
            keep.push_back(j);
        }
        matrix = matrix.select(keep);
        Standardizer st = Standardizer::fit(matrix.rows);
        auto rows = matrix.rows;
        st.apply(rows);
        SparseMatrix X = SparseMatrix::from_dense(rows);
        X.n_cols = matrix.column_names.size();
        TrainedModel model =
            kind == ModelKind::logistic ? train_logistic(X, y, tc) : train_svm(X, y, tc);
        model.column_names = matrix.column_names;
        model.save((dir / "model.json").string());
        json scaler = {{"mean", st.mean}, {"stddev", st.stddev},
                       {"columns", matrix.column_names}};
        write_json(dir / "scaler.json", scaler);
    }
    write_json(dir / "train.json", {{"config", resolved_config(o)}});
    std::cout << "model written to " << (dir / "model.json").string() << "\n";
    return 0;
}

int cmd_infogain(const CommonOpts& o) {
    CorpusLoadResult loaded = load(o);
    Corpus corpus = restrict_corpus(loaded.corpus, parse_subset(o.subset));
    FeatureMatrix matrix =
        build_matrix(corpus, lexicons(o), parse_groups(o.groups), /*include_user_id=*/true);
    std::vector<bool> y = targets(corpus, target_kind_from_string(o.target));
    auto ranking = rank_features_ig(matrix, y, o.ig_bins);
    fs::path dir = report_dir(o, "infogain");
    {
        std::ofstream csv(dir / "information_gain.csv");
        csv << "feature,ig_bits\n";
        char buf[128];
        for (const IGEntry& e : ranking) {
            std::snprintf(buf, sizeof(buf), "%s,%.6f\n", e.feature.c_str(), e.ig);
            csv << buf;
        }
    }
    write_json(dir / "report.json",
               {{"config", resolved_config(o)}, {"information_gain", ig_to_json(ranking)}});
    for (std::size_t i = 0; i < std::min<std::size_t>(8, ranking.size()); ++i) {
        std::cout << ranking[i].feature << "\t" << ranking[i].ig << "\n";
    }
    return 0;
}

int cmd_chisq(const CommonOpts& o, const std::string& mode_name) {
    Chi2Mode mode = mode_name == "histogram" ? Chi2Mode::histogram : Chi2Mode::binary;
    if (mode_name != "binary" && mode_name != "histogram") {
        throw ValidationError("--mode expects binary|histogram");
    }
    CorpusLoadResult loaded = load(o);
    json tests = json::array();
    for (InteractionKind k :
         {InteractionKind::likes, InteractionKind::retweets, InteractionKind::replies}) {
        InteractionChi2 t = interaction_chi2(loaded.corpus, k, mode);
        tests.push_back(chi2_to_json(t));
        std::cout << to_string(k) << ": chi2=" << t.result.statistic << " df=" << t.result.df
                  << " p=" << format_p_value(t.result.p_value) << "\n";
    }
    fs::path dir = report_dir(o, "chisq");
    write_json(dir / "report.json", {{"config", resolved_config(o)}, {"tests", tests}});
    return 0;
}

int cmd_ablate(const CommonOpts& o, const std::string& unit_name) {
    if (unit_name != "group" && unit_name != "single") {
        throw ValidationError("--unit expects group|single");
    }
    CommonOpts run_opts = o;
    run_opts.task = "popularity";
    CorpusLoadResult loaded = load(o);
    RunOutputs out = run_pipeline(run_opts, loaded.corpus, false, false, unit_name);
    fs::path dir = report_dir(o, "ablate");
    write_json(dir / "report.json", out.report);
    const json& rows = out.report.at("ablation").at("rows");
    {
        std::ofstream csv(dir / "ablation.csv");
        csv << "removed,delta_accuracy,delta_f1\n";
        char buf[160];
        for (const auto& row : rows) {
            std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f\n",
                          row.at("removed").get<std::string>().c_str(),
                          row.at("delta_accuracy").get<double>(),
                          row.at("delta_f1").get<double>());
            csv << buf;
        }
    }
    std::cout << rows.dump(2) << "\n";
    return 0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

int cmd_predict(const std::string& model_path, const std::string& features_csv, double threshold) {
    TrainedModel model = TrainedModel::load(model_path);
    if (model.column_names.empty()) {
        throw ValidationError("model has no feature column names; "
                              "`predict` consumes feature-CSV models");
    }
    std::ifstream in(features_csv, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + features_csv);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty features file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_csv_line(line);

    std::vector<std::int64_t> col_pos(model.column_names.size(), -1);
    std::int64_t id_pos = -1;
    std::vector<std::string> extra;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == "id" || header[j] == "tweet_id") {
            id_pos = static_cast<std::int64_t>(j);
            continue;
        }
        auto it = std::find(model.column_names.begin(), model.column_names.end(), header[j]);
        if (it == model.column_names.end()) {
            extra.push_back(header[j]);
        } else {
            col_pos[it - model.column_names.begin()] = static_cast<std::int64_t>(j);
        }
    }
    std::vector<std::string> missing;
    for (std::size_t j = 0; j < col_pos.size(); ++j) {
        if (col_pos[j] < 0) missing.push_back(model.column_names[j]);
    }
    if (!missing.empty() || !extra.empty()) {
        std::ostringstream msg;
        msg << "feature columns do not match model.";
        if (!missing.empty()) {
            msg << " missing:";
            for (const auto& m : missing) msg << " " << m;
        }
        if (!extra.empty()) {
            msg << " extra:";
            for (const auto& e : extra) msg << " " << e;
        }
        throw ValidationError(msg.str());
    }

    std::cout << "id,score,label\n";
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        SparseVector x;
        for (std::size_t j = 0; j < col_pos.size(); ++j) {
            double v = std::stod(fields.at(static_cast<std::size_t>(col_pos[j])));
            if (v != 0.0) x.push_back({static_cast<std::uint32_t>(j), v});
        }
        double score = model.kind == ModelKind::logistic ? predict_proba(model, x)
                                                          : decision_value(model, x);
        bool label = predict(model, x, threshold);
        std::string id = id_pos >= 0 ? fields.at(static_cast<std::size_t>(id_pos))
                                      : std::to_string(row_no);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", score);
        std::cout << id << "," << buf << "," << (label ? 1 : 0) << "\n";
        ++row_no;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hate-speech corpus analytics and popularity prediction toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file (flags win)");

    CommonOpts o;
    SynthSpec spec;
    bool svg = false;
    std::vector<std::string> extra_tokens;
    std::string normalized_out;
    bool with_ig = false, with_chi2 = false;
    std::string ablate_unit;
    std::string chisq_mode = "binary";
    std::string predict_model, predict_features;
    double threshold = 0.5;

    auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic corpus");
    synth->add_option("--out", o.out, "output directory")->required();
    synth->add_option("--seed", o.seed, "generator seed");
    synth->add_option("--non-hate", spec.n_non_hate, "non-hate tweet count");
    synth->add_option("--hate", spec.n_hate, "hate tweet count");
    synth->add_option("--planted-rate", spec.planted_rate, "planted-token rate in hate tweets");
    synth->add_option("--users", spec.n_users, "user count");

    auto* ingest = app.add_subcommand("ingest", "load, validate and summarize a corpus");
    add_corpus_options(ingest, o);
    ingest->add_option("--normalized-out", normalized_out, "rewrite normalized corpus files here");

    auto* stats = app.add_subcommand("stats", "corpus statistics report");
    add_corpus_options(stats, o);
    add_output_options(stats, o);
    stats->add_flag("--svg", svg, "emit user-production SVG bar chart");
    stats->add_option("--token-share", extra_tokens,
                      "extra token patterns for a share computation (uses --subset)");
    stats->add_option("--subset", o.subset, "subset for --token-share");

    auto* featurize = app.add_subcommand("featurize", "extract the popularity feature matrix");
    add_corpus_options(featurize, o);
    add_output_options(featurize, o);
    add_lexicon_options(featurize, o);
    add_feature_options(featurize, o);
    featurize->add_option("--subset", o.subset, "corpus subset");
    featurize->add_option("--target", o.target, "target column to emit");

    auto* train = app.add_subcommand("train", "train a model on the full corpus");
    add_corpus_options(train, o);
    add_output_options(train, o);
    add_lexicon_options(train, o);
    add_feature_options(train, o);
    add_vectorizer_options(train, o);
    add_train_options(train, o);
    add_eval_options(train, o);
    train->add_option("--task", o.task, "detect|popularity");
    train->add_option("--target", o.target, "popularity target");
    train->add_option("--subset", o.subset, "corpus subset (popularity)");

    auto* run = app.add_subcommand("run", "cross-validated pipeline evaluation");
    auto* evaluate = app.add_subcommand("evaluate", "alias of run");
    for (CLI::App* cmd : {run, evaluate}) {
        add_corpus_options(cmd, o);
        add_output_options(cmd, o);
        add_lexicon_options(cmd, o);
        add_feature_options(cmd, o);
        add_vectorizer_options(cmd, o);
        add_train_options(cmd, o);
        add_eval_options(cmd, o);
        cmd->add_option("--task", o.task, "detect|popularity");
        cmd->add_option("--target", o.target, "popularity target: liked|retweeted|replied");
        cmd->add_option("--subset", o.subset, "all|hate|non-hate (popularity only)");
        cmd->add_flag("--infogain", with_ig, "append information-gain ranking");
        cmd->add_flag("--chisq", with_chi2, "append chi-squared interaction tests");
        cmd->add_option("--ablate", ablate_unit, "append ablation: group|single");
    }

    auto* infogain = app.add_subcommand("infogain", "information-gain feature ranking");
    add_corpus_options(infogain, o);
    add_output_options(infogain, o);
    add_lexicon_options(infogain, o);
    add_feature_options(infogain, o);
    add_eval_options(infogain, o);
    infogain->add_option("--target", o.target, "target");
    infogain->add_option("--subset", o.subset, "corpus subset");

    auto* chisq = app.add_subcommand("chisq", "chi-squared interaction tests");
    add_corpus_options(chisq, o);
    add_output_options(chisq, o);
    chisq->add_option("--mode", chisq_mode, "binary|histogram");

    auto* ablate_cmd = app.add_subcommand("ablate", "cross-validated feature ablation");
    add_corpus_options(ablate_cmd, o);
    add_output_options(ablate_cmd, o);
    add_lexicon_options(ablate_cmd, o);
    add_feature_options(ablate_cmd, o);
    add_train_options(ablate_cmd, o);
    add_eval_options(ablate_cmd, o);
    ablate_cmd->add_option("--target", o.target, "popularity target");
    ablate_cmd->add_option("--subset", o.subset, "corpus subset");
    ablate_cmd->add_option("--unit", ablate_unit, "group|single")->default_val("group");

    auto* predict = app.add_subcommand("predict", "apply a saved model to feature CSV rows");
    predict->add_option("--model", predict_model, "model JSON file")->required();
    predict->add_option("--features", predict_features, "feature CSV file")->required();
    predict->add_option("--threshold", threshold, "positive-class threshold (logistic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(o, spec);
        if (ingest->parsed()) return cmd_ingest(o, normalized_out);
        if (stats->parsed()) return cmd_stats(o, svg, extra_tokens);
        if (featurize->parsed()) return cmd_featurize(o);
        if (train->parsed()) return cmd_train(o);
        if (run->parsed() || evaluate->parsed()) return cmd_run(o, with_ig, with_chi2, ablate_unit);
        if (infogain->parsed()) return cmd_infogain(o);
        if (chisq->parsed()) return cmd_chisq(o, chisq_mode);
        if (ablate_cmd->parsed()) return cmd_ablate(o, ablate_unit);
        if (predict->parsed()) return cmd_predict(predict_model, predict_features, threshold);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
