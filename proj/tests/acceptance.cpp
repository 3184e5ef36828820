// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria that exercise the CLI use the binary path baked in at
// configure time (TWEETLAB_CLI_PATH).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tweetlab/corpus.hpp"
#include "tweetlab/eval.hpp"
#include "tweetlab/features.hpp"
#include "tweetlab/models.hpp"
#include "tweetlab/synth.hpp"
#include "tweetlab/textvec.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tweetlab;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << ": criterion " << criterion << " — " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

struct Check {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& msg) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += msg;
        }
    }
};

int run_cli(const std::string& args, const fs::path& log) {
    std::string cmd = std::string(TWEETLAB_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    return rc;
}

json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing " + path.string());
    return json::parse(in);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ------------------------------------------------------------- criterion 1

// Builds a corpus whose marginals match the published tables exactly:
// label counts 11104/1942/3126 (hate 5068, total 16172), the non-hate
// likes histogram [9393,1255,246,96,55,59], the hate replies histogram
// [5049,17,2,0,0,0], and the user-type table 1334/2/520/3 (total 1859).
Corpus table_matched_corpus() {
    std::vector<TweetRecord> tweets;
    tweets.reserve(16172);
    std::unordered_map<std::uint64_t, UserRecord> users;
    const std::int64_t base_time = 1451606400;

    auto ensure_user = [&](std::uint64_t id) {
        if (users.contains(id)) return;
        UserRecord u;
        u.id = id;
        u.handle = "u" + std::to_string(id);
        u.display_name = "User " + std::to_string(id);
        u.created_at = base_time - 86400;
        users.emplace(id, u);
    };

    std::uint64_t next_id = 1;
    auto add = [&](std::uint64_t author, LabelSet labels) -> TweetRecord& {
        TweetRecord t;
        t.id = next_id++;
        t.author_id = author;
        t.labels = labels;
        t.text = "tweet " + std::to_string(t.id);
        t.created_at = base_time + static_cast<std::int64_t>(t.id);
        ensure_user(author);
        tweets.push_back(std::move(t));
        return tweets.back();
    };

    // 11104 none tweets over 1334 non-hate users (round robin).
    const std::int64_t likes_row[6] = {9393, 1255, 246, 96, 55, 59};  // bins 0..4,5+
    std::int64_t emitted = 0;
    for (int bin = 0; bin < 6; ++bin) {
        for (std::int64_t i = 0; i < likes_row[bin]; ++i, ++emitted) {
            TweetRecord& t = add(1 + (emitted % 1334), LabelSet{.none = true});
            t.like_count = bin;  // bin 5 stands for "5 or more"
        }
    }

    // 1942 racism tweets: one prolific producer, one minor, three dual users.
    std::vector<std::uint64_t> racism_targets;
    auto add_racism = [&](std::uint64_t author, std::int64_t n) {
        for (std::int64_t i = 0; i < n; ++i) {
            TweetRecord& t = add(author, LabelSet{.racism = true});
            racism_targets.push_back(t.id);
        }
    };
    add_racism(2001, 1927);
    add_racism(2002, 5);
    add_racism(2003, 4);
    add_racism(2004, 3);
    add_racism(2005, 3);

    // 3126 sexism tweets: two heavy producers, the dual users, then the rest.
    auto add_sexism = [&](std::uint64_t author, std::int64_t n) {
        for (std::int64_t i = 0; i < n; ++i) add(author, LabelSet{.sexism = true});
    };
    add_sexism(3001, 1320);
    add_sexism(3002, 964);
    add_sexism(2003, 1);
    add_sexism(2004, 1);
    add_sexism(2005, 1);
    for (int u = 0; u < 518; ++u) {
        add_sexism(3003 + u, u < 321 ? 2 : 1);
    }

    // Hate replies histogram [5049,17,2,0,0,0]: the first 17 racism tweets
    // receive one in-corpus reply each, the next 2 receive two. Repliers are
    // none tweets, which receive no replies themselves.
    std::size_t replier = 0;  // rows 0.. are none tweets
    for (int i = 0; i < 17; ++i) tweets[replier++].in_reply_to = racism_targets[i];
    for (int i = 17; i < 19; ++i) {
        tweets[replier++].in_reply_to = racism_targets[i];
        tweets[replier++].in_reply_to = racism_targets[i];
    }

    return Corpus(std::move(tweets), std::move(users));
}

void criterion_1(const fs::path& work) {
    auto start = std::chrono::steady_clock::now();
    Check c;
    try {
        Corpus corpus = table_matched_corpus();
        fs::path dir = work / "c1";
        fs::create_directories(dir);
        write_tweets_jsonl(corpus, (dir / "tweets.jsonl").string());
        write_annotations(annotations_of(corpus), (dir / "annotations.tsv").string());

        int rc = run_cli("stats --annotations " + (dir / "annotations.tsv").string() +
                             " --tweets " + (dir / "tweets.jsonl").string() + " --out " +
                             (dir / "reports").string() + " --tag t",
                         dir / "stats.log");
        c.require(rc == 0, "stats exited " + std::to_string(rc));
        json rep = read_json(dir / "reports" / "stats" / "t" / "report.json");

        const json& ld = rep.at("label_distribution");
        c.require(ld.at("none") == 11104 && ld.at("racism") == 1942 &&
                      ld.at("sexism") == 3126 && ld.at("hate") == 5068 &&
                      ld.at("total") == 16172,
                  "label distribution mismatch: " + ld.dump());

        auto find_hist = [&](const std::string& subset, const std::string& kind) -> json {
            for (const json& h : rep.at("interaction_histograms")) {
                if (h.at("subset") == subset && h.at("kind") == kind) return h.at("bins");
            }
            return json();
        };
        json likes = find_hist("non-hate", "likes");
        c.require(likes == json({9393, 1255, 246, 96, 55, 59}),
                  "non-hate likes row: " + likes.dump());
        json replies = find_hist("hate", "replies");
        c.require(replies == json({5049, 17, 2, 0, 0, 0}), "hate replies row: " + replies.dump());

        const json& ut = rep.at("user_types");
        c.require(ut.at("non_hate") == 1334 && ut.at("racist") == 2 && ut.at("sexist") == 520 &&
                      ut.at("racist_and_sexist") == 3 && ut.at("total") == 1859,
                  "user types mismatch: " + ut.dump());
    } catch (const std::exception& e) {
        c.require(false, e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(secs < 30.0, "took " + std::to_string(secs) + "s");
    report(1, c.ok, "table-matched corpus statistics reproduce exactly", c.detail);
}

// ------------------------------------------------------------- criterion 2

void criterion_2(const fs::path& work) {
    auto start = std::chrono::steady_clock::now();
    Check c;
    try {
        fs::path dir = work / "c2";
        fs::create_directories(dir);
        int rc = run_cli("synth --out " + (dir / "corpus").string() + " --seed 42",
                         dir / "synth.log");
        c.require(rc == 0, "synth exited " + std::to_string(rc));

        std::string common = "run --task detect --model logistic --annotations " +
                             (dir / "corpus" / "annotations.tsv").string() + " --tweets " +
                             (dir / "corpus" / "tweets.jsonl").string() +
                             " --learning-rate 5 --epochs 400 --tolerance 1e-8 --seed 42 --out " +
                             (dir / "reports").string();
        rc = run_cli(common + " --tag a", dir / "run_a.log");
        c.require(rc == 0, "run exited " + std::to_string(rc));
        rc = run_cli(common + " --tag b", dir / "run_b.log");
        c.require(rc == 0, "rerun exited " + std::to_string(rc));

        fs::path rep_a = dir / "reports" / "detect" / "a" / "report.json";
        fs::path rep_b = dir / "reports" / "detect" / "b" / "report.json";
        json rep = read_json(rep_a);
        double f1 = rep.at("cv").at("mean").at("f1_positive").get<double>();
        c.require(f1 >= 0.95, "mean F1 " + std::to_string(f1));
        c.require(slurp(rep_a) == slurp(rep_b), "reports differ between identical runs");
        c.require(slurp(dir / "reports" / "detect" / "a" / "metrics.csv") ==
                      slurp(dir / "reports" / "detect" / "b" / "metrics.csv"),
                  "metrics.csv differs between identical runs");
    } catch (const std::exception& e) {
        c.require(false, e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(secs < 60.0, "took " + std::to_string(secs) + "s");
    report(2, c.ok, "synthetic detect run: 10-fold F1 >= 0.95, byte-identical reruns", c.detail);
}

// ------------------------------------------------------------- criterion 3

void criterion_3() {
    Check c;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> n_dist(2, 20);
    std::uniform_int_distribution<int> d_dist(1, 10);
    std::normal_distribution<double> val(0.0, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = n_dist(rng), d = d_dist(rng);
        std::vector<std::vector<double>> rows(n, std::vector<double>(d));
        std::vector<bool> y(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) rows[i][j] = val(rng);
            y[i] = unit(rng) < 0.5;
        }
        SparseMatrix X = SparseMatrix::from_dense(rows);
        X.n_cols = d;
        std::vector<double> w(d);
        for (double& wi : w) wi = val(rng);
        double b = val(rng);
        double lambda = unit(rng) * 0.1;
        auto [loss, grad] = logistic_loss_grad(w, b, X, y, lambda);
        for (int j = 0; j <= d; ++j) {
            auto wp = w, wm = w;
            double bp = b, bm = b;
            if (j < d) {
                wp[j] += h;
                wm[j] -= h;
            } else {
                bp += h;
                bm -= h;
            }
            double fd = (logistic_loss_grad(wp, bp, X, y, lambda).first -
                         logistic_loss_grad(wm, bm, X, y, lambda).first) /
                        (2.0 * h);
            double denom = std::max({std::fabs(grad[j]), std::fabs(fd), 1e-8});
            worst = std::max(worst, std::fabs(grad[j] - fd) / denom);
        }
    }
    c.require(worst < 1e-5, "max relative error " + std::to_string(worst));
    report(3, c.ok, "logistic gradient matches central finite differences", c.detail);
}

// ------------------------------------------------------------- criterion 4

void criterion_4() {
    Check c;
    Chi2Result r = chi2_test({{10, 20}, {30, 40}});
    c.require(std::fabs(r.statistic - 0.79365) < 1e-5,
              "statistic " + std::to_string(r.statistic));
    double p = chi2_survival(3.841, 1);
    c.require(std::fabs(p - 0.05) < 1e-3, "p(3.841, df=1) = " + std::to_string(p));
    Chi2Result ind = chi2_test({{10, 20}, {20, 40}});
    c.require(ind.statistic < 1e-10, "independence statistic " + std::to_string(ind.statistic));
    c.require(std::fabs(ind.p_value - 1.0) < 1e-9, "independence p " + std::to_string(ind.p_value));
    report(4, c.ok, "chi-squared statistic and p-value oracles", c.detail);
}

// ------------------------------------------------------------- criterion 5

void criterion_5() {
    Check c;
    std::vector<bool> y = {true, true, false, false};
    double perfect = information_gain(std::vector<double>{1.0, 1.0, 0.0, 0.0}, y);
    c.require(std::fabs(perfect - 1.0) < 1e-6, "perfect split IG " + std::to_string(perfect));
    double none = information_gain(std::vector<double>{2.0, 2.0, 2.0, 2.0}, y);
    c.require(std::fabs(none) < 1e-6, "constant IG " + std::to_string(none));
    double part = information_gain(std::vector<double>{0.0, 0.0, 0.0, 1.0}, y);
    c.require(std::fabs(part - 0.311278) < 1e-6, "partial IG " + std::to_string(part));

    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<bool> labels(500);
    for (int i = 0; i < 500; ++i) labels[i] = unit(rng) < 0.35;
    double hy = binary_entropy_bits(labels);
    for (int col = 0; col < 20; ++col) {
        std::vector<double> column(500);
        for (int i = 0; i < 500; ++i) {
            column[i] = col % 2 == 0 ? unit(rng) : std::floor(unit(rng) * 4.0);
        }
        double ig = information_gain(column, labels);
        c.require(ig >= 0.0 && ig <= hy + 1e-12,
                  "IG out of [0, H(Y)]: " + std::to_string(ig));
    }
    report(5, c.ok, "information-gain oracles and bounds", c.detail);
}

// ------------------------------------------------------------- criterion 6

void criterion_6() {
    Check c;
    Metrics m = confusion_and_metrics({true, true, false, false}, {true, false, false, false});
    c.require(std::fabs(m.accuracy - 0.75) < 1e-9, "accuracy " + std::to_string(m.accuracy));
    c.require(std::fabs(m.precision - 1.0) < 1e-9, "precision " + std::to_string(m.precision));
    c.require(std::fabs(m.recall - 0.5) < 1e-9, "recall " + std::to_string(m.recall));
    c.require(std::fabs(m.f1_positive - 2.0 / 3.0) < 1e-9, "f1 " + std::to_string(m.f1_positive));

    std::vector<bool> y;
    for (int i = 0; i < 100; ++i) y.push_back(i >= 60);  // 60 negative, 40 positive
    FoldPlan plan = stratified_kfold(y, 10, 42);
    for (int f = 0; f < 10; ++f) {
        int pos = 0, neg = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (plan.assignment[i] != f) continue;
            (y[i] ? pos : neg)++;
        }
        c.require(std::abs(pos - 4) <= 1 && std::abs(neg - 6) <= 1,
                  "fold " + std::to_string(f) + " has " + std::to_string(pos) + "/" +
                      std::to_string(neg));
    }
    report(6, c.ok, "metrics oracle and stratified fold balance", c.detail);
}

// ------------------------------------------------------------- criterion 7

void criterion_7() {
    Check c;
    std::vector<std::string> docs;
    std::vector<bool> y;
    for (int i = 0; i < 20; ++i) {
        docs.push_back(i % 2 == 0 ? "aaaa bbbb" : "cccc dddd");
        y.push_back(i % 2 == 0);
    }
    docs[0] = "aaaa QQQQ";  // poisoned sentinel, present only in row 0

    FoldPlan plan = stratified_kfold(y, 5, 7);
    int sentinel_fold = plan.assignment[0];
    DetectPipeline pipeline(docs, y, VectorizerConfig{}, ModelKind::logistic, TrainConfig{});
    pipeline.fit(plan.train_rows(sentinel_fold));
    c.require(pipeline.vectorizer().column_of("qqqq") == -1,
              "sentinel n-gram leaked into the training vocabulary");
    c.require(pipeline.vectorizer().column_of("aaaa") >= 0, "expected n-gram missing");
    c.require(pipeline.predict(plan.test_rows(sentinel_fold)).size() ==
                  plan.test_rows(sentinel_fold).size(),
              "prediction size mismatch");
    report(7, c.ok, "per-fold preprocessing never reads test rows", c.detail);
}

// ------------------------------------------------------------- criterion 8

void criterion_8() {
    Check c;
    std::string source;
    try {
        Corpus corpus;
        const char* ann_env = std::getenv("TWEETLAB_ANNOTATIONS");
        const char* tw_env = std::getenv("TWEETLAB_TWEETS");
        if (ann_env && tw_env) {
            source = "real corpus";
            corpus = load_corpus(load_annotations(ann_env), tw_env).corpus;
        } else {
            // Distribution-matched synthetic corpus: hate tweets are liked
            // less and (positionally) replied-to less, retweet behaviour is
            // class-independent, and replies are never retweeted.
            source = "distribution-matched synthetic corpus";
            SynthSpec spec;
            spec.reply_rate = 0.08;
            spec.hate_reply_rate = 0.08;
            spec.reply_retweet_p = 1.0;
            corpus = synth_corpus(spec, 42);
        }

        double p_likes = interaction_chi2(corpus, InteractionKind::likes,
                                          Chi2Mode::binary).result.p_value;
        double p_retweets = interaction_chi2(corpus, InteractionKind::retweets,
                                             Chi2Mode::binary).result.p_value;
        double p_replies = interaction_chi2(corpus, InteractionKind::replies,
                                            Chi2Mode::binary).result.p_value;
        c.require(p_likes < 0.05, "likes p " + std::to_string(p_likes));
        c.require(p_replies < 0.05, "replies p " + std::to_string(p_replies));
        c.require(p_retweets > 0.05, "retweets p " + std::to_string(p_retweets));

        FeatureMatrix matrix = build_matrix(
            corpus, LexiconSet{},
            {FeatureGroup::Tweet, FeatureGroup::User, FeatureGroup::Content},
            /*include_user_id=*/true);
        auto ranking = rank_features_ig(matrix, targets(corpus, TargetKind::retweeted));
        c.require(!ranking.empty() && ranking[0].feature == "is_reply",
                  "top IG feature for retweeted: " +
                      (ranking.empty() ? "<none>" : ranking[0].feature));
    } catch (const std::exception& e) {
        c.require(false, e.what());
    }
    report(8, c.ok, "interaction-test directions and is_reply IG rank (" + source + ")",
           c.detail);
}

// ------------------------------------------------------------- criterion 9

void criterion_9() {
    Check c;
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    FeatureMatrix m;
    m.column_names = {"copy", "noise_user", "noise_content"};
    m.column_groups = {FeatureGroup::Tweet, FeatureGroup::User, FeatureGroup::Content};
    std::vector<bool> y;
    for (int i = 0; i < 200; ++i) {
        bool label = i % 10 < 3;  // prior 0.7 negative
        m.rows.push_back({label ? 1.0 : 0.0, unit(rng), unit(rng)});
        y.push_back(label);
    }
    FoldPlan plan = stratified_kfold(y, 5, 11);
    TrainConfig tc;
    tc.learning_rate = 1.0;
    tc.max_epochs = 300;

    AblationReport single = ablate(m, y, plan, ModelKind::logistic, tc, AblationUnit::single);
    c.require(std::fabs(single.full_mean.accuracy - 1.0) < 1e-9,
              "full accuracy " + std::to_string(single.full_mean.accuracy));
    bool found = false;
    for (const AblationRow& row : single.rows) {
        if (row.unit != "copy") continue;
        found = true;
        c.require(std::fabs(row.ablated_mean.accuracy - 0.7) <= 0.02,
                  "ablated accuracy " + std::to_string(row.ablated_mean.accuracy));
    }
    c.require(found, "no ablation row for the copied feature");

    AblationReport group = ablate(m, y, plan, ModelKind::logistic, tc, AblationUnit::group);
    c.require(group.rows.size() == 3,
              "group rows: " + std::to_string(group.rows.size()));
    std::set<std::string> names;
    for (const AblationRow& row : group.rows) names.insert(row.unit);
    c.require(names == std::set<std::string>{"content", "tweet", "user"},
              "unexpected group names");
    report(9, c.ok, "ablation drops the copied feature to the class prior; one row per group",
           c.detail);
}

}  // namespace

int main() {
    fs::path work = fs::temp_directory_path() / "tweetlab_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    criterion_1(work);
    criterion_2(work);
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();

    fs::remove_all(work);
    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) + " criteria failed")
              << "\n";
    return g_failures == 0 ? 0 : 1;
}
