#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "tweetlab/corpus.hpp"
#include "tweetlab/synth.hpp"
#include "tweetlab/text_util.hpp"

using namespace tweetlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("tweetlab_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int counter;
};
int TempDir::counter = 0;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("timestamp parsing round-trips") {
    CHECK(parse_iso8601_utc("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_iso8601_utc("2016-01-01T00:00:00Z") == 1451606400);
    CHECK(parse_iso8601_utc("2016-01-01 00:00:00") == 1451606400);
    CHECK(parse_iso8601_utc("2016-02-29T12:30:45Z") == 1456749045);  // leap day
    CHECK(format_iso8601_utc(1451606400) == "2016-01-01T00:00:00Z");
    CHECK(format_iso8601_utc(parse_iso8601_utc("2021-07-15T23:59:59Z")) ==
          "2021-07-15T23:59:59Z");
    CHECK_THROWS_AS(parse_iso8601_utc("not a date"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso8601_utc("2016-13-01T00:00:00Z"), std::invalid_argument);
}

TEST_CASE("token normalization strips decorations") {
    CHECK(normalize_token("@User!") == "user");
    CHECK(normalize_token("#MKR") == "mkr");
    CHECK(normalize_token("Hello,") == "hello");
    CHECK(normalize_token("plain") == "plain");
    CHECK(normalize_token("...") == "");
}

TEST_CASE("utf8 helpers count code points") {
    CHECK(utf8_length("abc") == 3);
    CHECK(utf8_length("\xc3\xa9x") == 2);  // "éx"
    auto toks = whitespace_tokens("  a\tbb  c ");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0] == "a");
    CHECK(toks[1] == "bb");
    CHECK(toks[2] == "c");
}

TEST_CASE("annotations parse, merge, and validate") {
    std::string content =
        "# comment line\n"
        "1\tnone\n"
        "2\tracism\n"
        "2\tsexism\n"
        "3\tSEXISM\n"
        "\n";
    AnnotationMap ann = parse_annotations(content, "test");
    REQUIRE(ann.size() == 3);
    CHECK(ann[1].none);
    CHECK(ann[2].racism);
    CHECK(ann[2].sexism);
    CHECK(!ann[2].none);
    CHECK(ann[3].sexism);
    CHECK(ann[2].hate());
}

TEST_CASE("annotation errors carry line numbers") {
    try {
        parse_annotations("# ok\n2\thate\n", "f");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("f:2") != std::string::npos);
        CHECK(std::string(e.what()).find("hate") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_annotations("abc\tnone\n", "f"), ParseError);
    CHECK_THROWS_AS(parse_annotations("1 none\n", "f"), ParseError);  // no tab
    // none cannot co-occur with a hate label
    CHECK_THROWS_AS(parse_annotations("1\tnone\n1\tracism\n", "f"), ValidationError);
}

TEST_CASE("corpus write/load round trip reports unavailable ids") {
    SynthSpec spec;
    spec.n_non_hate = 30;
    spec.n_hate = 15;
    Corpus c = synth_corpus(spec, 4);

    TempDir dir;
    fs::path tweets = dir.path / "tweets.jsonl";
    fs::path ann_path = dir.path / "annotations.tsv";
    write_tweets_jsonl(c, tweets.string());

    AnnotationMap ann = annotations_of(c);
    ann[999999] = LabelSet{.racism = true};  // annotated but not in the dump
    write_annotations(ann, ann_path.string());

    AnnotationMap loaded_ann = load_annotations(ann_path.string());
    CHECK(loaded_ann.size() == ann.size());
    CorpusLoadResult r = load_corpus(loaded_ann, tweets.string());
    CHECK(r.corpus.tweets().size() == c.tweets().size());
    REQUIRE(r.unavailable.size() == 1);
    CHECK(r.unavailable[0] == 999999);
    CHECK(r.record_errors.empty());

    // Field-level fidelity on a few records
    for (std::size_t i : {std::size_t{0}, c.tweets().size() - 1}) {
        const TweetRecord& a = c.tweets()[i];
        const TweetRecord& b = r.corpus.tweets()[i];
        CHECK(a.id == b.id);
        CHECK(a.text == b.text);
        CHECK(a.created_at == b.created_at);
        CHECK(a.like_count == b.like_count);
        CHECK(a.retweet_count == b.retweet_count);
        CHECK(a.in_reply_to == b.in_reply_to);
        CHECK(a.labels == b.labels);
        CHECK(a.author_id == b.author_id);
    }
    // only users who authored a tweet survive the dump format
    std::set<std::uint64_t> authors;
    for (const TweetRecord& t : c.tweets()) authors.insert(t.author_id);
    CHECK(r.corpus.users().size() == authors.size());
}

TEST_CASE("unannotated tweets are dropped and bad records collected") {
    SynthSpec spec;
    spec.n_non_hate = 5;
    spec.n_hate = 3;
    Corpus c = synth_corpus(spec, 1);

    TempDir dir;
    fs::path tweets = dir.path / "tweets.jsonl";
    write_tweets_jsonl(c, tweets.string());
    {
        std::ofstream out(tweets, std::ios::app);
        out << "{\"garbage\": true}\n";
        out << "not json at all\n";
    }
    AnnotationMap ann = annotations_of(c);
    ann.erase(ann.begin());  // drop one annotation -> that tweet is skipped
    CorpusLoadResult r = load_corpus(ann, tweets.string());
    CHECK(r.corpus.tweets().size() == c.tweets().size() - 1);
    CHECK(r.record_errors.size() == 2);
}

TEST_CASE("zero loadable tweets is fatal") {
    TempDir dir;
    fs::path tweets = dir.path / "tweets.jsonl";
    std::ofstream(tweets).close();
    AnnotationMap ann;
    ann[1] = LabelSet{.none = true};
    CHECK_THROWS_AS(load_corpus(ann, tweets.string()), ValidationError);
}

TEST_CASE("label distribution counts dual labels once") {
    std::vector<TweetRecord> tweets;
    auto add = [&](std::uint64_t id, bool none, bool racism, bool sexism) {
        TweetRecord t;
        t.id = id;
        t.author_id = 1;
        t.text = "x";
        t.labels = {none, racism, sexism};
        tweets.push_back(t);
    };
    add(1, true, false, false);
    add(2, true, false, false);
    add(3, false, true, false);
    add(4, false, false, true);
    add(5, false, true, true);  // dual-labeled
    std::unordered_map<std::uint64_t, UserRecord> users;
    users[1] = UserRecord{.id = 1};
    Corpus c(std::move(tweets), std::move(users));

    LabelDistribution d = label_distribution(c);
    CHECK(d.none == 2);
    CHECK(d.racism == 2);
    CHECK(d.sexism == 2);
    CHECK(d.hate == 3);   // tweet 5 counted once
    CHECK(d.total == 5);
    CHECK(c.subset_size(Subset::hate) == 3);
    CHECK(c.subset_size(Subset::non_hate) == 2);
}

TEST_CASE("interaction histogram bins 0..4 and 5+") {
    std::vector<TweetRecord> tweets;
    std::int64_t likes[] = {0, 7, 3, 5, 0, 12};
    for (int i = 0; i < 6; ++i) {
        TweetRecord t;
        t.id = 10 + i;
        t.author_id = 1;
        t.text = "x";
        t.labels.none = true;
        t.like_count = likes[i];
        tweets.push_back(t);
    }
    std::unordered_map<std::uint64_t, UserRecord> users;
    users[1] = UserRecord{.id = 1};
    Corpus c(std::move(tweets), std::move(users));

    InteractionHistogram h = interaction_histogram(c, InteractionKind::likes, Subset::all);
    CHECK(h.bins[0] == 2);
    CHECK(h.bins[1] == 0);
    CHECK(h.bins[2] == 0);
    CHECK(h.bins[3] == 1);
    CHECK(h.bins[4] == 0);
    CHECK(h.bins[5] == 3);  // 7, 5, 12
    // full histogram is uncapped and sorted by count
    REQUIRE(h.full.size() == 5);
    CHECK(h.full[0] == std::pair<std::int64_t, std::int64_t>{0, 2});
    CHECK(h.full.back() == std::pair<std::int64_t, std::int64_t>{12, 1});
}

TEST_CASE("reply counts come from in-corpus joins") {
    std::vector<TweetRecord> tweets;
    for (int i = 0; i < 4; ++i) {
        TweetRecord t;
        t.id = 100 + i;
        t.author_id = 1;
        t.text = "x";
        t.labels.none = true;
        tweets.push_back(t);
    }
    tweets[1].in_reply_to = 100;
    tweets[2].in_reply_to = 100;
    tweets[3].in_reply_to = 555;  // outside the corpus; ignored
    std::unordered_map<std::uint64_t, UserRecord> users;
    users[1] = UserRecord{.id = 1};
    Corpus c(std::move(tweets), std::move(users));

    CHECK(c.in_corpus_reply_count(0) == 2);
    CHECK(c.in_corpus_reply_count(1) == 0);
    InteractionHistogram h = interaction_histogram(c, InteractionKind::replies, Subset::all);
    CHECK(h.bins[0] == 3);
    CHECK(h.bins[2] == 1);
}

TEST_CASE("user classification follows produced labels") {
    std::vector<TweetRecord> tweets;
    auto add = [&](std::uint64_t id, std::uint64_t author, bool racism, bool sexism) {
        TweetRecord t;
        t.id = id;
        t.author_id = author;
        t.text = "x";
        if (racism) t.labels.racism = true;
        if (sexism) t.labels.sexism = true;
        if (!racism && !sexism) t.labels.none = true;
        tweets.push_back(t);
    };
    add(1, 1, false, false);  // user 1: non-hate
    add(2, 2, true, false);   // user 2: racist
    add(3, 3, false, true);   // user 3: sexist
    add(4, 4, true, false);   // user 4: racist and sexist
    add(5, 4, false, true);
    add(6, 3, false, true);
    std::unordered_map<std::uint64_t, UserRecord> users;
    for (std::uint64_t u = 1; u <= 4; ++u) users[u] = UserRecord{.id = u};
    Corpus c(std::move(tweets), std::move(users));

    UserTypeTable t = classify_users(c);
    CHECK(t.non_hate == 1);
    CHECK(t.racist == 1);
    CHECK(t.sexist == 1);
    CHECK(t.racist_and_sexist == 1);
    CHECK(t.hate() == 3);
    CHECK(t.total() == 4);

    auto prod = user_production_histogram(c);
    REQUIRE(prod.size() == 3);
    CHECK(prod[0] == std::pair<std::uint64_t, std::int64_t>{3, 2});
    CHECK(prod[1] == std::pair<std::uint64_t, std::int64_t>{4, 2});  // tie broken by id
    CHECK(prod[2] == std::pair<std::uint64_t, std::int64_t>{2, 1});
}

TEST_CASE("token_share matches exact whitespace tokens") {
    std::vector<TweetRecord> tweets;
    const char* texts[] = {"RT @user check this", "nothing here", "rt lowercase only",
                           "ends with RT"};
    for (int i = 0; i < 4; ++i) {
        TweetRecord t;
        t.id = 1 + i;
        t.author_id = 1;
        t.text = texts[i];
        t.labels.none = true;
        tweets.push_back(t);
    }
    std::unordered_map<std::uint64_t, UserRecord> users;
    users[1] = UserRecord{.id = 1};
    Corpus c(std::move(tweets), std::move(users));

    CHECK(token_share(c, Subset::all, {"RT"}, true) == doctest::Approx(0.5));
    CHECK(token_share(c, Subset::all, {"RT"}, false) == doctest::Approx(0.75));
    CHECK(token_share(c, Subset::all, {"missing"}, true) == doctest::Approx(0.0));
}

TEST_CASE("synthetic corpus is deterministic and well formed") {
    SynthSpec spec;
    spec.n_non_hate = 60;
    spec.n_hate = 40;
    Corpus a = synth_corpus(spec, 99);
    Corpus b = synth_corpus(spec, 99);
    REQUIRE(a.tweets().size() == 100);
    REQUIRE(b.tweets().size() == 100);

    TempDir dir;
    fs::path pa = dir.path / "a.jsonl";
    fs::path pb = dir.path / "b.jsonl";
    write_tweets_jsonl(a, pa.string());
    write_tweets_jsonl(b, pb.string());
    CHECK(slurp(pa) == slurp(pb));

    Corpus other = synth_corpus(spec, 100);
    fs::path pc = dir.path / "c.jsonl";
    write_tweets_jsonl(other, pc.string());
    CHECK(slurp(pa) != slurp(pc));

    LabelDistribution d = label_distribution(a);
    CHECK(d.none == 60);
    CHECK(d.hate == 40);
    CHECK(d.racism + d.sexism == 40);
    for (const TweetRecord& t : a.tweets()) {
        CHECK(!t.labels.empty());
        CHECK(a.users().count(t.author_id) == 1);
        if (t.in_reply_to) CHECK(a.find_tweet(*t.in_reply_to) != nullptr);
    }
}

TEST_CASE("synth spec validation rejects bad rates") {
    SynthSpec spec;
    spec.planted_rate = 1.5;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = SynthSpec{};
    spec.like_p = 0.0;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = SynthSpec{};
    spec.planted_tokens.clear();
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("reference time defaults to the newest tweet") {
    SynthSpec spec;
    spec.n_non_hate = 20;
    spec.n_hate = 10;
    Corpus c = synth_corpus(spec, 2);
    std::int64_t max_created = 0;
    for (const TweetRecord& t : c.tweets()) max_created = std::max(max_created, t.created_at);
    CHECK(c.reference_time() == max_created);
}
