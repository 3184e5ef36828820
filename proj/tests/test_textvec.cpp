#include <cmath>
#include <random>

#include "doctest.h"
#include "tweetlab/text_util.hpp"
#include "tweetlab/textvec.hpp"

using namespace tweetlab;

TEST_CASE("char_ngrams enumerates substrings with multiplicity") {
    auto grams = char_ngrams("ab", 1, 2);
    CHECK(grams.size() == 3);
    CHECK(grams["a"] == 1);
    CHECK(grams["b"] == 1);
    CHECK(grams["ab"] == 1);

    CHECK(char_ngrams("", 1, 4).empty());

    auto aaa = char_ngrams("aaa", 2, 2);
    CHECK(aaa.size() == 1);
    CHECK(aaa["aa"] == 2);
}

TEST_CASE("char_ngrams operates on code points") {
    auto grams = char_ngrams("\xc3\xa9x", 1, 2);  // "éx"
    CHECK(grams["\xc3\xa9"] == 1);
    CHECK(grams["x"] == 1);
    CHECK(grams["\xc3\xa9x"] == 1);
}

TEST_CASE("fit computes smoothed idf") {
    std::vector<std::string> docs = {"aa", "ab"};
    VectorizerConfig cfg;
    cfg.n_min = 1;
    cfg.n_max = 1;
    FittedVectorizer v = FittedVectorizer::fit(docs, cfg);
    REQUIRE(v.vocabulary_size() == 2);
    // df(a)=2, df(b)=1, N=2
    CHECK(v.idf()[v.column_of("a")] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.idf()[v.column_of("b")] == doctest::Approx(std::log(3.0 / 2.0) + 1.0).epsilon(1e-12));
}

TEST_CASE("single-doc fit gives idf 1 when df = N") {
    std::vector<std::string> docs = {"x"};
    VectorizerConfig cfg;
    cfg.n_max = 1;
    FittedVectorizer v = FittedVectorizer::fit(docs, cfg);
    CHECK(v.idf()[v.column_of("x")] == doctest::Approx(1.0));
}

TEST_CASE("min_df drops rare terms") {
    std::vector<std::string> docs = {"ab", "ac"};
    VectorizerConfig cfg;
    cfg.n_max = 1;
    cfg.min_df = 2;
    FittedVectorizer v = FittedVectorizer::fit(docs, cfg);
    CHECK(v.column_of("a") >= 0);
    CHECK(v.column_of("b") == -1);
    CHECK(v.column_of("c") == -1);
}

TEST_CASE("transform weights and normalizes") {
    std::vector<std::string> docs = {"aa", "ab"};
    VectorizerConfig cfg;
    cfg.n_max = 1;
    FittedVectorizer v = FittedVectorizer::fit(docs, cfg);
    SparseVector x = v.transform("ab");
    REQUIRE(x.size() == 2);
    double idf_b = std::log(3.0 / 2.0) + 1.0;
    double norm = std::sqrt(1.0 + idf_b * idf_b);
    CHECK(x[0].value == doctest::Approx(1.0 / norm).epsilon(1e-6));
    CHECK(x[1].value == doctest::Approx(idf_b / norm).epsilon(1e-6));
    CHECK(x[0].value == doctest::Approx(0.5798).epsilon(1e-3));
    CHECK(x[1].value == doctest::Approx(0.8148).epsilon(1e-3));

    CHECK(v.transform("").empty());
    CHECK(v.transform("zzz").empty());
}

TEST_CASE("nonzero transformed vectors have unit norm") {
    std::vector<std::string> docs;
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> len(1, 30);
    std::uniform_int_distribution<int> ch('a', 'f');
    for (int i = 0; i < 50; ++i) {
        std::string d;
        int n = len(rng);
        for (int j = 0; j < n; ++j) d.push_back(static_cast<char>(ch(rng)));
        docs.push_back(d);
    }
    FittedVectorizer v = FittedVectorizer::fit(docs, {});
    for (const std::string& d : docs) {
        SparseVector x = v.transform(d);
        REQUIRE(!x.empty());  // training docs never map to zero
        CHECK(l2_norm(x) == doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t i = 1; i < x.size(); ++i) CHECK(x[i].index > x[i - 1].index);
    }
}

TEST_CASE("idf is non-increasing in df") {
    std::vector<std::string> docs = {"ab", "ab", "ac", "ad"};
    VectorizerConfig cfg;
    cfg.n_max = 1;
    FittedVectorizer v = FittedVectorizer::fit(docs, cfg);
    // df(a)=4 > df(b)=2 > df(c)=1
    CHECK(v.idf()[v.column_of("a")] < v.idf()[v.column_of("b")]);
    CHECK(v.idf()[v.column_of("b")] < v.idf()[v.column_of("c")]);
    CHECK(v.idf()[v.column_of("a")] == doctest::Approx(1.0));
}

TEST_CASE("vectorizer JSON round trip preserves behaviour") {
    std::vector<std::string> docs = {"hello world", "hell no"};
    FittedVectorizer v = FittedVectorizer::fit(docs, {});
    FittedVectorizer w = FittedVectorizer::from_json(v.to_json());
    CHECK(w.vocabulary_size() == v.vocabulary_size());
    CHECK(w.transform("hello") == v.transform("hello"));
}

TEST_CASE("standardize centers and scales with population std") {
    std::vector<std::vector<double>> rows = {{1.0}, {2.0}, {3.0}};
    Standardizer s = Standardizer::fit(rows);
    s.apply(rows);
    CHECK(rows[0][0] == doctest::Approx(-1.224745).epsilon(1e-6));
    CHECK(rows[1][0] == doctest::Approx(0.0));
    CHECK(rows[2][0] == doctest::Approx(1.224745).epsilon(1e-6));
}

TEST_CASE("constant columns standardize to zero") {
    std::vector<std::vector<double>> rows = {{5.0}, {5.0}};
    Standardizer s = Standardizer::fit(rows);
    s.apply(rows);
    CHECK(rows[0][0] == 0.0);
    CHECK(rows[1][0] == 0.0);
}

TEST_CASE("re-standardizing with fitted stats is the identity") {
    std::vector<std::vector<double>> rows = {{1.0, 4.0}, {2.0, -1.0}, {5.0, 0.5}, {0.0, 2.0}};
    Standardizer s = Standardizer::fit(rows);
    s.apply(rows);
    Standardizer s2 = Standardizer::fit(rows);
    auto again = rows;
    s2.apply(again);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            CHECK(again[i][j] == doctest::Approx(rows[i][j]).epsilon(1e-12));
        }
    }
}
