#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "semwave/embedding.hpp"

using namespace semwave;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    auto p = fs::temp_directory_path() / ("semwave_test_" + name);
    fs::remove(p);
    return p;
}

EmbeddingSet random_set(std::size_t n, std::size_t dim, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    EmbeddingSet set("random");
    for (std::size_t i = 0; i < n; ++i) {
        EmbeddingVector v;
        for (std::size_t j = 0; j < dim; ++j) v.values.push_back(dist(gen));
        set.insert("tok" + std::to_string(i), std::move(v));
    }
    return set;
}

fs::path fixture_path() {
    const char* dir = std::getenv("SEMWAVE_FIXTURES");
    REQUIRE(dir != nullptr);
    return fs::path(dir) / "embeddings.jsonl";
}

} // namespace

TEST_CASE("jsonl loading") {
    auto p = temp_file("basic.jsonl");
    {
        std::ofstream out(p);
        out << R"({"token": "a", "embedding": [1, 0, 0, 0]})" << "\n";
        out << R"({"token": "b", "embedding": [0, 1, 0, 0]})" << "\n";
        out << R"({"token": "c", "embedding": [0, 0, 1, 0]})" << "\n";
    }
    auto set = load_embeddings(p, EmbeddingFormat::jsonl);
    CHECK(set.size() == 3);
    CHECK(set.dim() == 4);
    CHECK(set.tokens() == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("dimension mismatch names the offending token") {
    auto p = temp_file("mismatch.jsonl");
    {
        std::ofstream out(p);
        out << R"({"token": "ok", "embedding": [1, 0, 0, 0]})" << "\n";
        out << R"({"token": "bad", "embedding": [1, 0, 0, 0, 0]})" << "\n";
    }
    CHECK_THROWS_WITH_AS(load_embeddings(p, EmbeddingFormat::jsonl),
                         doctest::Contains("bad"), std::runtime_error);
}

TEST_CASE("duplicate token rejected") {
    auto p = temp_file("dup.csv");
    {
        std::ofstream out(p);
        out << "x,1,2\nx,3,4\n";
    }
    CHECK_THROWS_WITH_AS(load_embeddings(p, EmbeddingFormat::csv),
                         doctest::Contains("duplicate"), std::runtime_error);
}

TEST_CASE("unparseable row reports line number") {
    auto p = temp_file("bad.jsonl");
    {
        std::ofstream out(p);
        out << R"({"token": "a", "embedding": [1]})" << "\n";
        out << "not json\n";
    }
    CHECK_THROWS_WITH_AS(load_embeddings(p, EmbeddingFormat::jsonl),
                         doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("binary roundtrip is exact") {
    auto set = random_set(17, 12, 42);
    auto p = temp_file("roundtrip.semw");
    save_embeddings(set, p, EmbeddingFormat::binary);
    auto loaded = load_embeddings(p, EmbeddingFormat::binary);
    REQUIRE(loaded.size() == set.size());
    CHECK(loaded.dim() == set.dim());
    for (const auto& t : set.tokens())
        for (std::size_t j = 0; j < set.dim(); ++j)
            CHECK(loaded.at(t).values[j] == set.at(t).values[j]);
}

TEST_CASE("csv roundtrip") {
    auto set = random_set(5, 6, 7);
    auto p = temp_file("roundtrip.csv");
    save_embeddings(set, p, EmbeddingFormat::csv);
    auto loaded = load_embeddings(p, EmbeddingFormat::csv);
    for (const auto& t : set.tokens())
        for (std::size_t j = 0; j < set.dim(); ++j)
            CHECK(loaded.at(t).values[j] == doctest::Approx(set.at(t).values[j]).epsilon(1e-15));
}

TEST_CASE("cosine similarity basics") {
    EmbeddingVector v{{0.3, -1.2, 2.0}};
    CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-12));

    EmbeddingVector e1{{1.0, 0.0}}, e2{{0.0, 1.0}}, d{{1.0, 1.0}};
    CHECK(cosine_similarity(e1, e2) == doctest::Approx(0.0));
    CHECK(cosine_similarity(e1, d) == doctest::Approx(0.70710678).epsilon(1e-9));

    CHECK_THROWS_AS(cosine_similarity(e1, v), std::invalid_argument);
    EmbeddingVector zero{{0.0, 0.0}};
    CHECK_THROWS_AS(cosine_similarity(e1, zero), std::invalid_argument);
}

TEST_CASE("cosine similarity properties") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int it = 0; it < 200; ++it) {
        EmbeddingVector a, b;
        for (int j = 0; j < 16; ++j) {
            a.values.push_back(dist(gen));
            b.values.push_back(dist(gen));
        }
        const double sab = cosine_similarity(a, b);
        CHECK(sab == cosine_similarity(b, a));
        CHECK(std::abs(sab) <= 1.0 + 1e-12);

        EmbeddingVector as = a;
        const double s = scale(gen);
        for (auto& x : as.values) x *= s;
        CHECK(cosine_similarity(as, b) == doctest::Approx(sab).epsilon(1e-12));
    }
}

TEST_CASE("pca: collinear points have zero second variance") {
    EmbeddingSet set("synthetic");
    for (int i = 0; i < 3; ++i) {
        EmbeddingVector v;
        for (int j = 0; j < 5; ++j) v.values.push_back((i + 1) * (j + 0.5));
        set.insert("p" + std::to_string(i), std::move(v));
    }
    auto res = pca_project(set, 2);
    CHECK(res.explained_variance_ratio[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.explained_variance_ratio[1] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("pca: ratios nonincreasing and bounded") {
    auto set = random_set(10, 6, 3);
    auto res = pca_project(set, 4);
    double sum = 0.0;
    for (std::size_t i = 0; i < res.explained_variance_ratio.size(); ++i) {
        if (i > 0)
            CHECK(res.explained_variance_ratio[i] <= res.explained_variance_ratio[i - 1] + 1e-14);
        sum += res.explained_variance_ratio[i];
    }
    CHECK(sum <= 1.0 + 1e-12);
}

TEST_CASE("pca: full-rank projection reconstructs centered data") {
    const std::size_t dim = 5;
    auto set = random_set(10, dim, 11);
    auto res = pca_project(set, dim);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& orig = set.at(res.tokens[i]).values;
        for (std::size_t j = 0; j < dim; ++j) {
            double rec = res.mean[j];
            for (std::size_t c = 0; c < dim; ++c)
                rec += res.coords[i][c] * res.components[c][j];
            CHECK(rec == doctest::Approx(orig[j]).epsilon(1e-8));
        }
    }
}

TEST_CASE("pca: sign convention makes largest loading positive") {
    auto set = random_set(8, 4, 23);
    auto res = pca_project(set, 3);
    for (const auto& comp : res.components) {
        double best = 0.0;
        for (double x : comp)
            if (std::abs(x) > std::abs(best)) best = x;
        CHECK(best > 0.0);
    }
}

TEST_CASE("pca: k out of range and degenerate inputs rejected") {
    auto set = random_set(3, 5, 1);
    CHECK_THROWS_AS(pca_project(set, 4), std::invalid_argument);
    CHECK_THROWS_AS(pca_project(set, 0), std::invalid_argument);

    EmbeddingSet same("same");
    for (int i = 0; i < 3; ++i)
        same.insert("t" + std::to_string(i), EmbeddingVector{{1.0, 2.0}});
    CHECK_THROWS_AS(pca_project(same, 1), std::invalid_argument);
}

TEST_CASE("scan: symmetric candidate has zero delta") {
    EmbeddingSet set("synthetic");
    set.insert("A", EmbeddingVector{{1.0, 0.0, 0.0}});
    set.insert("B", EmbeddingVector{{0.0, 1.0, 0.0}});
    set.insert("x", EmbeddingVector{{1.0, 1.0, 0.5}}); // equidistant by construction
    auto res = scan_balanced_tokens(lookup_from(set), "A", "B", "x", 1);
    REQUIRE(res.ranked.size() == 1);
    CHECK(res.ranked[0].delta == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scan: ranking matches exhaustive recomputation") {
    EmbeddingSet set("synthetic");
    set.insert("dog", EmbeddingVector{{1.0, 0.2, -0.3}});
    set.insert("cat", EmbeddingVector{{-0.4, 0.9, 0.1}});
    set.insert("a", EmbeddingVector{{0.7, 0.7, 0.0}});
    set.insert("b", EmbeddingVector{{0.1, -0.8, 0.4}});
    set.insert("c", EmbeddingVector{{-0.2, 0.3, 0.9}});
    auto res = scan_balanced_tokens(lookup_from(set), "dog", "cat", "abc", 1);
    REQUIRE(res.ranked.size() == 3);

    // brute force over all candidates
    std::vector<std::pair<std::string, double>> brute;
    for (std::string cand : {"a", "b", "c"}) {
        double d = std::abs(cosine_similarity(set.at(cand), set.at("dog")) -
                            cosine_similarity(set.at(cand), set.at("cat")));
        brute.emplace_back(cand, d);
    }
    std::sort(brute.begin(), brute.end(),
              [](const auto& x, const auto& y) { return x.second < y.second; });
    for (std::size_t i = 0; i < brute.size(); ++i) {
        CHECK(res.ranked[i].candidate == brute[i].first);
        CHECK(res.ranked[i].delta == doctest::Approx(brute[i].second).epsilon(1e-14));
    }
}

TEST_CASE("scan: errors") {
    EmbeddingSet set("synthetic");
    set.insert("A", EmbeddingVector{{1.0, 0.0}});
    set.insert("B", EmbeddingVector{{0.0, 1.0}});
    CHECK_THROWS_AS(scan_balanced_tokens(lookup_from(set), "missing", "B", "ab", 1),
                    std::runtime_error);
    CHECK_THROWS_AS(scan_balanced_tokens(lookup_from(set), "A", "B", "", 1),
                    std::invalid_argument);
    // nothing in the set matches a candidate -> empty candidate space
    CHECK_THROWS_AS(scan_balanced_tokens(lookup_from(set), "A", "B", "xy", 1),
                    std::runtime_error);
    // cap: 26^5 > 500000
    CHECK_THROWS_AS(scan_balanced_tokens(lookup_from(set), "A", "B",
                                         "abcdefghijklmnopqrstuvwxyz", 5),
                    std::runtime_error);
}

// Frozen fixture regression: values computed independently from the shipped
// fixture (see fixtures/make_fixtures.py), asserted against the fixture, not
// against any external model.
TEST_CASE("fixture regression: similarities") {
    auto set = load_embeddings(fixture_path(), EmbeddingFormat::jsonl);
    CHECK(cosine_similarity(set.at("no"), set.at("No")) ==
          doctest::Approx(0.36213459323224484).epsilon(1e-12));
    CHECK(cosine_similarity(set.at("no"), set.at("no.")) ==
          doctest::Approx(0.15791116776986494).epsilon(1e-12));
    CHECK(cosine_similarity(set.at("no"), set.at("nobody")) ==
          doctest::Approx(-0.14369131182427655).epsilon(1e-12));
    CHECK(cosine_similarity(set.at("no"), set.at("mono")) ==
          doctest::Approx(-0.2557512949815241).epsilon(1e-12));
    CHECK(cosine_similarity(set.at("no"), set.at("no")) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fixture regression: balanced-token scan") {
    auto set = load_embeddings(fixture_path(), EmbeddingFormat::jsonl);
    auto res = scan_balanced_tokens(lookup_from(set), "dog", "cat", "acs", 2);
    REQUIRE(res.ranked.size() == 12);
    CHECK(res.ranked[0].candidate == "ss");
    CHECK(res.ranked[0].delta == doctest::Approx(0.11178483094748573).epsilon(1e-12));
    CHECK(res.ranked[1].candidate == "s");
    CHECK(res.ranked[2].candidate == "as");
    REQUIRE(res.best_per_length.size() == 2);
    CHECK(res.best_per_length[0].candidate == "s");
    CHECK(res.best_per_length[1].candidate == "ss");
}
