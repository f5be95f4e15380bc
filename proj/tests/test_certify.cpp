#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyperstab/certify.hpp"

using namespace hyperstab;

namespace {

const Bundle& default_bundle() {
    static const Bundle b = certify_all({});
    return b;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("hyperstab-test-" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST(CertifyAll, DefaultRunPasses) {
    const auto& b = default_bundle();
    EXPECT_EQ(b.status(), "pass");
    EXPECT_EQ(b.exit_code(), 0);
    for (const auto& c : b.certificates)
        EXPECT_TRUE(c.established()) << c.claim_id << " " << c.payload.dump();
}

TEST(CertifyAll, ClaimOrder) {
    const auto& b = default_bundle();
    std::vector<std::string> ids;
    for (const auto& c : b.certificates)
        ids.push_back(c.claim_id);
    ASSERT_GE(ids.size(), 20u);
    EXPECT_EQ(ids.front(), "catalog-Fstar-shape");
    auto pos = [&](const std::string& id) { return std::find(ids.begin(), ids.end(), id) - ids.begin(); };
    EXPECT_LT(pos("F5-subgraph-of-F"), pos("Fstar-homomorphic-images"));
    EXPECT_LT(pos("blowup-invariance-K4minus-and-Fstar-images"), pos("matrix-diagonal-lemma"));
    EXPECT_LT(pos("column-type-excluded"), pos("F-not-hom-R2"));
    EXPECT_LT(pos("F-hom-Rank3"), pos("rank-dichotomy-sweep"));
    EXPECT_LT(pos("lagrangian-values"), pos("Q-law-ladder"));
    EXPECT_LT(pos("Q-separation"), pos("pigeonhole-separation-matrix"));
}

TEST(CertifyAll, EveryCertificateRecordsTheGenerator) {
    for (const auto& c : default_bundle().certificates) {
        EXPECT_EQ(c.inputs["rng"]["generator"], "splitmix64-ctr") << c.claim_id;
        EXPECT_EQ(c.inputs["rng"]["seed"], 0) << c.claim_id;
    }
}

TEST(CertifyAll, BudgetOneIsIncompleteNotFailed) {
    CertifyOptions opt;
    opt.budget = 1;
    const auto b = certify_all(opt);
    EXPECT_EQ(b.status(), "incomplete");
    EXPECT_EQ(b.exit_code(), 2);
    EXPECT_FALSE(b.first_failure());
    for (const auto& c : b.certificates)
        if (c.claim_id == "F-not-hom-R2") {
            EXPECT_EQ(c.verdict, verdict::budget);
            EXPECT_EQ(c.payload["with_symmetry_breaking"]["verdict"], "budget_exceeded");
        }
}

TEST(CertifyAll, CorruptedFstarFailsShapeFirst) {
    CertifyOptions opt;
    opt.fstar_override = ThreeGraph::build(8, {{0, 1, 2}, {0, 1, 3}, {2, 3, 4}, {0, 4, 5}, {1, 4, 7}});
    const auto b = certify_all(opt);
    EXPECT_EQ(b.status(), "fail");
    EXPECT_EQ(b.exit_code(), 1);
    ASSERT_TRUE(b.first_failure());
    EXPECT_EQ(*b.first_failure(), "catalog-Fstar-shape");
}

TEST(CertifyAll, SameVertexCountCorruptionAlsoCaught) {
    CertifyOptions opt;
    opt.fstar_override = ThreeGraph::build(7, {{0, 1, 2}, {0, 1, 3}, {2, 3, 4}, {0, 4, 5}, {1, 4, 5}});
    const auto b = certify_all(opt);
    ASSERT_TRUE(b.first_failure());
    EXPECT_EQ(*b.first_failure(), "catalog-Fstar-shape");
    EXPECT_EQ(b.certificates.front().payload["matches_reference_edges"], false);
}

TEST(Bundle, WriteIsDeterministic) {
    const auto a = scratch_dir("a"), b = scratch_dir("b");
    write_bundle(certify_all({}), a);
    write_bundle(certify_all({}), b);
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a)) {
        ++files;
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
    }
    EXPECT_EQ(files, default_bundle().certificates.size() + 1);
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST(Bundle, SeedChangesOnlySeededClaims) {
    CertifyOptions opt;
    opt.seed = 7;
    const auto other = certify_all(opt);
    const auto& base = default_bundle();
    ASSERT_EQ(other.certificates.size(), base.certificates.size());
    EXPECT_EQ(other.status(), "pass");
    EXPECT_NE(other.certificates.back().content_hash(), "");
}

TEST(Bundle, CertificatesAreIndependentlyRecheckable) {
    std::size_t witnesses = 0;
    for (const auto& c : default_bundle().certificates) {
        const json j = json::parse(c.to_json().dump(2));
        const auto r = recheck(j);
        EXPECT_TRUE(r.ok()) << c.claim_id;
        witnesses += r.witnesses;
    }
    EXPECT_GE(witnesses, 4u);
}

TEST(Bundle, TamperedCertificateFailsRecheck) {
    for (const auto& c : default_bundle().certificates) {
        if (c.claim_id != "F-hom-Rank3")
            continue;
        json j = c.to_json();
        for (auto& v : j["payload"]["witnesses"][0]["map"]["image"])
            v = 0;
        const auto r = recheck(j);
        EXPECT_FALSE(r.hash_ok);
        EXPECT_LT(r.witnesses_valid, r.witnesses);
    }
}

TEST(CertificateTest, HashIgnoresKeyInsertionOrder) {
    Certificate a, b;
    a.claim_id = b.claim_id = "x";
    a.payload["p"] = 1;
    a.payload["q"] = 2;
    b.payload["q"] = 2;
    b.payload["p"] = 1;
    EXPECT_EQ(a.content_hash(), b.content_hash());
    EXPECT_TRUE(Certificate::hash_matches(a.to_json()));
}
