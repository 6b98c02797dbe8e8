#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "dsrg60/pipeline.hpp"

using namespace dsrg60;

namespace {

const Pipeline& pipeline() {
    static const Pipeline p = Pipeline::build();
    return p;
}

std::string squeeze(const std::string& s) { return std::regex_replace(s, std::regex(" +"), " "); }

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("dsrg60_pipeline_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

RunConfig h1_config() {
    RunConfig cfg;
    cfg.classes = {pipeline().signature.h1};
    cfg.params = {{60, 28, 20, 14, 12}};
    cfg.jobs = 1;
    return cfg;
}

}  // namespace

TEST(Pipeline, ClassesTable) {
    const auto& p = pipeline();
    auto table = classes_table(p);
    std::istringstream in(table);
    std::string line;
    std::getline(in, line);
    int rows = 0, h1 = 0, h2 = 0;
    while (std::getline(in, line)) {
        ++rows;
        auto s = squeeze(line);
        h1 += s.find(" H1 ") != std::string::npos && s.find(" 19 ") != std::string::npos;
        h2 += s.find(" H2 ") != std::string::npos && s.find(" 32 ") != std::string::npos;
    }
    EXPECT_EQ(rows, 7);
    EXPECT_EQ(h1, 1);
    EXPECT_EQ(h2, 1);
}

TEST(Pipeline, ResolveSelectors) {
    const auto& p = pipeline();
    EXPECT_EQ(p.resolve("H2"), p.signature.h2);
    EXPECT_EQ(p.resolve("3"), 3u);
    EXPECT_EQ(p.resolve("K5"), 5u);
    EXPECT_EQ(p.class_name(p.signature.h4), "H4");
    EXPECT_THROW(p.resolve("H9"), std::invalid_argument);
    EXPECT_THROW(p.resolve("7"), std::invalid_argument);
    EXPECT_THROW(p.resolve("x"), std::invalid_argument);
}

TEST(RunConfig, EffectiveConfigRoundTrips) {
    RunConfig cfg;
    cfg.classes = {6, 2, 3};
    cfg.params = {{60, 21, 11, 6, 8}, {60, 28, 20, 14, 12}};
    cfg.out = "some/dir";
    cfg.jobs = 8;
    cfg.symmetry = false;
    cfg.format = OutputFormat::Manifest;
    cfg.table = TableFormat::Markdown;
    EXPECT_EQ(RunConfig::parse_effective_config(cfg.effective_config()), cfg);
    RunConfig other;
    other.all_feasible = true;
    EXPECT_EQ(RunConfig::parse_effective_config(other.effective_config()), other);
}

TEST(Pipeline, EmptyParamsRejected) {
    RunConfig cfg;
    cfg.classes = {pipeline().signature.h1};
    EXPECT_THROW(run_search(pipeline(), cfg), std::invalid_argument);
}

TEST(Pipeline, H1SearchWritesVerifiedCatalog) {
    const auto& p = pipeline();
    auto cfg = h1_config();
    cfg.out = scratch("h1");
    auto run = run_search(p, cfg);
    write_outputs(run, cfg);

    EXPECT_NE(squeeze(run.summary).find("H1 | (60,28,20,14,12) | 2 | S5×2 (2) | 1 pair"), std::string::npos)
        << run.summary;
    ASSERT_EQ(run.graph_files.size(), 2u);
    auto manifest = nlohmann::json::parse(read_file(cfg.out / "manifest.txt"));
    EXPECT_EQ(read_file(cfg.out / "manifest.txt"), run.manifest);
    const auto& graphs = manifest["runs"][0]["graphs"];
    ASSERT_EQ(graphs.size(), 2u);
    for (const auto& gj : graphs) {
        auto path = cfg.out / gj["file"].get<std::string>();
        ASSERT_TRUE(std::filesystem::exists(path));
        auto g = decode_digraph6(read_file(path));
        EXPECT_EQ(canonical_digest(canonical_form(g)), gj["digest"].get<std::string>());
        auto verdict = verify_file(path);
        EXPECT_EQ(verdict.exit_code, 0);
        EXPECT_EQ(verdict.output, "dsrg" + gj["params"].get<std::string>() + "\n");
        auto canon = canon_file(path);
        EXPECT_NE(canon.output.find("aut_order 240\naut_label S5×2\nderived_orbits 1\nvertex_transitive yes"),
                  std::string::npos);
    }
    EXPECT_EQ(graphs[0]["reverse_partner"], graphs[1]["name"]);

    // Re-running overwrites identically.
    auto again = run_search(p, cfg);
    write_outputs(again, cfg);
    EXPECT_EQ(read_file(cfg.out / "manifest.txt"), run.manifest);
    EXPECT_EQ(read_file(cfg.out / "summary.txt"), run.summary);
    std::filesystem::remove_all(cfg.out);
}

TEST(Pipeline, H1ManifestIndependentOfJobsAndSymmetry) {
    const auto& p = pipeline();
    auto base = run_search(p, h1_config()).manifest;
    auto cfg = h1_config();
    cfg.jobs = 8;
    EXPECT_EQ(run_search(p, cfg).manifest, base);
    cfg.symmetry = false;
    EXPECT_EQ(run_search(p, cfg).manifest, base);
}

TEST(Pipeline, MarkdownSummary) {
    auto cfg = h1_config();
    cfg.table = TableFormat::Markdown;
    auto run = run_search(pipeline(), cfg);
    EXPECT_NE(run.summary.find("| H1 | (60,28,20,14,12) | 2 | S5×2 (2) | 1 pair |"), std::string::npos);
    EXPECT_EQ(run.summary.rfind("| H | (n,k,t,λ,μ) |", 0), 0u);
}

TEST(Pipeline, EmptyResultSummary) {
    auto cfg = h1_config();
    cfg.params = {{60, 21, 11, 6, 8}};
    auto run = run_search(pipeline(), cfg);
    EXPECT_EQ(run.summary, "no graphs found\n");
    EXPECT_TRUE(run.graph_files.empty());
    auto manifest = nlohmann::json::parse(run.manifest);
    EXPECT_EQ(manifest["runs"][0]["results"][0]["count"], 0);
}

TEST(Commands, VerifyRejectsEmptyAndBrokenGraphs) {
    auto dir = scratch("verify");
    write_file(dir / "empty.d6", encode_digraph6(Digraph(60)));
    auto res = verify_file(dir / "empty.d6");
    EXPECT_EQ(res.exit_code, 2);
    EXPECT_EQ(res.output.rfind("not a dsrg", 0), 0u);

    Digraph five(5);
    for (int i = 0; i < 5; ++i) five.add_arc(i, (i + 1) % 5);
    write_file(dir / "five.d6", encode_digraph6(five));
    res = verify_file(dir / "five.d6");
    EXPECT_EQ(res.exit_code, 2);
    EXPECT_NE(res.output.find("mu"), std::string::npos);

    Digraph three(3);
    for (int i = 0; i < 3; ++i) three.add_arc(i, (i + 1) % 3);
    write_file(dir / "three.d6", encode_digraph6(three));
    EXPECT_EQ(verify_file(dir / "three.d6").output, "dsrg(3,1,0,0,1)\n");
    EXPECT_NE(canon_file(dir / "three.d6").output.find("aut_order 3\n"), std::string::npos);

    write_file(dir / "short.d6", encode_digraph6(Digraph(60)).substr(0, 100));
    EXPECT_THROW(verify_file(dir / "short.d6"), ParseError);
    std::filesystem::remove_all(dir);
}

TEST(Commands, CanonDigestIgnoresLabels) {
    auto dir = scratch("canon");
    std::mt19937 rng(31);
    Digraph g(30);
    std::bernoulli_distribution coin(0.3);
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 30; ++j)
            if (i != j && coin(rng)) g.add_arc(i, j);
    std::vector<int> x(30);
    std::iota(x.begin(), x.end(), 0);
    std::shuffle(x.begin(), x.end(), rng);
    write_file(dir / "a.d6", encode_digraph6(g));
    write_file(dir / "b.d6", encode_digraph6(relabel(g, Permutation::from_images(x))));
    auto a = canon_file(dir / "a.d6").output, b = canon_file(dir / "b.d6").output;
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.rfind("digest ", 0), 0u);
    std::filesystem::remove_all(dir);
}
