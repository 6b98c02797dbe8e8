#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "dsrg60/pipeline.hpp"

namespace {

using namespace dsrg60;

enum Exit { kOk = 0, kUsage = 1, kVerification = 2, kIo = 3 };

std::vector<std::size_t> select_classes(const Pipeline& p, const std::string& sel) {
    if (sel == "all") return p.named();
    return {p.resolve(sel)};
}

int run(int argc, char** argv) {
    CLI::App app{"Directed strongly regular graphs on 60 vertices from S5 x 2"};
    app.require_subcommand(1);

    auto* classes_cmd = app.add_subcommand("classes", "list the Klein four-subgroup classes");

    auto* search_cmd = app.add_subcommand("search", "enumerate suborbit unions and write a catalog");
    std::string class_sel = "all";
    std::vector<std::string> params_in;
    bool all_feasible = false;
    std::string out_dir = "out";
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string symmetry = "on", format = "both", table = "text";
    bool print_config = false;
    search_cmd->add_option("--class", class_sel, "H1|H2|H3|H4|all|<index>");
    search_cmd->add_option("--params", params_in, "target tuple v,k,t,l,m (repeatable)");
    search_cmd->add_flag("--all-feasible", all_feasible, "search every feasible tuple with 0<t<k");
    search_cmd->add_option("--out", out_dir, "output directory");
    search_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    search_cmd->add_option("--symmetry", symmetry)->check(CLI::IsMember({"on", "off"}));
    search_cmd->add_option("--format", format)->check(CLI::IsMember({"d6", "manifest", "both"}));
    search_cmd->add_option("--table", table)->check(CLI::IsMember({"text", "markdown"}));
    search_cmd->add_flag("--print-config", print_config, "print the effective configuration and exit");

    std::string path;
    auto* verify_cmd = app.add_subcommand("verify", "check a digraph6 file against the dsrg definition");
    verify_cmd->add_option("file", path)->required();
    auto* canon_cmd = app.add_subcommand("canon", "canonical digest and automorphism summary");
    canon_cmd->add_option("file", path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    if (*verify_cmd || *canon_cmd) {
        auto res = *verify_cmd ? verify_file(path) : canon_file(path);
        std::cout << res.output;
        return res.exit_code;
    }

    auto pipeline = Pipeline::build();
    if (*classes_cmd) {
        std::cout << classes_table(pipeline);
        return kOk;
    }

    RunConfig cfg;
    try {
        cfg.classes = select_classes(pipeline, class_sel);
        for (const auto& s : params_in) cfg.params.push_back(DsrgParams::parse(s));
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    cfg.all_feasible = all_feasible;
    cfg.out = out_dir;
    cfg.jobs = jobs;
    cfg.symmetry = symmetry == "on";
    cfg.format = format == "d6" ? OutputFormat::D6 : format == "manifest" ? OutputFormat::Manifest : OutputFormat::Both;
    cfg.table = table == "markdown" ? TableFormat::Markdown : TableFormat::Text;
    if (print_config) {
        std::cout << cfg.effective_config();
        return kOk;
    }
    if (cfg.params.empty() && !cfg.all_feasible) {
        std::cerr << "usage error: give at least one --params tuple or --all-feasible\n";
        return kUsage;
    }
    auto result = run_search(pipeline, cfg);
    write_outputs(result, cfg);
    for (const auto& r : result.reports)
        std::cerr << pipeline.class_name(r.class_index) << ": " << r.stats.nodes << " nodes, " << r.stats.accepted
                  << " accepted, enumerate " << r.enumerate_seconds << " s, classify " << r.classify_seconds
                  << " s\n";
    std::cout << result.summary;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const dsrg60::VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kVerification;
    } catch (const dsrg60::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kVerification;
    }
}
