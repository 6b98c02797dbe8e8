#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "dsrg60/action.hpp"
#include "dsrg60/canon.hpp"
#include "dsrg60/digraph.hpp"
#include "dsrg60/group.hpp"
#include "dsrg60/io.hpp"
#include "dsrg60/search.hpp"

namespace dsrg60 {

/// The six tuples constructed from S5 x 2.
inline std::vector<DsrgParams> default_targets() {
    return {{60, 21, 11, 6, 8},  {60, 22, 12, 8, 8},   {60, 24, 10, 9, 10},
            {60, 25, 17, 8, 12}, {60, 27, 21, 12, 12}, {60, 28, 20, 14, 12}};
}

/// G = S5 x 2 with its Klein four-subgroup classes and their coset actions.
struct Pipeline {
    PermGroup group;
    std::vector<SubgroupClass> classes;
    std::vector<CosetAction> actions;
    std::vector<SuborbitSet> suborbit_sets;
    std::vector<PermGroup> normalizer_actions;
    SuborbitSignature signature;

    static Pipeline build() {
        Pipeline p;
        p.group = make_s5xc2();
        p.classes = klein_subgroup_classes(p.group);
        std::vector<std::size_t> counts;
        for (auto& c : p.classes) {
            p.actions.push_back(coset_action(p.group, c.representative));
            p.suborbit_sets.push_back(suborbits(p.actions.back(), c.representative));
            p.normalizer_actions.push_back(
                normalizer_action_on_suborbits(p.actions.back(), c.representative, p.suborbit_sets.back()));
            c.suborbit_count = p.suborbit_sets.back().count();
            counts.push_back(*c.suborbit_count);
        }
        p.signature = suborbit_signature(counts);
        return p;
    }

    std::string class_name(std::size_t i) const {
        if (auto n = signature.name_of(i)) return *n;
        return "K" + std::to_string(i);
    }

    /// The four named classes in summary-table order.
    std::vector<std::size_t> named() const { return {signature.h2, signature.h1, signature.h3, signature.h4}; }

    /// Accepts H1..H4, K<i>, or a bare class index.
    std::size_t resolve(std::string_view sel) const {
        if (sel.size() == 2 && sel[0] == 'H') return signature.index_of(sel);
        if (!sel.empty() && sel[0] == 'K') sel.remove_prefix(1);
        std::size_t idx = 0;
        auto [ptr, ec] = std::from_chars(sel.data(), sel.data() + sel.size(), idx);
        if (ec != std::errc{} || ptr != sel.data() + sel.size() || idx >= classes.size())
            throw std::invalid_argument("unknown class selector '" + std::string(sel) + "'");
        return idx;
    }
};

inline std::string classes_table(const Pipeline& p) {
    std::ostringstream out;
    out << std::left << std::setw(7) << "class" << std::setw(6) << "name" << std::setw(12) << "class_size"
        << std::setw(11) << "suborbits" << std::setw(8) << "kernel" << "suborbit_sizes\n";
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
        const auto& sub = p.suborbit_sets[i];
        std::map<std::size_t, std::size_t> hist;
        for (auto s : sub.sizes) ++hist[s];
        std::string sizes;
        for (auto [size, n] : hist) sizes += (sizes.empty() ? "" : " ") + std::to_string(size) + "x" + std::to_string(n);
        out << std::left << std::setw(7) << i << std::setw(6) << p.signature.name_of(i).value_or("-")
            << std::setw(12) << p.classes[i].class_size << std::setw(11) << sub.count() << std::setw(8)
            << p.actions[i].kernel_order << sizes << "\n";
    }
    return out.str();
}

enum class OutputFormat { D6, Manifest, Both };
enum class TableFormat { Text, Markdown };

struct RunConfig {
    std::vector<std::size_t> classes;
    std::vector<DsrgParams> params;
    bool all_feasible = false;
    std::filesystem::path out;
    unsigned jobs = 1;
    bool symmetry = true;
    OutputFormat format = OutputFormat::Both;
    TableFormat table = TableFormat::Text;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    /// One `key = value` line per setting.
    std::string effective_config() const {
        std::ostringstream o;
        o << "classes = ";
        for (std::size_t i = 0; i < classes.size(); ++i) o << (i ? "," : "") << classes[i];
        o << "\nparams = ";
        for (std::size_t i = 0; i < params.size(); ++i) {
            auto s = params[i].to_string();
            o << (i ? ";" : "") << s.substr(1, s.size() - 2);
        }
        o << "\nall_feasible = " << (all_feasible ? "true" : "false") << "\nout = " << out.string()
          << "\njobs = " << jobs << "\nsymmetry = " << (symmetry ? "on" : "off") << "\nformat = "
          << (format == OutputFormat::D6 ? "d6" : format == OutputFormat::Manifest ? "manifest" : "both")
          << "\ntable = " << (table == TableFormat::Text ? "text" : "markdown") << "\n";
        return o.str();
    }

    static RunConfig parse_effective_config(std::string_view block) {
        RunConfig c;
        std::istringstream in{std::string(block)};
        std::string line;
        auto split = [](const std::string& s, char sep) {
            std::vector<std::string> parts;
            std::string cur;
            std::istringstream ss(s);
            while (std::getline(ss, cur, sep))
                if (!cur.empty()) parts.push_back(cur);
            return parts;
        };
        while (std::getline(in, line)) {
            auto eq = line.find(" = ");
            if (eq == std::string::npos) continue;
            auto key = line.substr(0, eq), val = line.substr(eq + 3);
            if (key == "classes")
                for (auto& s : split(val, ',')) c.classes.push_back(std::stoul(s));
            else if (key == "params")
                for (auto& s : split(val, ';')) c.params.push_back(DsrgParams::parse(s));
            else if (key == "all_feasible") c.all_feasible = val == "true";
            else if (key == "out") c.out = val;
            else if (key == "jobs") c.jobs = static_cast<unsigned>(std::stoul(val));
            else if (key == "symmetry") c.symmetry = val == "on";
            else if (key == "format")
                c.format = val == "d6" ? OutputFormat::D6 : val == "manifest" ? OutputFormat::Manifest : OutputFormat::Both;
            else if (key == "table") c.table = val == "markdown" ? TableFormat::Markdown : TableFormat::Text;
        }
        return c;
    }
};

struct RunOutput {
    std::vector<SearchReport> reports;
    std::string manifest;
    std::string summary;
    /// Relative path -> digraph6 text, for every catalog graph.
    std::map<std::string, std::string> graph_files;
};

/// "S5×2 (4); S5 (22)", largest group first.
inline std::string aut_tally_text(const ParamsSummary& s) {
    static const std::vector<std::string> order = {"S5×2", "S5", "A5", "other"};
    std::string out;
    for (const auto& label : order) {
        auto it = s.aut_tally.find(label);
        if (it == s.aut_tally.end()) continue;
        if (!out.empty()) out += "; ";
        out += label + " (" + std::to_string(it->second) + ")";
    }
    return out.empty() ? "-" : out;
}

inline std::string reverse_text(const ParamsSummary& s) {
    if (s.graphs.empty()) return "-";
    std::string out = std::to_string(s.reverse_pairs) + (s.reverse_pairs == 1 ? " pair" : " pairs");
    if (s.self_reverse) out += " + " + std::to_string(s.self_reverse) + " self-reverse";
    return out;
}

inline std::string graph_path(const Pipeline& p, const ClassifiedGraph& g, std::size_t ordinal) {
    std::ostringstream o;
    o << p.class_name(g.class_index) << "/" << g.params.slug() << "/" << std::setw(3) << std::setfill('0')
      << ordinal << ".d6";
    return o.str();
}

inline std::string summary_table(const Pipeline& p, const std::vector<SearchReport>& reports, TableFormat fmt) {
    std::vector<std::array<std::string, 5>> rows;
    rows.push_back({"H", "(n,k,t,λ,μ)", "# nonisom.", "Aut Γ", "reverse"});
    for (const auto& r : reports)
        for (const auto& s : r.per_params)
            if (!s.graphs.empty())
                rows.push_back({p.class_name(r.class_index), s.params.to_string(), std::to_string(s.graphs.size()),
                                aut_tally_text(s), reverse_text(s)});
    if (rows.size() == 1) return "no graphs found\n";
    auto width = [](const std::string& s) {
        std::size_t w = 0;
        for (unsigned char c : s) w += (c & 0xC0) != 0x80;
        return w;
    };
    std::array<std::size_t, 5> w{};
    for (const auto& row : rows)
        for (std::size_t i = 0; i < 5; ++i) w[i] = std::max(w[i], width(row[i]));
    std::ostringstream o;
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        const auto& row = rows[ri];
        if (fmt == TableFormat::Markdown) {
            o << "|";
            for (const auto& c : row) o << " " << c << " |";
            o << "\n";
            if (ri == 0) o << "|---|---|---|---|---|\n";
        } else {
            for (std::size_t i = 0; i < 5; ++i) {
                o << row[i];
                if (i + 1 < 5) o << std::string(w[i] - width(row[i]), ' ') << " | ";
            }
            o << "\n";
        }
    }
    return o.str();
}

inline std::string build_manifest(const Pipeline& p, const RunConfig& cfg, const std::vector<SearchReport>& reports,
                                  bool with_files) {
    using nlohmann::ordered_json;
    ordered_json m;
    m["format"] = "dsrg60-manifest";
    m["version"] = 1;
    m["group"] = "S5×2";
    m["group_order"] = p.group.size();
    m["all_feasible"] = cfg.all_feasible;
    m["targets"] = ordered_json::array();
    if (!cfg.all_feasible)
        for (const auto& t : cfg.params) m["targets"].push_back(t.to_string());
    m["runs"] = ordered_json::array();
    for (const auto& r : reports) {
        const auto ci = r.class_index;
        ordered_json run;
        run["class"] = p.class_name(ci);
        run["class_index"] = ci;
        run["class_size"] = p.classes[ci].class_size;
        run["kernel_order"] = p.actions[ci].kernel_order;
        run["suborbit_count"] = r.suborbit_count;
        run["suborbit_sizes"] = p.suborbit_sets[ci].sizes;
        run["results"] = ordered_json::array();
        run["graphs"] = ordered_json::array();
        for (const auto& s : r.per_params) {
            ordered_json res;
            res["params"] = s.params.to_string();
            res["count"] = s.graphs.size();
            res["reverse_pairs"] = s.reverse_pairs;
            res["self_reverse"] = s.self_reverse;
            res["aut"] = aut_tally_text(s);
            run["results"].push_back(res);
            for (std::size_t i = 0; i < s.graphs.size(); ++i) {
                const auto& g = s.graphs[i];
                ordered_json gj;
                gj["name"] = g.name;
                gj["file"] = with_files ? ordered_json(graph_path(p, g, i + 1)) : ordered_json(nullptr);
                gj["params"] = g.params.to_string();
                gj["digest"] = canonical_digest(g.canonical);
                gj["aut_order"] = g.aut.order.str();
                gj["aut_label"] = to_string(g.aut.label);
                gj["derived_orbit_count"] = g.aut.derived_orbit_count;
                gj["vertex_transitive"] = g.aut.vertex_transitive;
                gj["reverse_partner"] = s.graphs[g.reverse_partner].name;
                gj["subset"] = g.subset;
                run["graphs"].push_back(gj);
            }
        }
        m["runs"].push_back(run);
    }
    return m.dump(2) + "\n";
}

/// Enumerates and classifies every selected class; no file output.
inline RunOutput run_search(const Pipeline& p, const RunConfig& cfg) {
    if (cfg.params.empty() && !cfg.all_feasible)
        throw std::invalid_argument("no target parameters given (use --params or --all-feasible)");
    SearchTarget target = cfg.all_feasible ? SearchTarget::all_feasible(60) : SearchTarget{cfg.params};
    SearchOptions opt;
    opt.symmetry = cfg.symmetry;
    opt.jobs = std::max(1u, cfg.jobs);

    RunOutput out;
    for (auto ci : cfg.classes) {
        auto t0 = std::chrono::steady_clock::now();
        auto found = enumerate(p.suborbit_sets[ci], p.actions[ci], target, opt, &p.normalizer_actions[ci]);
        auto t1 = std::chrono::steady_clock::now();
        auto report = classify(found, p.suborbit_sets[ci], p.actions[ci], ci,
                               cfg.all_feasible ? std::vector<DsrgParams>{} : cfg.params, opt.jobs);
        auto t2 = std::chrono::steady_clock::now();
        report.enumerate_seconds = std::chrono::duration<double>(t1 - t0).count();
        report.classify_seconds = std::chrono::duration<double>(t2 - t1).count();
        out.reports.push_back(std::move(report));
    }
    const bool with_files = cfg.format != OutputFormat::Manifest;
    for (const auto& r : out.reports)
        for (const auto& s : r.per_params)
            for (std::size_t i = 0; i < s.graphs.size(); ++i)
                out.graph_files[graph_path(p, s.graphs[i], i + 1)] = encode_digraph6(s.graphs[i].digraph);
    out.manifest = build_manifest(p, cfg, out.reports, with_files);
    out.summary = summary_table(p, out.reports, cfg.table);
    return out;
}

inline void write_outputs(const RunOutput& run, const RunConfig& cfg) {
    if (cfg.format != OutputFormat::Manifest)
        for (const auto& [rel, text] : run.graph_files) write_file(cfg.out / rel, text);
    if (cfg.format != OutputFormat::D6) write_file(cfg.out / "manifest.txt", run.manifest);
    write_file(cfg.out / (cfg.table == TableFormat::Markdown ? "summary.md" : "summary.txt"), run.summary);
}

struct CommandResult {
    int exit_code = 0;
    std::string output;
};

/// Checks a digraph6 file against the definition. k = 0 is reported as not
/// a dsrg.
inline CommandResult verify_file(const std::filesystem::path& path) {
    auto g = decode_digraph6(read_file(path));
    auto check = check_dsrg(g);
    if (!check.params) return {2, "not a dsrg: " + to_string(check.violation) + "\n"};
    const auto& pr = *check.params;
    if (pr.k == 0) return {2, "not a dsrg: degenerate (k = 0)\n"};
    return {0, "dsrg" + pr.to_string() + "\n"};
}

inline CommandResult canon_file(const std::filesystem::path& path) {
    auto g = decode_digraph6(read_file(path));
    auto res = canonical_search(g);
    auto aut = describe_automorphisms(g.order(), std::move(res.automorphisms));
    std::ostringstream o;
    o << "digest " << canonical_digest(res.form) << "\n"
      << "aut_order " << aut.order.str() << "\n"
      << "aut_label " << to_string(aut.label) << "\n"
      << "derived_orbits " << aut.derived_orbit_count << "\n"
      << "vertex_transitive " << (aut.vertex_transitive ? "yes" : "no") << "\n";
    return {0, o.str()};
}

}  // namespace dsrg60
