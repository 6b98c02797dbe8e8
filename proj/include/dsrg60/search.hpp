#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dsrg60/action.hpp"
#include "dsrg60/canon.hpp"
#include "dsrg60/digraph.hpp"
#include "dsrg60/errors.hpp"

namespace dsrg60 {

/// Runs fn(i) for i in [0, count) on `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    workers.clear();
    if (error) std::rethrow_exception(error);
}

/// Ascending suborbit indices of a mask.
inline std::vector<std::size_t> mask_indices(SuborbitMask m) {
    std::vector<std::size_t> out;
    for (; m; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
}

/// Lexicographic order of the ascending index lists of two subsets.
inline bool subset_less(SuborbitMask a, SuborbitMask b) {
    if (a == b) return false;
    const int i = std::countr_zero(a ^ b);
    const SuborbitMask above = i == 63 ? 0 : ~((SuborbitMask{2} << i) - 1);
    const bool a_has = a >> i & 1;
    const SuborbitMask other = a_has ? b : a;
    const bool other_continues = (other & above) != 0;
    return a_has ? other_continues : !other_continues;
}

/// Intersection numbers of the orbital configuration: entry (k, i, j) counts
/// z in suborbit i with (z, y_k) in orbital j, y_k a point of suborbit k.
/// For a suborbit union S the 2-path count from point 0 to y_k is the sum of
/// entries (k, i, j) over i, j in S.
class OrbitalAlgebra {
public:
    OrbitalAlgebra(const SuborbitSet& sub, const CosetAction& act) : r_(sub.count()) {
        p_.assign(r_ * r_ * r_, 0);
        pair_.assign(r_ * r_ * 64, 0);
        for (std::size_t j = 0; j < r_; ++j) {
            if (j == sub.trivial_index) {
                for (std::size_t k = 0; k < r_; ++k)
                    for (std::size_t i = 0; i < r_; ++i)
                        if (i == k) at(k, i, j) = 1;
                continue;
            }
            auto cols = from_suborbit_union(sub, act, SuborbitMask{1} << j).in_rows();
            for (std::size_t k = 0; k < r_; ++k) {
                const int y = sub.orbits[k].front();
                for (std::size_t i = 0; i < r_; ++i) at(k, i, j) = std::popcount(sub.point_masks[i] & cols[y]);
            }
        }
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t m = 0; m < r_; ++m)
                for (std::size_t k = 0; k < r_; ++k)
                    pair_[(i * r_ + m) * 64 + k] =
                        static_cast<std::int16_t>(i == m ? at(k, m, m) : at(k, i, m) + at(k, m, i));
    }

    std::size_t rank() const noexcept { return r_; }
    int value(std::size_t k, std::size_t i, std::size_t j) const { return p_[(k * r_ + i) * r_ + j]; }

    /// Contribution vector (over k) of adding m to a set already holding i;
    /// for i == m it is the diagonal term.
    /// Padded to 64 entries for fixed-width accumulation.
    const std::int16_t* increment(std::size_t i, std::size_t m) const { return &pair_[(i * r_ + m) * 64]; }

    /// Row-0 path counts of the union of `subset`, indexed by suborbit.
    std::vector<int> row0_counts(SuborbitMask subset) const {
        std::vector<int> c(r_, 0);
        auto idx = mask_indices(subset);
        for (auto i : idx)
            for (auto j : idx)
                for (std::size_t k = 0; k < r_; ++k) c[k] += value(k, i, j);
        return c;
    }

private:
    int& at(std::size_t k, std::size_t i, std::size_t j) { return p_[(k * r_ + i) * r_ + j]; }

    std::size_t r_;
    std::vector<int> p_;
    std::vector<std::int16_t> pair_;
};

struct SearchTarget {
    std::vector<DsrgParams> params_list;

    /// Every feasible tuple with the given v, 1 <= k < v and 0 < t < k.
    static SearchTarget all_feasible(int v = 60) {
        SearchTarget t;
        for (int k = 1; k < v; ++k)
            for (int tt = 1; tt < k; ++tt)
                for (int l = 0; l < k; ++l)
                    for (int m = 0; m <= k; ++m) {
                        DsrgParams p{v, k, tt, l, m};
                        if (feasible(p)) t.params_list.push_back(p);
                    }
        return t;
    }
};

struct SearchOptions {
    bool symmetry = true;
    /// Prune on monotone row-0 path counts (includes the predicted-t test).
    /// When off, candidates are filtered only by size and checked by building
    /// the digraph.
    bool structure_prune = true;
    unsigned jobs = 1;
    std::size_t split_depth = 8;
};

struct FoundSubset {
    SuborbitMask subset = 0;
    DsrgParams params;

    friend auto operator<=>(const FoundSubset&, const FoundSubset&) = default;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t candidates = 0;
    std::uint64_t accepted = 0;
    std::uint64_t symmetry_rejected = 0;
};

struct Enumeration {
    std::vector<FoundSubset> found;  // sorted by (params, subset)
    SearchStats stats;
};

namespace detail {

class SubsetSearch {
public:
    SubsetSearch(const SuborbitSet& sub, const CosetAction& act, const SearchTarget& target,
                 const SearchOptions& opt, const std::vector<Permutation>& symmetries)
        : sub_(sub), act_(act), alg_(sub, act), targets_(target.params_list), opt_(opt),
          symmetries_(symmetries) {
        for (const auto& t : targets_)
            if (!feasible(t)) throw std::invalid_argument("search target " + t.to_string() + " is infeasible");
        r_ = sub.count();
        for (std::size_t i = 0; i < r_; ++i)
            if (i != sub.trivial_index) order_.push_back(i);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return sub.sizes[a] > sub.sizes[b]; });
        suffix_.assign(order_.size() + 1, 0);
        for (std::size_t d = order_.size(); d-- > 0;) suffix_[d] = suffix_[d + 1] + static_cast<int>(sub.sizes[order_[d]]);
        for (const auto& t : targets_) max_k_ = std::max(max_k_, t.k);
        active_.fill(0);
        for (std::size_t k = 0; k < r_; ++k) active_[k] = k != sub.trivial_index;
    }

    Enumeration run() {
        Enumeration out;
        if (targets_.empty()) return out;
        Node root;
        root.c.fill(0);
        root.included.fill(0);
        root.excluded.fill(0);
        std::vector<Node> tasks;
        std::vector<FoundSubset> prefix_found;
        SearchStats prefix_stats;
        const std::size_t split = std::min(opt_.split_depth, order_.size());
        evaluate(root, prefix_found, prefix_stats);
        expand(root, split, &tasks, prefix_found, prefix_stats);

        std::vector<std::vector<FoundSubset>> results(tasks.size());
        std::vector<SearchStats> stats(tasks.size());
        parallel_for(tasks.size(), opt_.jobs, [&](std::size_t i) {
            expand(tasks[i], order_.size(), nullptr, results[i], stats[i]);
        });

        out.found = std::move(prefix_found);
        out.stats = prefix_stats;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            out.found.insert(out.found.end(), results[i].begin(), results[i].end());
            out.stats.nodes += stats[i].nodes;
            out.stats.candidates += stats[i].candidates;
            out.stats.accepted += stats[i].accepted;
            out.stats.symmetry_rejected += stats[i].symmetry_rejected;
        }
        std::sort(out.found.begin(), out.found.end());
        return out;
    }

private:
    using Lanes = std::array<std::int16_t, 64>;

    struct Node {
        SuborbitMask mask = 0;
        int sum = 0;
        std::size_t depth = 0;
        Lanes c;         // row-0 path counts by suborbit
        Lanes included;  // 1 where the suborbit is in the subset
        Lanes excluded;  // 1 where the suborbit was decided out
    };

    /// Depth-first expansion; nodes at `stop` depth are handed to `tasks`
    /// when given, otherwise the subtree is searched to the end.
    void expand(const Node& node, std::size_t stop, std::vector<Node>* tasks,
                std::vector<FoundSubset>& found, SearchStats& stats) {
        ++stats.nodes;
        if (!viable(node)) return;
        if (node.depth == stop) {
            if (tasks && node.depth < order_.size()) tasks->push_back(node);
            return;
        }
        const std::size_t m = order_[node.depth];
        const int size = static_cast<int>(sub_.sizes[m]);
        if (node.sum + size <= max_k_) {
            Node in = node;
            in.depth = node.depth + 1;
            in.mask |= SuborbitMask{1} << m;
            in.included[m] = 1;
            in.sum += size;
            if (opt_.structure_prune) {
                for (SuborbitMask s = node.mask; s; s &= s - 1) add_row(in.c, alg_.increment(std::countr_zero(s), m));
                add_row(in.c, alg_.increment(m, m));
            }
            evaluate(in, found, stats);
            expand(in, stop, tasks, found, stats);
        }
        Node out = node;
        out.depth = node.depth + 1;
        out.excluded[m] = 1;
        expand(out, stop, tasks, found, stats);
    }

    static void add_row(Lanes& c, const std::int16_t* inc) {
        for (std::size_t k = 0; k < 64; ++k) c[k] = static_cast<std::int16_t>(c[k] + inc[k]);
    }

    bool viable(const Node& node) const {
        const int remaining = suffix_[node.depth];
        for (const auto& t : targets_) {
            if (t.k < node.sum || t.k > node.sum + remaining) continue;
            if (!opt_.structure_prune || counts_within(node, t)) return true;
        }
        return false;
    }

    bool counts_within(const Node& node, const DsrgParams& t) const {
        if (node.c[sub_.trivial_index] > t.t) return false;
        const int top = std::max(t.lambda, t.mu);
        const int dl = t.lambda - top, dm = t.mu - top;
        int bad = 0;
        for (std::size_t k = 0; k < 64; ++k)
            bad |= node.c[k] * active_[k] - node.included[k] * dl - node.excluded[k] * dm > top;
        return !bad;
    }

    bool counts_match(const Node& node, const DsrgParams& t) const {
        if (node.c[sub_.trivial_index] != t.t) return false;
        const int dl = t.lambda - t.mu;
        int bad = 0;
        for (std::size_t k = 0; k < 64; ++k)
            bad |= (node.c[k] - t.mu - node.included[k] * dl) * active_[k];
        return !bad;
    }

    bool least_in_orbit(SuborbitMask mask) const {
        for (const auto& p : symmetries_)
            if (subset_less(apply_to_mask(p, mask), mask)) return false;
        return true;
    }

    /// Called once per distinct subset, as it is created.
    void evaluate(const Node& node, std::vector<FoundSubset>& found, SearchStats& stats) const {
        for (const auto& t : targets_) {
            if (t.k != node.sum) continue;
            ++stats.candidates;
            bool ok;
            if (opt_.structure_prune) {
                ok = counts_match(node, t);
            } else {
                ok = predicted_t(sub_, node.mask) == t.t &&
                     is_dsrg(from_suborbit_union(sub_, act_, node.mask)) == std::optional<DsrgParams>(t);
            }
            if (!ok) continue;
            if (opt_.symmetry && !least_in_orbit(node.mask)) {
                ++stats.symmetry_rejected;
                continue;
            }
            ++stats.accepted;
            found.push_back({node.mask, t});
        }
    }

    const SuborbitSet& sub_;
    const CosetAction& act_;
    OrbitalAlgebra alg_;
    std::vector<DsrgParams> targets_;
    SearchOptions opt_;
    const std::vector<Permutation>& symmetries_;
    std::size_t r_ = 0;
    std::vector<std::size_t> order_;
    std::vector<int> suffix_;
    Lanes active_;  // 1 on nontrivial suborbit lanes
    int max_k_ = 0;
};

}  // namespace detail

/// All suborbit unions whose digraph is a dsrg with one of the target
/// parameter tuples. With symmetry on, only the least subset of each orbit
/// of `normalizer` (a group on suborbit indices) is reported.
inline Enumeration enumerate(const SuborbitSet& sub, const CosetAction& act, const SearchTarget& target,
                             const SearchOptions& opt, const PermGroup* normalizer = nullptr) {
    std::vector<Permutation> symmetries;
    if (opt.symmetry && normalizer)
        for (const auto& p : normalizer->elements())
            if (!p.is_identity()) symmetries.push_back(p);
    return detail::SubsetSearch(sub, act, target, opt, symmetries).run();
}

struct ClassifiedGraph {
    std::string name;
    Digraph digraph;
    DsrgParams params;
    CanonicalForm canonical;
    AutGroupReport aut;
    std::size_t class_index = 0;
    std::vector<std::size_t> subset;
    std::size_t reverse_partner = 0;
    std::size_t subsets_mapped = 0;  // accepted subsets with this canonical form
};

struct ParamsSummary {
    DsrgParams params;
    std::vector<ClassifiedGraph> graphs;  // by ascending canonical bytes
    std::size_t reverse_pairs = 0;
    std::size_t self_reverse = 0;
    std::map<std::string, std::size_t> aut_tally;
};

struct SearchReport {
    std::size_t class_index = 0;
    std::size_t suborbit_count = 0;
    std::vector<ParamsSummary> per_params;
    SearchStats stats;
    double enumerate_seconds = 0;
    double classify_seconds = 0;

    const ParamsSummary* find(const DsrgParams& p) const {
        for (const auto& s : per_params)
            if (s.params == p) return &s;
        return nullptr;
    }
};

/// Dedups accepted subsets by canonical form, computes automorphism groups
/// and reverse partners. `targets` fixes which tuples appear (possibly
/// empty) in the report; tuples found outside it are appended.
inline SearchReport classify(const Enumeration& found, const SuborbitSet& sub, const CosetAction& act,
                             std::size_t class_index, const std::vector<DsrgParams>& targets, unsigned jobs = 1) {
    SearchReport rep;
    rep.class_index = class_index;
    rep.suborbit_count = sub.count();
    rep.stats = found.stats;

    struct Item {
        Digraph g;
        CanonResult canon;
    };
    std::vector<Item> items(found.found.size());
    parallel_for(items.size(), jobs, [&](std::size_t i) {
        const auto& f = found.found[i];
        auto g = from_suborbit_union(sub, act, f.subset);
        auto check = is_dsrg(g);
        if (check != std::optional<DsrgParams>(f.params))
            throw VerificationError("accepted subset fails the full dsrg check for " + f.params.to_string());
        if (predicted_t(sub, f.subset) != f.params.t)
            throw VerificationError("predicted t disagrees with the dsrg check");
        items[i] = {g, canonical_search(g)};
    });

    std::vector<DsrgParams> tuples = targets;
    for (const auto& f : found.found)
        if (std::find(tuples.begin(), tuples.end(), f.params) == tuples.end()) tuples.push_back(f.params);

    for (const auto& params : tuples) {
        ParamsSummary summary;
        summary.params = params;
        std::map<std::vector<std::uint8_t>, std::size_t> by_form;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (found.found[i].params != params) continue;
            const auto& form = items[i].canon.form;
            auto [it, fresh] = by_form.try_emplace(form.bytes, summary.graphs.size());
            if (fresh) {
                ClassifiedGraph cg;
                cg.digraph = items[i].g;
                cg.params = params;
                cg.canonical = form;
                cg.aut.generators = items[i].canon.automorphisms;
                cg.class_index = class_index;
                cg.subset = mask_indices(found.found[i].subset);
                summary.graphs.push_back(std::move(cg));
            } else {
                auto& cg = summary.graphs[it->second];
                auto mask = found.found[i].subset;
                SuborbitMask current = 0;
                for (auto s : cg.subset) current |= SuborbitMask{1} << s;
                if (subset_less(mask, current)) {
                    cg.subset = mask_indices(mask);
                    cg.digraph = items[i].g;
                    cg.canonical = form;
                    cg.aut.generators = items[i].canon.automorphisms;
                }
            }
            ++summary.graphs[it->second].subsets_mapped;
        }
        std::sort(summary.graphs.begin(), summary.graphs.end(),
                  [](const ClassifiedGraph& a, const ClassifiedGraph& b) { return a.canonical.bytes < b.canonical.bytes; });

        parallel_for(summary.graphs.size(), jobs, [&](std::size_t i) {
            auto& cg = summary.graphs[i];
            for (const auto& a : cg.aut.generators)
                if (!is_automorphism(cg.digraph, a))
                    throw VerificationError("reported automorphism does not preserve the arc set");
            cg.aut = describe_automorphisms(cg.digraph.order(), std::move(cg.aut.generators));
        });

        std::vector<Digraph> graphs;
        std::vector<CanonicalForm> forms;
        for (const auto& cg : summary.graphs) {
            graphs.push_back(cg.digraph);
            forms.push_back(cg.canonical);
        }
        auto partner = reverse_partner(graphs, forms);
        for (std::size_t i = 0; i < summary.graphs.size(); ++i) {
            auto& cg = summary.graphs[i];
            cg.reverse_partner = partner[i];
            cg.name = params.slug() + "-" + std::to_string(i + 1);
            if (partner[i] == i) ++summary.self_reverse;
            else if (partner[i] > i) ++summary.reverse_pairs;
            ++summary.aut_tally[to_string(cg.aut.label)];
        }
        rep.per_params.push_back(std::move(summary));
    }
    return rep;
}

/// Matching of two classified reports by canonical form, per shared tuple.
struct CrossCheck {
    struct Entry {
        DsrgParams params;
        std::vector<std::optional<std::size_t>> a_in_b;
        std::vector<std::optional<std::size_t>> b_in_a;

        bool a_subset_of_b() const {
            return std::all_of(a_in_b.begin(), a_in_b.end(), [](const auto& x) { return x.has_value(); });
        }
    };
    std::vector<Entry> entries;

    const Entry* find(const DsrgParams& p) const {
        for (const auto& e : entries)
            if (e.params == p) return &e;
        return nullptr;
    }
};

inline CrossCheck cross_check(const SearchReport& a, const SearchReport& b) {
    CrossCheck out;
    auto locate = [](const ClassifiedGraph& g, const ParamsSummary& in) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < in.graphs.size(); ++i)
            if (in.graphs[i].canonical == g.canonical) return i;
        return std::nullopt;
    };
    for (const auto& sa : a.per_params) {
        const auto* sb = b.find(sa.params);
        if (!sb) continue;
        CrossCheck::Entry e;
        e.params = sa.params;
        for (const auto& g : sa.graphs) e.a_in_b.push_back(locate(g, *sb));
        for (const auto& g : sb->graphs) e.b_in_a.push_back(locate(g, sa));
        out.entries.push_back(std::move(e));
    }
    return out;
}

}  // namespace dsrg60
