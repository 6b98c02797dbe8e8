#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <climits>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsrg60/digraph.hpp"
#include "dsrg60/errors.hpp"
#include "dsrg60/group.hpp"
#include "dsrg60/permutation.hpp"

namespace dsrg60 {

/// Ordered list of disjoint nonempty vertex cells covering all vertices.
struct OrderedPartition {
    std::vector<VertexSet> cells;

    static OrderedPartition unit(int n) {
        if (n == 0) return {};
        return {{n == 64 ? ~VertexSet{0} : (VertexSet{1} << n) - 1}};
    }

    bool is_discrete() const noexcept {
        return std::all_of(cells.begin(), cells.end(), [](VertexSet c) { return std::popcount(c) == 1; });
    }

    std::vector<std::vector<int>> as_lists() const {
        std::vector<std::vector<int>> out;
        for (auto c : cells) {
            std::vector<int> cell;
            for (; c; c &= c - 1) cell.push_back(std::countr_zero(c));
            out.push_back(std::move(cell));
        }
        return out;
    }

    bool valid_for(int n) const {
        VertexSet seen = 0;
        for (auto c : cells) {
            if (c == 0 || (seen & c)) return false;
            seen |= c;
        }
        return n == 0 ? seen == 0 : seen == OrderedPartition::unit(n).cells.front();
    }

    friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;
};

namespace detail {

using Rows = std::array<VertexSet, Digraph::kMaxVertices>;

/// Splits cells until every cell is uniform with respect to every splitter;
/// each new fragment becomes a splitter. Fragments are ordered by ascending
/// (out-count, in-count) into the splitter.
inline void refine_in_place(const Digraph& g, const Rows& cols, OrderedPartition& p,
                            std::deque<VertexSet> queue) {
    std::vector<std::pair<std::uint32_t, int>> keyed;
    while (!queue.empty()) {
        const VertexSet w = queue.front();
        queue.pop_front();
        for (std::size_t ci = 0; ci < p.cells.size(); ++ci) {
            const VertexSet x = p.cells[ci];
            if (std::popcount(x) == 1) continue;
            keyed.clear();
            for (VertexSet r = x; r; r &= r - 1) {
                int v = std::countr_zero(r);
                auto key = static_cast<std::uint32_t>(std::popcount(g.out_neighbours(v) & w)) << 8 |
                           static_cast<std::uint32_t>(std::popcount(cols[v] & w));
                keyed.emplace_back(key, v);
            }
            std::sort(keyed.begin(), keyed.end());
            if (keyed.front().first == keyed.back().first) continue;
            std::vector<VertexSet> frags;
            for (std::size_t i = 0; i < keyed.size(); ++i) {
                if (i == 0 || keyed[i].first != keyed[i - 1].first) frags.push_back(0);
                frags.back() |= VertexSet{1} << keyed[i].second;
            }
            p.cells.erase(p.cells.begin() + ci);
            p.cells.insert(p.cells.begin() + ci, frags.begin(), frags.end());
            for (auto f : frags) queue.push_back(f);
            ci += frags.size() - 1;
        }
    }
}

}  // namespace detail

/// Coarsest equitable refinement of `p` with respect to out- and in-degree
/// counts into each cell.
inline OrderedPartition refine(const Digraph& g, OrderedPartition p) {
    auto cols = g.in_rows();
    std::deque<VertexSet> queue(p.cells.begin(), p.cells.end());
    detail::refine_in_place(g, cols, p, std::move(queue));
    return p;
}

struct CanonicalForm {
    int n = 0;
    /// Row-major adjacency bits of the relabeled digraph, most significant
    /// bit first, zero-padded to whole bytes.
    std::vector<std::uint8_t> bytes;
    /// Vertex v of the input becomes vertex labeling(v).
    Permutation labeling;

    friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) {
        return a.n == b.n && a.bytes == b.bytes;
    }
};

struct CanonResult {
    CanonicalForm form;
    std::vector<Permutation> automorphisms;
    std::size_t leaves = 0;
};

namespace detail {

/// Individualization-refinement search. The target cell is the first
/// largest non-singleton cell; children are tried in ascending vertex order;
/// the canonical leaf is the one whose relabeled adjacency is maximal.
class CanonSearch {
public:
    explicit CanonSearch(const Digraph& g) : g_(g), n_(g.order()), cols_(g.in_rows()) {}

    CanonResult run() {
        CanonResult res;
        if (n_ == 0) {
            res.form.labeling = Permutation::identity(0);
            return res;
        }
        auto root = refine(g_, OrderedPartition::unit(n_));
        std::vector<int> path;
        explore(root, path);
        res.leaves = leaves_;
        res.automorphisms = std::move(autos_);
        res.form.n = n_;
        std::vector<int> pos(n_);
        for (int i = 0; i < n_; ++i) pos[best_lab_[i]] = i;
        res.form.labeling = Permutation::from_images(pos);
        res.form.bytes = pack(best_cert_);
        return res;
    }

private:
    static constexpr int kNoJump = INT_MAX;

    using Cert = std::array<std::uint64_t, Digraph::kMaxVertices>;

    int explore(const OrderedPartition& p, std::vector<int>& path) {
        if (p.is_discrete()) return leaf(p, path);
        std::size_t target = 0;
        int target_size = 0;
        for (std::size_t i = 0; i < p.cells.size(); ++i) {
            int s = std::popcount(p.cells[i]);
            if (s > target_size) {
                target_size = s;
                target = i;
            }
        }
        const int level = static_cast<int>(path.size());
        for (VertexSet r = p.cells[target]; r; r &= r - 1) {
            const int v = std::countr_zero(r);
            if (equivalent_to_earlier(v, path)) continue;
            OrderedPartition child = p;
            const VertexSet rest = p.cells[target] & ~(VertexSet{1} << v);
            child.cells[target] = VertexSet{1} << v;
            child.cells.insert(child.cells.begin() + static_cast<std::ptrdiff_t>(target) + 1, rest);
            refine_in_place(g_, cols_, child, {VertexSet{1} << v});
            path.push_back(v);
            int jump = explore(child, path);
            path.pop_back();
            if (jump < level) return jump;
        }
        return kNoJump;
    }

    /// True when v lies in the orbit of a smaller vertex under the group
    /// generated by the automorphisms found so far that fix `path` pointwise.
    bool equivalent_to_earlier(int v, const std::vector<int>& path) {
        if (autos_.empty()) return false;
        std::vector<int> parent(n_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& a : autos_) {
            bool fixes = std::all_of(path.begin(), path.end(), [&](int x) { return a(x) == x; });
            if (!fixes) continue;
            for (int x = 0; x < n_; ++x) {
                int rx = find(x), ry = find(a(x));
                if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
            }
        }
        return find(v) < v;
    }

    Cert certificate(const std::vector<int>& lab) const {
        std::array<int, Digraph::kMaxVertices> pos{};
        for (int i = 0; i < n_; ++i) pos[lab[i]] = i;
        Cert c{};
        for (int i = 0; i < n_; ++i) {
            std::uint64_t row = 0;
            for (VertexSet r = g_.out_neighbours(lab[i]); r; r &= r - 1)
                row |= std::uint64_t{1} << (63 - pos[std::countr_zero(r)]);
            c[i] = row;
        }
        return c;
    }

    int compare(const Cert& a, const Cert& b) const {
        for (int i = 0; i < n_; ++i)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::size_t common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
        std::size_t i = 0;
        while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
        return i;
    }

    void record_automorphism(const std::vector<int>& from, const std::vector<int>& to) {
        std::vector<int> img(n_);
        for (int i = 0; i < n_; ++i) img[from[i]] = to[i];
        auto a = Permutation::from_images(img);
        if (!a.is_identity()) autos_.push_back(std::move(a));
    }

    int leaf(const OrderedPartition& p, const std::vector<int>& path) {
        ++leaves_;
        std::vector<int> lab;
        lab.reserve(n_);
        for (auto c : p.cells) lab.push_back(std::countr_zero(c));
        Cert cert = certificate(lab);
        if (first_lab_.empty()) {
            first_lab_ = best_lab_ = lab;
            first_path_ = best_path_ = path;
            first_cert_ = best_cert_ = cert;
            return kNoJump;
        }
        if (compare(cert, first_cert_) == 0) {
            record_automorphism(first_lab_, lab);
            return static_cast<int>(common_prefix(path, first_path_));
        }
        int cmp = compare(cert, best_cert_);
        if (cmp > 0) {
            best_lab_ = std::move(lab);
            best_path_ = path;
            best_cert_ = cert;
        } else if (cmp == 0) {
            record_automorphism(best_lab_, lab);
            return static_cast<int>(common_prefix(path, best_path_));
        }
        return kNoJump;
    }

    std::vector<std::uint8_t> pack(const Cert& cert) const {
        const std::size_t bits = static_cast<std::size_t>(n_) * n_;
        std::vector<std::uint8_t> out((bits + 7) / 8, 0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (cert[i] >> (63 - j) & 1) {
                    std::size_t b = static_cast<std::size_t>(i) * n_ + j;
                    out[b / 8] |= static_cast<std::uint8_t>(0x80u >> (b % 8));
                }
        return out;
    }

    const Digraph& g_;
    int n_;
    Rows cols_;
    std::vector<int> first_lab_, best_lab_, first_path_, best_path_;
    Cert first_cert_{}, best_cert_{};
    std::vector<Permutation> autos_;
    std::size_t leaves_ = 0;
};

}  // namespace detail

inline CanonResult canonical_search(const Digraph& g) { return detail::CanonSearch(g).run(); }

inline CanonicalForm canonical_form(const Digraph& g) { return canonical_search(g).form; }

struct AutGroupReport {
    std::vector<Permutation> generators;
    GroupOrder order = 1;
    GroupLabel label = GroupLabel::Other;
    bool vertex_transitive = false;
    std::size_t derived_orbit_count = 0;
};

/// Summarizes the group generated by automorphisms of an n-vertex digraph.
inline AutGroupReport describe_automorphisms(int n, std::vector<Permutation> gens) {
    AutGroupReport rep;
    const auto degree = static_cast<std::size_t>(n);
    rep.order = group_order(degree, gens);
    if (rep.order == 60 || rep.order == 120 || rep.order == 240)
        rep.label = identify_group(fingerprint(PermGroup::enumerate(degree, gens)));
    rep.vertex_transitive = n > 0 && orbits(gens, degree).size() == 1;
    rep.derived_orbit_count = orbits(derived_subgroup_generators(degree, gens), degree).size();
    rep.generators = std::move(gens);
    return rep;
}

inline AutGroupReport automorphism_group(const Digraph& g) {
    return describe_automorphisms(g.order(), canonical_search(g).automorphisms);
}

inline bool is_automorphism(const Digraph& g, const Permutation& p) { return relabel(g, p) == g; }

inline bool are_isomorphic(const Digraph& a, const Digraph& b) {
    if (a.order() != b.order() || a.arc_count() != b.arc_count()) return false;
    auto degree_pairs = [](const Digraph& g) {
        auto cols = g.in_rows();
        std::vector<std::pair<int, int>> d;
        for (int i = 0; i < g.order(); ++i) d.emplace_back(g.out_degree(i), std::popcount(cols[i]));
        std::sort(d.begin(), d.end());
        return d;
    };
    if (degree_pairs(a) != degree_pairs(b)) return false;
    return canonical_form(a) == canonical_form(b);
}

/// For each entry, the index of the entry isomorphic to its reverse
/// (itself for self-reverse digraphs). Throws if a reverse is missing.
inline std::vector<std::size_t> reverse_partner(std::span<const Digraph> graphs,
                                                std::span<const CanonicalForm> forms) {
    if (graphs.size() != forms.size()) throw std::invalid_argument("reverse_partner: size mismatch");
    std::vector<std::size_t> partner(graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        auto rf = canonical_form(reverse(graphs[i]));
        auto it = std::find(forms.begin(), forms.end(), rf);
        if (it == forms.end())
            throw VerificationError("reverse of catalog entry " + std::to_string(i) + " is missing");
        partner[i] = static_cast<std::size_t>(it - forms.begin());
    }
    for (std::size_t i = 0; i < partner.size(); ++i)
        if (partner[partner[i]] != i) throw VerificationError("reverse pairing is not an involution");
    return partner;
}

}  // namespace dsrg60
