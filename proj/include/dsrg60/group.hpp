#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dsrg60/permutation.hpp"

namespace dsrg60 {

using GroupOrder = boost::multiprecision::cpp_int;

/// Deterministic Schreier-Sims stabilizer chain.
///
/// Level i stores a base point, the strong generators fixing all earlier base
/// points, and a transversal: for every point b in the basic orbit, a group
/// element sending the base point to b.
class StabilizerChain {
public:
    static constexpr std::size_t kDefaultDegreeBound = 64;

    StabilizerChain(std::size_t degree, std::span<const Permutation> gens,
                    std::size_t degree_bound = kDefaultDegreeBound)
        : degree_(degree) {
        if (degree > degree_bound)
            throw std::invalid_argument("stabilizer chain: degree above configured bound");
        std::vector<Permutation> strong;
        for (const auto& g : gens) {
            if (g.degree() != degree)
                throw std::invalid_argument("stabilizer chain: degree mismatch");
            if (!g.is_identity()) strong.push_back(g);
        }
        for (const auto& g : strong) {
            bool fixes_base = std::all_of(levels_.begin(), levels_.end(),
                                          [&](const Level& l) { return g(l.base) == l.base; });
            if (fixes_base) add_level(first_moved(g));
        }
        for (const auto& g : strong) {
            for (std::size_t i = 0; i < levels_.size(); ++i) {
                levels_[i].gens.push_back(g);
                if (g(levels_[i].base) != levels_[i].base) break;
            }
        }
        for (std::size_t i = 0; i < levels_.size(); ++i) rebuild_orbit(i);
        complete();
    }

    std::size_t degree() const noexcept { return degree_; }
    std::size_t depth() const noexcept { return levels_.size(); }

    GroupOrder order() const {
        GroupOrder result = 1;
        for (const auto& l : levels_) result *= l.orbit.size();
        return result;
    }

    std::vector<int> base() const {
        std::vector<int> b;
        for (const auto& l : levels_) b.push_back(l.base);
        return b;
    }

    bool contains(const Permutation& g) const {
        if (g.degree() != degree_) return false;
        auto [residue, level] = strip(g, 0);
        return level == levels_.size() && residue.is_identity();
    }

private:
    struct Level {
        int base = 0;
        std::vector<Permutation> gens;
        std::vector<int> orbit;
        std::vector<std::optional<Permutation>> transversal;
    };

    static int first_moved(const Permutation& g) {
        for (std::size_t x = 0; x < g.degree(); ++x)
            if (g(x) != static_cast<int>(x)) return static_cast<int>(x);
        throw std::logic_error("identity has no moved point");
    }

    void add_level(int base) {
        Level l;
        l.base = base;
        levels_.push_back(std::move(l));
    }

    void rebuild_orbit(std::size_t i) {
        auto& l = levels_[i];
        l.transversal.assign(degree_, std::nullopt);
        l.transversal[l.base] = Permutation::identity(degree_);
        l.orbit = {l.base};
        for (std::size_t head = 0; head < l.orbit.size(); ++head) {
            int x = l.orbit[head];
            for (const auto& s : l.gens) {
                int y = s(x);
                if (!l.transversal[y]) {
                    l.transversal[y] = compose(*l.transversal[x], s);
                    l.orbit.push_back(y);
                }
            }
        }
    }

    std::pair<Permutation, std::size_t> strip(Permutation g, std::size_t from) const {
        for (std::size_t i = from; i < levels_.size(); ++i) {
            int beta = g(levels_[i].base);
            const auto& u = levels_[i].transversal[beta];
            if (!u) return {std::move(g), i};
            g = compose(g, invert(*u));
        }
        return {std::move(g), levels_.size()};
    }

    void complete() {
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels_.size()) - 1;
        while (i >= 0) {
            bool extended = false;
            auto& l = levels_[i];
            for (std::size_t oi = 0; !extended && oi < l.orbit.size(); ++oi) {
                int delta = l.orbit[oi];
                for (std::size_t si = 0; !extended && si < l.gens.size(); ++si) {
                    const auto& s = l.gens[si];
                    auto schreier = compose(compose(*l.transversal[delta], s),
                                            invert(*l.transversal[s(delta)]));
                    auto [h, j] = strip(std::move(schreier), i + 1);
                    if (h.is_identity()) continue;
                    if (j == levels_.size()) add_level(first_moved(h));
                    for (std::size_t m = i + 1; m <= j; ++m) {
                        levels_[m].gens.push_back(h);
                        rebuild_orbit(m);
                    }
                    i = static_cast<std::ptrdiff_t>(j);
                    extended = true;
                }
            }
            if (!extended) --i;
        }
    }

    std::size_t degree_;
    std::vector<Level> levels_;
};

inline GroupOrder group_order(std::size_t degree, std::span<const Permutation> gens,
                              std::size_t degree_bound = StabilizerChain::kDefaultDegreeBound) {
    return StabilizerChain(degree, gens, degree_bound).order();
}

/// Permutation group given by generators, optionally carrying its full
/// element list (sorted by image array, identity first).
class PermGroup {
public:
    static constexpr std::size_t kDefaultElementLimit = 100000;

    PermGroup() = default;

    static PermGroup generated_by(std::size_t degree, std::vector<Permutation> gens) {
        PermGroup g;
        g.degree_ = degree;
        for (const auto& p : gens)
            if (p.degree() != degree) throw std::invalid_argument("PermGroup: degree mismatch");
        g.generators_ = std::move(gens);
        return g;
    }

    /// Closure enumeration; throws if the group exceeds `limit` elements.
    static PermGroup enumerate(std::size_t degree, std::vector<Permutation> gens,
                               std::size_t limit = kDefaultElementLimit) {
        auto g = generated_by(degree, std::move(gens));
        auto id = Permutation::identity(degree);
        std::unordered_set<Permutation, PermutationHash> seen{id};
        std::vector<Permutation> queue{id};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (const auto& s : g.generators_) {
                auto next = compose(queue[head], s);
                if (seen.insert(next).second) {
                    if (seen.size() > limit)
                        throw std::length_error("PermGroup: element limit exceeded");
                    queue.push_back(std::move(next));
                }
            }
        }
        std::sort(queue.begin(), queue.end());
        g.elements_ = std::move(queue);
        return g;
    }

    std::size_t degree() const noexcept { return degree_; }
    const std::vector<Permutation>& generators() const noexcept { return generators_; }
    bool has_elements() const noexcept { return !elements_.empty(); }

    const std::vector<Permutation>& elements() const {
        if (elements_.empty()) throw std::logic_error("PermGroup: elements not enumerated");
        return elements_;
    }

    GroupOrder order() const {
        if (has_elements()) return GroupOrder(elements_.size());
        return group_order(degree_, generators_, Permutation::kMaxDegree);
    }

    std::size_t size() const { return elements().size(); }

    std::optional<std::size_t> index_of(const Permutation& p) const {
        const auto& e = elements();
        auto it = std::lower_bound(e.begin(), e.end(), p);
        if (it == e.end() || *it != p) return std::nullopt;
        return static_cast<std::size_t>(it - e.begin());
    }

    bool contains(const Permutation& p) const {
        if (has_elements()) return index_of(p).has_value();
        return StabilizerChain(degree_, generators_, Permutation::kMaxDegree).contains(p);
    }

private:
    std::size_t degree_ = 0;
    std::vector<Permutation> generators_;
    std::vector<Permutation> elements_;
};

inline PermGroup symmetric_group(std::size_t n, std::size_t degree) {
    if (n < 2 || n > degree) throw std::invalid_argument("symmetric_group: bad size");
    std::vector<std::uint8_t> cycle(degree);
    for (std::size_t i = 0; i < degree; ++i)
        cycle[i] = static_cast<std::uint8_t>(i < n ? (i + 1) % n : i);
    return PermGroup::enumerate(degree, {Permutation::from_cycles(degree, {{0, 1}}),
                                         Permutation(std::move(cycle))});
}

inline PermGroup alternating_group_5() {
    return PermGroup::enumerate(5, {Permutation::from_cycles(5, {{0, 1, 2}}),
                                    Permutation::from_cycles(5, {{0, 1, 2, 3, 4}})});
}

/// S5 x C2 on 7 points: S5 on {0..4}, C2 swapping 5 and 6.
inline PermGroup make_s5xc2() {
    return PermGroup::enumerate(7, {Permutation::from_cycles(7, {{0, 1}}),
                                    Permutation::from_cycles(7, {{0, 1, 2, 3, 4}}),
                                    Permutation::from_cycles(7, {{5, 6}})});
}

/// Subgroup of an enumerated group given by indices into its element list.
using ElementSet = std::vector<std::size_t>;

inline ElementSet conjugate_set(const PermGroup& g, const ElementSet& subset, const Permutation& by) {
    ElementSet out;
    out.reserve(subset.size());
    for (auto i : subset) out.push_back(*g.index_of(conjugate(g.elements()[i], by)));
    std::sort(out.begin(), out.end());
    return out;
}

struct SubgroupClass {
    PermGroup representative;
    ElementSet representative_indices;  // sorted indices into the ambient group
    std::size_t class_size = 0;
    std::size_t class_index = 0;
    std::optional<std::size_t> suborbit_count;
};

/// Conjugacy classes of Klein four-subgroups, ordered by
/// (class size, least element set of the representative).
inline std::vector<SubgroupClass> klein_subgroup_classes(const PermGroup& g) {
    const auto& elems = g.elements();
    std::vector<std::size_t> involutions;
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (elems[i].order() == 2) involutions.push_back(i);

    std::set<ElementSet> subgroups;
    for (std::size_t a = 0; a < involutions.size(); ++a) {
        for (std::size_t b = a + 1; b < involutions.size(); ++b) {
            const auto& x = elems[involutions[a]];
            const auto& y = elems[involutions[b]];
            auto xy = compose(x, y);
            if (xy != compose(y, x)) continue;
            ElementSet s{0, involutions[a], involutions[b], *g.index_of(xy)};
            std::sort(s.begin(), s.end());
            subgroups.insert(std::move(s));
        }
    }

    std::vector<std::pair<std::size_t, ElementSet>> found;  // (size, least member)
    std::set<ElementSet> assigned;
    for (const auto& s : subgroups) {
        if (assigned.contains(s)) continue;
        std::set<ElementSet> conjugates;
        for (const auto& by : elems) conjugates.insert(conjugate_set(g, s, by));
        assigned.insert(conjugates.begin(), conjugates.end());
        found.emplace_back(conjugates.size(), *conjugates.begin());
    }
    std::sort(found.begin(), found.end());

    std::vector<SubgroupClass> classes;
    for (std::size_t i = 0; i < found.size(); ++i) {
        SubgroupClass c;
        std::vector<Permutation> gens;
        for (auto idx : found[i].second)
            if (idx != 0) gens.push_back(elems[idx]);
        c.representative = PermGroup::enumerate(g.degree(), std::move(gens));
        c.representative_indices = found[i].second;
        c.class_size = found[i].first;
        c.class_index = i;
        classes.push_back(std::move(c));
    }
    return classes;
}

/// Searches G for an element conjugating subgroup `a` onto `b`.
inline std::optional<Permutation> find_conjugator(const PermGroup& g, const ElementSet& a,
                                                  const ElementSet& b) {
    for (const auto& by : g.elements())
        if (conjugate_set(g, a, by) == b) return by;
    return std::nullopt;
}

/// Group closure of a set of elements, returned as an enumerated group.
inline PermGroup closure(std::size_t degree, const std::vector<Permutation>& seeds) {
    std::vector<Permutation> gens;
    std::unordered_set<Permutation, PermutationHash> unique;
    for (const auto& s : seeds)
        if (!s.is_identity() && unique.insert(s).second) gens.push_back(s);
    return PermGroup::enumerate(degree, std::move(gens));
}

inline PermGroup derived_subgroup(const PermGroup& g) {
    std::unordered_set<Permutation, PermutationHash> comms;
    for (const auto& a : g.elements())
        for (const auto& b : g.elements()) comms.insert(commutator(a, b));
    std::vector<Permutation> seeds(comms.begin(), comms.end());
    std::sort(seeds.begin(), seeds.end());
    return closure(g.degree(), seeds);
}

/// Generators of [G, G] as the normal closure of generator commutators.
/// Works from generators alone, so it is usable for groups too large to
/// enumerate.
inline std::vector<Permutation> derived_subgroup_generators(std::size_t degree,
                                                            std::span<const Permutation> gens) {
    std::vector<Permutation> result;
    auto try_add = [&](const Permutation& c) {
        if (c.is_identity()) return false;
        if (!result.empty() && StabilizerChain(degree, result, Permutation::kMaxDegree).contains(c))
            return false;
        result.push_back(c);
        return true;
    };
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) try_add(commutator(gens[i], gens[j]));
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t i = 0; i < result.size(); ++i)
            for (const auto& g : gens)
                if (try_add(conjugate(result[i], g))) grew = true;
    }
    return result;
}

struct GroupFingerprint {
    std::uint64_t order = 0;
    std::uint64_t center_order = 0;
    std::uint64_t derived_order = 0;
    bool derived_is_perfect = false;
    std::map<std::uint64_t, std::uint64_t> element_order_histogram;

    friend bool operator==(const GroupFingerprint&, const GroupFingerprint&) = default;
};

inline GroupFingerprint fingerprint(const PermGroup& g) {
    GroupFingerprint fp;
    const auto& elems = g.elements();
    fp.order = elems.size();
    for (const auto& z : elems) {
        bool central = std::all_of(elems.begin(), elems.end(),
                                   [&](const Permutation& x) { return compose(z, x) == compose(x, z); });
        if (central) ++fp.center_order;
        ++fp.element_order_histogram[z.order()];
    }
    auto derived = derived_subgroup(g);
    fp.derived_order = derived.size();
    fp.derived_is_perfect = derived_subgroup(derived).size() == derived.size();
    return fp;
}

enum class GroupLabel { A5, S5, S5xC2, Other };

inline std::string to_string(GroupLabel l) {
    switch (l) {
        case GroupLabel::A5: return "A5";
        case GroupLabel::S5: return "S5";
        case GroupLabel::S5xC2: return "S5×2";
        case GroupLabel::Other: return "other";
    }
    return "other";
}

/// Matches a fingerprint against concrete A5, S5 and S5x2. Equal fingerprints
/// are taken as identification; no isomorphism is constructed. Among these
/// three, (order, center order) already separates them.
inline GroupLabel identify_group(const GroupFingerprint& fp) {
    static const std::array<std::pair<GroupLabel, GroupFingerprint>, 3> refs = {{
        {GroupLabel::A5, fingerprint(alternating_group_5())},
        {GroupLabel::S5, fingerprint(symmetric_group(5, 5))},
        {GroupLabel::S5xC2, fingerprint(make_s5xc2())},
    }};
    for (const auto& [label, ref] : refs)
        if (ref == fp) return label;
    return GroupLabel::Other;
}

}  // namespace dsrg60
