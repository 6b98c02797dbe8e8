#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dsrg60/group.hpp"
#include "dsrg60/permutation.hpp"

namespace dsrg60 {

/// Vertex subset of a graph on at most 64 vertices; bit i is vertex i.
using VertexSet = std::uint64_t;
/// Set of suborbit indices; bit i is suborbit i.
using SuborbitMask = std::uint64_t;

/// Action of G on the right cosets of H by right multiplication.
/// Point i is the coset H t_i; point 0 is H itself.
struct CosetAction {
    std::size_t degree = 0;
    PermGroup group;
    std::vector<Permutation> transversal;
    std::vector<Permutation> generator_images;
    std::vector<Permutation> element_images;  // parallel to group.elements()
    std::vector<int> coset_of_element;         // parallel to group.elements()
    std::size_t kernel_order = 0;

    const Permutation& image_of(const Permutation& g) const {
        auto idx = group.index_of(g);
        if (!idx) throw std::invalid_argument("CosetAction: element not in group");
        return element_images[*idx];
    }

    int coset_of(const Permutation& g) const { return coset_of_element[*group.index_of(g)]; }

    /// Image of t_i: an element sending point 0 to point i.
    const Permutation& translator(int i) const { return image_of(transversal[i]); }

    std::vector<Permutation> distinct_images() const {
        std::set<Permutation> s(element_images.begin(), element_images.end());
        return {s.begin(), s.end()};
    }
};

inline CosetAction coset_action(const PermGroup& g, const PermGroup& h, std::size_t expected_degree = 60) {
    const auto& elems = g.elements();
    for (const auto& x : h.elements())
        if (!g.index_of(x)) throw std::invalid_argument("coset_action: H is not a subgroup of G");
    if (elems.size() % h.size() != 0 || elems.size() / h.size() != expected_degree)
        throw std::invalid_argument("coset_action: wrong index");
    if (expected_degree > 64) throw std::invalid_argument("coset_action: degree above 64");

    CosetAction act;
    act.degree = expected_degree;
    act.group = g;
    act.coset_of_element.assign(elems.size(), -1);
    for (std::size_t xi = 0; xi < elems.size(); ++xi) {
        if (act.coset_of_element[xi] >= 0) continue;
        int point = static_cast<int>(act.transversal.size());
        act.transversal.push_back(elems[xi]);
        for (const auto& hh : h.elements()) act.coset_of_element[*g.index_of(compose(hh, elems[xi]))] = point;
    }

    act.element_images.reserve(elems.size());
    std::vector<int> img(act.degree);
    for (const auto& x : elems) {
        for (std::size_t i = 0; i < act.degree; ++i) img[i] = act.coset_of(compose(act.transversal[i], x));
        act.element_images.push_back(Permutation::from_images(img));
        if (act.element_images.back().is_identity()) ++act.kernel_order;
    }
    for (const auto& s : g.generators()) act.generator_images.push_back(act.image_of(s));
    return act;
}

/// Orbits of the point stabilizer of 0 on all points, with orbital pairing.
struct SuborbitSet {
    int base_point = 0;
    std::vector<std::vector<int>> orbits;  // by ascending minimum element
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> pairing;
    std::size_t trivial_index = 0;
    std::vector<std::size_t> orbit_of;  // point -> orbit index
    std::vector<VertexSet> point_masks;

    std::size_t count() const noexcept { return orbits.size(); }

    VertexSet points(SuborbitMask subset) const {
        VertexSet v = 0;
        for (std::size_t i = 0; i < orbits.size(); ++i)
            if (subset >> i & 1) v |= point_masks[i];
        return v;
    }

    SuborbitMask paired(SuborbitMask subset) const {
        SuborbitMask out = 0;
        for (std::size_t i = 0; i < orbits.size(); ++i)
            if (subset >> i & 1) out |= SuborbitMask{1} << pairing[i];
        return out;
    }

    SuborbitMask nontrivial_mask() const {
        SuborbitMask all = orbits.size() == 64 ? ~SuborbitMask{0} : (SuborbitMask{1} << orbits.size()) - 1;
        return all & ~(SuborbitMask{1} << trivial_index);
    }
};

inline SuborbitSet suborbits(const CosetAction& act, const PermGroup& h) {
    std::vector<Permutation> gens;
    for (const auto& x : h.elements()) gens.push_back(act.image_of(x));
    SuborbitSet sub;
    sub.orbits = orbits(gens, act.degree);
    sub.orbit_of.assign(act.degree, 0);
    for (std::size_t i = 0; i < sub.orbits.size(); ++i) {
        VertexSet m = 0;
        for (int p : sub.orbits[i]) {
            sub.orbit_of[p] = i;
            m |= VertexSet{1} << p;
        }
        sub.sizes.push_back(sub.orbits[i].size());
        sub.point_masks.push_back(m);
    }
    sub.trivial_index = sub.orbit_of[0];
    if (sub.orbits[sub.trivial_index].size() != 1)
        throw std::logic_error("suborbits: base point orbit is not trivial");
    for (const auto& o : sub.orbits) {
        // 0 * t_p^-1 for the representative p = min(o), since 0 * t_p = p.
        int back = act.coset_of(invert(act.transversal[o.front()]));
        sub.pairing.push_back(sub.orbit_of[back]);
    }
    for (std::size_t i = 0; i < sub.pairing.size(); ++i) {
        if (sub.pairing[sub.pairing[i]] != i || sub.sizes[sub.pairing[i]] != sub.sizes[i])
            throw std::logic_error("suborbits: pairing is not a size-preserving involution");
    }
    return sub;
}

/// Names H1..H4 by suborbit counts 19, 32, 22, 22 among the Klein classes.
struct SuborbitSignature {
    std::vector<std::size_t> counts;  // by class index
    std::size_t h1 = 0, h2 = 0, h3 = 0, h4 = 0;

    std::optional<std::string> name_of(std::size_t class_index) const {
        if (class_index == h1) return "H1";
        if (class_index == h2) return "H2";
        if (class_index == h3) return "H3";
        if (class_index == h4) return "H4";
        return std::nullopt;
    }

    std::size_t index_of(std::string_view name) const {
        if (name == "H1") return h1;
        if (name == "H2") return h2;
        if (name == "H3") return h3;
        if (name == "H4") return h4;
        throw std::invalid_argument("unknown subgroup name");
    }
};

inline SuborbitSignature suborbit_signature(std::span<const std::size_t> counts) {
    SuborbitSignature sig;
    sig.counts.assign(counts.begin(), counts.end());
    std::vector<std::size_t> with19, with32, with22;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 19) with19.push_back(i);
        if (counts[i] == 32) with32.push_back(i);
        if (counts[i] == 22) with22.push_back(i);
    }
    if (with19.size() != 1 || with32.size() != 1 || with22.size() != 2)
        throw std::logic_error("suborbit signature: expected one 19, one 32 and two 22");
    sig.h1 = with19[0];
    sig.h2 = with32[0];
    sig.h3 = with22[0];
    sig.h4 = with22[1];
    return sig;
}

/// Permutations of suborbit indices induced by N_G(H). An element n acts on
/// points by H t -> H n^-1 t n, which fixes point 0, commutes with the
/// action up to the automorphism x -> n^-1 x n, and therefore maps the
/// suborbit-union digraph of a subset S onto that of the image of S.
inline PermGroup normalizer_action_on_suborbits(const CosetAction& act, const PermGroup& h,
                                                const SuborbitSet& sub) {
    const auto& g = act.group;
    ElementSet h_set;
    for (const auto& x : h.elements()) h_set.push_back(*g.index_of(x));
    std::sort(h_set.begin(), h_set.end());

    std::set<Permutation> induced;
    std::vector<int> img(sub.count());
    for (const auto& n : g.elements()) {
        if (conjugate_set(g, h_set, n) != h_set) continue;
        auto n_inv = invert(n);
        for (std::size_t i = 0; i < sub.count(); ++i) {
            const auto& t = act.transversal[sub.orbits[i].front()];
            img[i] = static_cast<int>(sub.orbit_of[act.coset_of(compose(compose(n_inv, t), n))]);
        }
        induced.insert(Permutation::from_images(img));
    }
    return PermGroup::enumerate(sub.count(), {induced.begin(), induced.end()});
}

/// Image of a suborbit subset under an index permutation.
inline SuborbitMask apply_to_mask(const Permutation& p, SuborbitMask m) {
    SuborbitMask out = 0;
    for (std::size_t i = 0; i < p.degree(); ++i)
        if (m >> i & 1) out |= SuborbitMask{1} << p(i);
    return out;
}

/// Normalizer elements of G (as elements of G), for tests and diagnostics.
inline std::vector<Permutation> normalizer_elements(const PermGroup& g, const PermGroup& h) {
    ElementSet h_set;
    for (const auto& x : h.elements()) h_set.push_back(*g.index_of(x));
    std::sort(h_set.begin(), h_set.end());
    std::vector<Permutation> out;
    for (const auto& n : g.elements())
        if (conjugate_set(g, h_set, n) == h_set) out.push_back(n);
    return out;
}

}  // namespace dsrg60
