#pragma once

#include <array>
#include <bit>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dsrg60/action.hpp"
#include "dsrg60/permutation.hpp"

namespace dsrg60 {

/// Loopless digraph on at most 64 vertices as bit rows: bit j of row i is
/// the arc i -> j.
class Digraph {
public:
    static constexpr int kMaxVertices = 64;

    Digraph() = default;

    explicit Digraph(int n) : n_(n) {
        if (n < 0 || n > kMaxVertices) throw std::invalid_argument("Digraph: vertex count out of range");
    }

    int order() const noexcept { return n_; }

    bool has_arc(int i, int j) const noexcept { return rows_[i] >> j & 1; }

    void add_arc(int i, int j) {
        check(i);
        check(j);
        if (i == j) throw std::invalid_argument("Digraph: loops are not allowed");
        rows_[i] |= VertexSet{1} << j;
    }

    void remove_arc(int i, int j) {
        check(i);
        check(j);
        rows_[i] &= ~(VertexSet{1} << j);
    }

    VertexSet out_neighbours(int i) const noexcept { return rows_[i]; }

    void set_out_neighbours(int i, VertexSet row) {
        check(i);
        if (row >> i & 1) throw std::invalid_argument("Digraph: loops are not allowed");
        if (n_ < 64 && (row >> n_) != 0) throw std::invalid_argument("Digraph: arc to missing vertex");
        rows_[i] = row;
    }

    int out_degree(int i) const noexcept { return std::popcount(rows_[i]); }

    std::size_t arc_count() const noexcept {
        std::size_t c = 0;
        for (int i = 0; i < n_; ++i) c += std::popcount(rows_[i]);
        return c;
    }

    /// Columns as rows: bit i of result[j] is the arc i -> j.
    std::array<VertexSet, kMaxVertices> in_rows() const noexcept {
        std::array<VertexSet, kMaxVertices> t{};
        for (int i = 0; i < n_; ++i)
            for (VertexSet r = rows_[i]; r; r &= r - 1) t[std::countr_zero(r)] |= VertexSet{1} << i;
        return t;
    }

    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    void check(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("Digraph: vertex out of range");
    }

    int n_ = 0;
    std::array<VertexSet, kMaxVertices> rows_{};
};

inline Digraph reverse(const Digraph& g) {
    Digraph r(g.order());
    auto cols = g.in_rows();
    for (int i = 0; i < g.order(); ++i) r.set_out_neighbours(i, cols[i]);
    return r;
}

/// Image of g under the vertex map i -> sigma(i).
inline Digraph relabel(const Digraph& g, const Permutation& sigma) {
    if (static_cast<int>(sigma.degree()) != g.order())
        throw std::invalid_argument("relabel: degree mismatch");
    Digraph r(g.order());
    for (int i = 0; i < g.order(); ++i)
        for (VertexSet row = g.out_neighbours(i); row; row &= row - 1)
            r.add_arc(sigma(i), sigma(std::countr_zero(row)));
    return r;
}

struct DsrgParams {
    int v = 0, k = 0, t = 0, lambda = 0, mu = 0;

    friend auto operator<=>(const DsrgParams&, const DsrgParams&) = default;

    std::string to_string() const {
        return "(" + std::to_string(v) + "," + std::to_string(k) + "," + std::to_string(t) + "," +
               std::to_string(lambda) + "," + std::to_string(mu) + ")";
    }

    /// "60-28-20-14-12", used for directory names.
    std::string slug() const {
        return std::to_string(v) + "-" + std::to_string(k) + "-" + std::to_string(t) + "-" +
               std::to_string(lambda) + "-" + std::to_string(mu);
    }

    /// Parses "v,k,t,l,m" (surrounding parentheses allowed).
    static DsrgParams parse(std::string_view s) {
        if (!s.empty() && s.front() == '(') s.remove_prefix(1);
        if (!s.empty() && s.back() == ')') s.remove_suffix(1);
        std::array<int, 5> vals{};
        std::size_t field = 0;
        while (true) {
            auto comma = s.find(',');
            auto token = s.substr(0, comma);
            if (field >= vals.size()) throw std::invalid_argument("params: expected five values");
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), vals[field]);
            if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty() || vals[field] < 0)
                throw std::invalid_argument("params: bad integer '" + std::string(token) + "'");
            ++field;
            if (comma == std::string_view::npos) break;
            s.remove_prefix(comma + 1);
        }
        if (field != vals.size()) throw std::invalid_argument("params: expected five values");
        return {vals[0], vals[1], vals[2], vals[3], vals[4]};
    }
};

/// Value of one path-count class: never observed, one constant, or several.
struct PathCount {
    enum class Kind { Vacuous, Constant, NonConstant };
    Kind kind = Kind::Vacuous;
    int value = 0;

    bool observe(int c) {
        if (kind == Kind::Vacuous) {
            kind = Kind::Constant;
            value = c;
        } else if (kind == Kind::Constant && value != c) {
            kind = Kind::NonConstant;
        }
        return kind != Kind::NonConstant;
    }

    bool constant() const noexcept { return kind != Kind::NonConstant; }
    /// Constant value, 0 for a class with no pairs.
    int value_or_zero() const noexcept { return kind == Kind::Constant ? value : 0; }

    friend bool operator==(const PathCount&, const PathCount&) = default;
};

/// Number of 2-paths x -> z -> y, classified by x = y, x -> y, or neither.
struct PathCountProfile {
    PathCount diag, arc, nonarc;
};

namespace detail {

inline bool observe_row(const Digraph& g, const std::array<VertexSet, Digraph::kMaxVertices>& cols,
                        int x, PathCountProfile& prof) {
    VertexSet out = g.out_neighbours(x);
    for (int y = 0; y < g.order(); ++y) {
        int c = std::popcount(out & cols[y]);
        PathCount& cls = (x == y) ? prof.diag : (out >> y & 1) ? prof.arc : prof.nonarc;
        if (!cls.observe(c)) return false;
    }
    return true;
}

}  // namespace detail

inline PathCountProfile path_count_profile(const Digraph& g) {
    PathCountProfile prof;
    auto cols = g.in_rows();
    for (int x = 0; x < g.order(); ++x) detail::observe_row(g, cols, x, prof);
    return prof;
}

/// Reason a digraph failed the definition, for diagnostics.
enum class DsrgViolation { None, IrregularOutDegree, IrregularInDegree, DiagonalNotConstant,
                           ArcNotConstant, NonArcNotConstant };

inline std::string to_string(DsrgViolation v) {
    switch (v) {
        case DsrgViolation::None: return "none";
        case DsrgViolation::IrregularOutDegree: return "out-degrees are not all equal";
        case DsrgViolation::IrregularInDegree: return "in-degrees differ from the out-degree";
        case DsrgViolation::DiagonalNotConstant: return "closed 2-path counts (t) are not constant";
        case DsrgViolation::ArcNotConstant: return "2-path counts over arcs (lambda) are not constant";
        case DsrgViolation::NonArcNotConstant: return "2-path counts over non-arcs (mu) are not constant";
    }
    return "unknown";
}

struct DsrgCheck {
    std::optional<DsrgParams> params;
    DsrgViolation violation = DsrgViolation::None;
};

/// Checks the definition. Row 0 is classified first and any inconsistency
/// there returns before the other rows are examined.
inline DsrgCheck check_dsrg(const Digraph& g) {
    DsrgCheck res;
    const int n = g.order();
    if (n == 0) return res;
    const int k = g.out_degree(0);
    for (int i = 1; i < n; ++i)
        if (g.out_degree(i) != k) {
            res.violation = DsrgViolation::IrregularOutDegree;
            return res;
        }
    auto cols = g.in_rows();
    for (int i = 0; i < n; ++i)
        if (std::popcount(cols[i]) != k) {
            res.violation = DsrgViolation::IrregularInDegree;
            return res;
        }
    PathCountProfile prof;
    for (int x = 0; x < n; ++x) {
        if (!detail::observe_row(g, cols, x, prof)) {
            res.violation = !prof.diag.constant()  ? DsrgViolation::DiagonalNotConstant
                            : !prof.arc.constant() ? DsrgViolation::ArcNotConstant
                                                   : DsrgViolation::NonArcNotConstant;
            return res;
        }
    }
    res.params = DsrgParams{n, k, prof.diag.value_or_zero(), prof.arc.value_or_zero(),
                            prof.nonarc.value_or_zero()};
    return res;
}

inline std::optional<DsrgParams> is_dsrg(const Digraph& g) { return check_dsrg(g).params; }

namespace detail {
inline std::optional<std::int64_t> exact_sqrt(std::int64_t x) {
    if (x < 0) return std::nullopt;
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= x) ++r;
    if (r * r != x) return std::nullopt;
    return r;
}
}  // namespace detail

/// Necessary conditions only: the counting identity, basic ranges, and for
/// 0 < t < k integral eigenvalues with non-negative integral multiplicities.
inline bool feasible(const DsrgParams& p) {
    const std::int64_t v = p.v, k = p.k, t = p.t, l = p.lambda, m = p.mu;
    if (v < 1 || k < 0 || t < 0 || l < 0 || m < 0) return false;
    if (t > k || k >= v) return false;
    if (k > 0 && l >= k) return false;
    if (k * (k + m - l) != t + (v - 1) * m) return false;
    if (t == 0 || t == k) return true;
    // Nontrivial eigenvalues (l - m +- d) / 2 with d^2 = (m - l)^2 + 4(t - m).
    auto d = detail::exact_sqrt((m - l) * (m - l) + 4 * (t - m));
    if (!d || *d == 0) return false;
    const std::int64_t num = 2 * k + (l - m) * (v - 1);
    if (num % *d != 0) return false;
    const std::int64_t q = num / *d;
    if ((v - 1 - q) % 2 != 0) return false;
    const std::int64_t mult_plus = (v - 1 - q) / 2;
    const std::int64_t mult_minus = (v - 1 + q) / 2;
    return mult_plus >= 0 && mult_minus >= 0;
}

/// Digraph whose out-neighbourhood of point 0 is the union of the chosen
/// suborbits, translated to every other point by the coset action.
inline Digraph from_suborbit_union(const SuborbitSet& sub, const CosetAction& act, SuborbitMask subset) {
    if (subset >> sub.trivial_index & 1)
        throw std::invalid_argument("from_suborbit_union: subset contains the trivial suborbit");
    if (sub.count() < 64 && (subset >> sub.count()) != 0)
        throw std::invalid_argument("from_suborbit_union: suborbit index out of range");
    const VertexSet delta = sub.points(subset);
    Digraph g(static_cast<int>(act.degree));
    for (int x = 0; x < static_cast<int>(act.degree); ++x) {
        const auto& tr = act.translator(x);
        VertexSet row = 0;
        for (VertexSet d = delta; d; d &= d - 1) row |= VertexSet{1} << tr(std::countr_zero(d));
        g.set_out_neighbours(x, row);
    }
    return g;
}

/// |Delta ∩ Delta*|: the closed 2-path count at the base point.
inline int predicted_t(const SuborbitSet& sub, SuborbitMask subset) {
    if (subset >> sub.trivial_index & 1)
        throw std::invalid_argument("predicted_t: subset contains the trivial suborbit");
    return std::popcount(sub.points(subset) & sub.points(sub.paired(subset)));
}

}  // namespace dsrg60
