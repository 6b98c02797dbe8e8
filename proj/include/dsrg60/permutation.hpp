#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsrg60 {

/// Permutation of {0, ..., n-1} stored as its image array.
///
/// Products follow the apply-left-first convention: `compose(p, q)` sends
/// x to q(p(x)). Every coset-action and Schreier computation in this library
/// relies on that single convention.
class Permutation {
public:
    using Point = std::uint8_t;
    static constexpr std::size_t kMaxDegree = 256;

    Permutation() = default;

    explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
        if (images_.size() > kMaxDegree)
            throw std::invalid_argument("permutation degree exceeds 256");
        std::vector<bool> seen(images_.size(), false);
        for (auto x : images_) {
            if (x >= images_.size() || seen[x])
                throw std::invalid_argument("image array is not a bijection");
            seen[x] = true;
        }
    }

    static Permutation from_images(std::span<const int> images) {
        std::vector<Point> v;
        v.reserve(images.size());
        for (int x : images) {
            if (x < 0 || x >= static_cast<int>(kMaxDegree))
                throw std::invalid_argument("image out of range");
            v.push_back(static_cast<Point>(x));
        }
        return Permutation(std::move(v));
    }

    static Permutation identity(std::size_t degree) {
        if (degree > kMaxDegree)
            throw std::invalid_argument("permutation degree exceeds 256");
        Permutation p;
        p.images_.resize(degree);
        std::iota(p.images_.begin(), p.images_.end(), Point{0});
        return p;
    }

    /// Builds a permutation from disjoint cycles, e.g. {{0, 1}, {2, 3, 4}}.
    static Permutation from_cycles(std::size_t degree,
                                   std::initializer_list<std::initializer_list<int>> cycles) {
        auto p = identity(degree);
        std::vector<bool> used(degree, false);
        for (const auto& cycle : cycles) {
            std::vector<int> c(cycle);
            for (std::size_t i = 0; i < c.size(); ++i) {
                int from = c[i];
                int to = c[(i + 1) % c.size()];
                if (from < 0 || static_cast<std::size_t>(from) >= degree || to < 0 ||
                    static_cast<std::size_t>(to) >= degree || used[from])
                    throw std::invalid_argument("invalid cycle notation");
                used[from] = true;
                p.images_[from] = static_cast<Point>(to);
            }
        }
        return p;
    }

    std::size_t degree() const noexcept { return images_.size(); }
    int operator()(std::size_t x) const { return images_[x]; }
    int operator[](std::size_t x) const { return images_[x]; }
    std::span<const Point> images() const noexcept { return images_; }

    bool is_identity() const noexcept {
        for (std::size_t i = 0; i < images_.size(); ++i)
            if (images_[i] != i) return false;
        return true;
    }

    /// Smallest positive m with p^m = identity.
    std::uint64_t order() const {
        std::uint64_t result = 1;
        std::vector<bool> seen(images_.size(), false);
        for (std::size_t start = 0; start < images_.size(); ++start) {
            if (seen[start]) continue;
            std::uint64_t len = 0;
            for (std::size_t x = start; !seen[x]; x = images_[x]) {
                seen[x] = true;
                ++len;
            }
            result = std::lcm(result, len);
        }
        return result;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < images_.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(images_[i]);
        }
        return s + "]";
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    friend Permutation compose(const Permutation& p, const Permutation& q);
    friend Permutation invert(const Permutation& p);

    std::vector<Point> images_;
};

inline Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree())
        throw std::invalid_argument("compose: degree mismatch");
    Permutation r;
    r.images_.resize(p.degree());
    for (std::size_t x = 0; x < p.degree(); ++x) r.images_[x] = q.images_[p.images_[x]];
    return r;
}

inline Permutation invert(const Permutation& p) {
    Permutation r;
    r.images_.resize(p.degree());
    for (std::size_t x = 0; x < p.degree(); ++x)
        r.images_[p.images_[x]] = static_cast<Permutation::Point>(x);
    return r;
}

/// g^-1 h g, i.e. h conjugated by g.
inline Permutation conjugate(const Permutation& h, const Permutation& g) {
    return compose(compose(invert(g), h), g);
}

/// a^-1 b^-1 a b.
inline Permutation commutator(const Permutation& a, const Permutation& b) {
    return compose(compose(invert(a), invert(b)), compose(a, b));
}

struct PermutationHash {
    std::size_t operator()(const Permutation& p) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto x : p.images()) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Orbit of `point` under the group generated by `gens`, in breadth-first
/// order; the images of each dequeued point are appended in ascending order.
inline std::vector<int> orbit(std::span<const Permutation> gens, int point, std::size_t degree) {
    if (point < 0 || static_cast<std::size_t>(point) >= degree)
        throw std::out_of_range("orbit: point out of range");
    for (const auto& g : gens)
        if (g.degree() != degree) throw std::invalid_argument("orbit: degree mismatch");
    std::vector<bool> seen(degree, false);
    std::vector<int> result{point};
    seen[point] = true;
    std::vector<int> fresh;
    for (std::size_t head = 0; head < result.size(); ++head) {
        fresh.clear();
        for (const auto& g : gens) {
            int y = g(result[head]);
            if (!seen[y]) {
                seen[y] = true;
                fresh.push_back(y);
            }
        }
        std::sort(fresh.begin(), fresh.end());
        result.insert(result.end(), fresh.begin(), fresh.end());
    }
    return result;
}

/// All orbits, listed by ascending minimum element; each orbit sorted.
inline std::vector<std::vector<int>> orbits(std::span<const Permutation> gens, std::size_t degree) {
    std::vector<std::vector<int>> result;
    std::vector<bool> seen(degree, false);
    for (std::size_t p = 0; p < degree; ++p) {
        if (seen[p]) continue;
        auto o = orbit(gens, static_cast<int>(p), degree);
        for (int x : o) seen[x] = true;
        std::sort(o.begin(), o.end());
        result.push_back(std::move(o));
    }
    return result;
}

}  // namespace dsrg60

template <>
struct std::hash<dsrg60::Permutation> : dsrg60::PermutationHash {};
