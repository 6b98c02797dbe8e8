#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "dsrg60/canon.hpp"
#include "dsrg60/digraph.hpp"
#include "dsrg60/errors.hpp"

namespace dsrg60 {

/// digraph6: '&', one byte n + 63 (n <= 62), then the n*n adjacency bits in
/// row-major order, zero-padded to a multiple of 6, six bits per byte (most
/// significant first) offset by 63, and a trailing newline.
inline std::string encode_digraph6(const Digraph& g) {
    const int n = g.order();
    if (n > 62) throw std::invalid_argument("digraph6: only n <= 62 is supported");
    std::string out;
    out.reserve(3 + (static_cast<std::size_t>(n) * n + 5) / 6);
    out.push_back('&');
    out.push_back(static_cast<char>(n + 63));
    int acc = 0, nbits = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            acc = acc << 1 | (g.has_arc(i, j) ? 1 : 0);
            if (++nbits == 6) {
                out.push_back(static_cast<char>(acc + 63));
                acc = nbits = 0;
            }
        }
    if (nbits) out.push_back(static_cast<char>((acc << (6 - nbits)) + 63));
    out.push_back('\n');
    return out;
}

inline std::size_t digraph6_payload_size(int n) { return (static_cast<std::size_t>(n) * n + 5) / 6; }

inline Digraph decode_digraph6(std::string_view text) {
    if (text.empty()) throw ParseError("digraph6: empty input", 0);
    if (text.front() != '&') throw ParseError("digraph6: header must start with '&'", 0);
    if (text.size() < 2) throw ParseError("digraph6: missing vertex count", 1);
    const int nb = static_cast<unsigned char>(text[1]);
    if (nb < 63 || nb > 126) throw ParseError("digraph6: invalid vertex-count byte", 1);
    if (nb == 126) throw ParseError("digraph6: vertex counts above 62 are not supported", 1);
    const int n = nb - 63;
    const std::size_t payload = digraph6_payload_size(n);
    std::string_view body = text.substr(2);
    if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    if (body.size() != payload) {
        std::ostringstream msg;
        msg << "digraph6: expected " << payload << "-byte payload (" << payload + 2
            << " bytes before the newline) for n=" << n << ", found " << body.size();
        throw ParseError(msg.str(), 2 + std::min(body.size(), payload));
    }
    Digraph g(n);
    const std::size_t total = static_cast<std::size_t>(n) * n;
    for (std::size_t b = 0; b < payload; ++b) {
        const int c = static_cast<unsigned char>(body[b]);
        if (c < 63 || c > 126) throw ParseError("digraph6: byte outside 63..126", 2 + b);
        const int bits = c - 63;
        for (int s = 0; s < 6; ++s) {
            const std::size_t idx = b * 6 + s;
            const bool set = bits >> (5 - s) & 1;
            if (!set) continue;
            if (idx >= total) throw ParseError("digraph6: nonzero padding bits", 2 + b);
            const int i = static_cast<int>(idx / n), j = static_cast<int>(idx % n);
            if (i == j) throw ParseError("digraph6: loop at vertex " + std::to_string(i), 2 + b);
            g.add_arc(i, j);
        }
    }
    return g;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

/// SHA-256 over the vertex count byte followed by the canonical bytes.
inline std::string canonical_digest(const CanonicalForm& f) {
    std::string data(1, static_cast<char>(f.n));
    data.append(f.bytes.begin(), f.bytes.end());
    return sha256_hex(data);
}

}  // namespace dsrg60
