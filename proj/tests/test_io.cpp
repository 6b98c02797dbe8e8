#include <gtest/gtest.h>

#include <random>

#include "dsrg60/io.hpp"

using namespace dsrg60;

namespace {

Digraph random_digraph(std::mt19937& rng, int n, double density) {
    std::bernoulli_distribution coin(density);
    Digraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && coin(rng)) g.add_arc(i, j);
    return g;
}

}  // namespace

TEST(Digraph6, RoundTrip) {
    std::mt19937 rng(77);
    for (int n = 0; n <= 62; ++n)
        for (int trial = 0; trial < 4; ++trial) {
            auto g = random_digraph(rng, n, 0.1 + 0.25 * trial);
            auto text = encode_digraph6(g);
            ASSERT_EQ(text.size(), 3 + digraph6_payload_size(n));
            EXPECT_EQ(decode_digraph6(text), g) << "n=" << n;
        }
}

TEST(Digraph6, FinalPartialGroupCarriesArcs) {
    // n = 4: 16 bits, the last byte holds row 3 in its top four bits.
    Digraph g(4);
    g.add_arc(3, 0);
    g.add_arc(3, 2);
    auto text = encode_digraph6(g);
    ASSERT_EQ(text, std::string("&C") + char(63) + char(63) + char(63 + 0b101000) + "\n");
    EXPECT_EQ(decode_digraph6(text), g);

    // n = 8: bits 60..63 are arcs 7 -> 4, 5, 6.
    Digraph h(8);
    h.add_arc(7, 4);
    h.add_arc(7, 6);
    auto t8 = encode_digraph6(h);
    EXPECT_EQ(t8[2 + 10], char(63 + 0b101000));
    EXPECT_EQ(decode_digraph6(t8), h);
}

TEST(Digraph6, KnownSmallEncoding) {
    Digraph g(3);
    g.add_arc(0, 1);
    g.add_arc(1, 2);
    g.add_arc(2, 0);
    // bits 010 001 100 -> 010001 100000 -> 17, 32
    EXPECT_EQ(encode_digraph6(g), std::string("&B") + char(63 + 17) + char(63 + 32) + "\n");
}

TEST(Digraph6, SixtyVertexLayout) {
    Digraph g(60);
    g.add_arc(0, 59);
    auto text = encode_digraph6(g);
    EXPECT_EQ(digraph6_payload_size(60), 600u);
    EXPECT_EQ(text.size(), 603u);
    EXPECT_EQ(text[1], char(60 + 63));
    EXPECT_EQ(text.back(), '\n');
}

TEST(Digraph6, TruncatedInputNamesExpectedLength) {
    Digraph g(60);
    auto text = encode_digraph6(g);
    auto cut = text.substr(0, 400);
    try {
        decode_digraph6(cut);
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("602"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("600-byte payload"), std::string::npos);
    }
}

TEST(Digraph6, MalformedInputs) {
    EXPECT_THROW(decode_digraph6(""), ParseError);
    EXPECT_THROW(decode_digraph6("B?\n"), ParseError);
    EXPECT_THROW(decode_digraph6("&"), ParseError);
    EXPECT_THROW(decode_digraph6(std::string("&") + char(20)), ParseError);
    EXPECT_THROW(decode_digraph6("&~\n"), ParseError);
    // n = 2: bits 0110 plus padding; "&A" then a loop bit set at position 0.
    EXPECT_THROW(decode_digraph6(std::string("&A") + char(63 + 32) + "\n"), ParseError);
    // Nonzero padding: n = 2 uses 4 of 6 bits.
    EXPECT_THROW(decode_digraph6(std::string("&A") + char(63 + 1) + "\n"), ParseError);
    EXPECT_THROW(decode_digraph6(std::string("&A") + char(30) + "\n"), ParseError);
    try {
        decode_digraph6(std::string("&A") + char(63 + 32));
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 2u);
    }
}

TEST(Files, WriteReadAndDigest) {
    auto dir = std::filesystem::temp_directory_path() / "dsrg60_io_test";
    std::filesystem::remove_all(dir);
    write_file(dir / "a" / "b.txt", "hello");
    EXPECT_EQ(read_file(dir / "a" / "b.txt"), "hello");
    EXPECT_THROW(read_file(dir / "missing"), std::runtime_error);
    std::filesystem::remove_all(dir);
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
