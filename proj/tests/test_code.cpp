#include <random>

#include "doctest.h"
#include "mdsconv/code.hpp"
#include "mdsconv/tables.hpp"

using namespace mdsconv;

namespace {

// n=3 code over GF(8) with parity polynomials (1 + x + a^3 x^2, 1 + a x + x^2, 1)
Code rate23_example()
{
    FieldPtr f = Field::make(3);
    Fe a = f->alpha();
    return Code(f, 3,
                {{1, 1},
                 {1, a},
                 {f->exp(3), 1}});
}

Code random_code(FieldPtr f, int n, int D, std::mt19937& rng)
{
    std::uniform_int_distribution<std::uint32_t> nz(1, f->order());
    std::vector<std::vector<Fe>> rows(D + 1, std::vector<Fe>(n - 1));
    for (auto& row : rows)
        for (auto& v : row) v = static_cast<Fe>(nz(rng));
    return Code(f, n, std::move(rows));
}

}  // namespace

TEST_CASE("log rows decode with the table conventions")
{
    FieldPtr f8 = Field::make(3);
    Code c = Code::from_log_rows(f8, 2, {{0}, {1}, {4}, {3}});
    CHECK(c.deg() == 4);
    CHECK(c.k() == 1);
    CHECK(c.r(0, 1) == 1);
    CHECK(c.r(1, 1) == 1);
    CHECK(c.r(2, 1) == f8->alpha());
    CHECK(c.r(3, 1) == f8->exp(4));
    CHECK(c.r(4, 1) == f8->exp(3));
    CHECK(c.canonical());

    // rows are j-descending: first entry is r(i,k)
    FieldPtr f16 = Field::make(4);
    Code e = Code::from_log_rows(f16, 3, {{0, 1}, {4, 0}, {1, 7}});
    Fe a = f16->alpha();
    CHECK(e.r(1, 2) == 1);
    CHECK(e.r(1, 1) == a);
    CHECK(e.r(2, 2) == f16->exp(4));
    CHECK(e.r(2, 1) == 1);
    CHECK(e.r(3, 2) == a);
    CHECK(e.r(3, 1) == f16->exp(7));

    CHECK_THROWS_AS(Code::from_log_rows(f8, 2, {{7}}), LogOutOfRange);
    CHECK_THROWS_AS(Code::from_log_rows(f8, 3, {{0}}), RowLengthMismatch);
}

TEST_CASE("truncated parity check matrix matches the displayed form")
{
    Code c = rate23_example();
    const Field& f = c.field();
    Fe a = f.alpha(), a3 = f.exp(3);
    Matrix h = parity_truncated(c, 2);
    REQUIRE(h.rows == 3);
    REQUIRE(h.cols == 9);
    std::vector<Fe> expect = {
        1,  1, 1, 0, 0, 0, 0, 0, 0,
        1,  a, 0, 1, 1, 1, 0, 0, 0,
        a3, 1, 0, 1, a, 0, 1, 1, 1,
    };
    CHECK(h.a == expect);

    // L = 0 for a canonical code: a single all-ones row
    Matrix h0 = parity_truncated(c, 0);
    CHECK(h0.a == std::vector<Fe>{1, 1, 1});

    // rate-1/2 code with r(1,1) = 1 at L = 1
    Code half = Code::from_log_rows(Field::make(3), 2, {{0}, {1}, {4}, {3}});
    Matrix h1 = parity_truncated(half, 1);
    CHECK(h1.a == std::vector<Fe>{1, 1, 0, 0, 1, 0, 1, 1});
}

TEST_CASE("truncated generator matches the displayed form")
{
    Code c = rate23_example();
    const Field& f = c.field();
    Fe a = f.alpha(), a3 = f.exp(3);
    Matrix g = generator_truncated(c, 2);
    REQUIRE(g.rows == 6);
    REQUIRE(g.cols == 9);
    std::vector<Fe> expect = {
        1, 0, 1, 0, 0, 1, 0, 0, a3,
        0, 1, 1, 0, 0, a, 0, 0, 1,
        0, 0, 0, 1, 0, 1, 0, 0, 1,
        0, 0, 0, 0, 1, 1, 0, 0, a,
        0, 0, 0, 0, 0, 0, 1, 0, 1,
        0, 0, 0, 0, 0, 0, 0, 1, 1,
    };
    CHECK(g.a == expect);

    Matrix g0 = generator_truncated(c, 0);
    CHECK(g0.a == std::vector<Fe>{1, 0, 1, 0, 1, 1});
}

TEST_CASE("generator and parity check are orthogonal for random codes")
{
    std::mt19937 rng(11);
    for (int it = 0; it < 40; ++it) {
        FieldPtr f = Field::make(2 + it % 4);
        int n = 2 + it % 3;
        int D = it % 4;
        Code c = random_code(f, n, D, rng);
        for (int L = 0; L <= c.deg() + 2; ++L) {
            Matrix prod = matmul(generator_truncated(c, L),
                                 transpose(parity_truncated(c, L)), *f);
            for (Fe v : prod.a) CHECK(v == 0);
        }
    }
}

TEST_CASE("parity truncations nest")
{
    std::mt19937 rng(5);
    Code c = random_code(Field::make(3), 3, 3, rng);
    Matrix big = parity_truncated(c, 5);
    for (int s = 0; s <= 5; ++s) {
        Matrix small = parity_truncated(c, s);
        for (int r = 0; r <= s; ++r)
            for (int col = 0; col < small.cols; ++col)
                CHECK(small.at(r, col) == big.at(r, col));
    }
}

TEST_CASE("the reduced matrix is the parity check minus the identity columns")
{
    std::mt19937 rng(6);
    Code c = random_code(Field::make(4), 3, 2, rng);
    int k = c.k(), n = c.n();
    Matrix h = parity_truncated(c, 2);
    Matrix hp = reduced_matrix(c, 2);
    CHECK(hp.cols == k * 3);
    for (int r = 0; r < hp.rows; ++r)
        for (int col = 0; col < hp.cols; ++col) {
            int block = col / k, pos = col % k;
            CHECK(hp.at(r, col) == h.at(r, block * n + pos));
        }

    // rate-1/2 code from the small table, D = 1
    Code half = Code::from_log_rows(Field::make(3), 2, {{0}, {1}, {4}, {3}});
    Matrix r1 = reduced_matrix(half, 1);
    CHECK(r1.a == std::vector<Fe>{1, 0, 1, 1});
}

TEST_CASE("code file round trip")
{
    Code c = Code::from_log_rows(Field::make(3), 2, {{0}, {1}, {4}, {3}});
    std::string text = code_to_string(c);
    CHECK(text == "gf 3 0b1011\nn 2\nrows 4\n0\n1\n4\n3\n");
    Code back = code_from_string(text);
    CHECK(back == c);
    CHECK(code_to_string(back) == text);  // byte-identical reserialization
}

TEST_CASE("round trip over every bundled table code")
{
    for (const TableEntry& e : bundled_tables()) {
        Code c = e.to_code();
        std::string text = code_to_string(c);
        Code back = code_from_string(text);
        CHECK(back == c);
        CHECK(code_to_string(back) == text);
    }
}

TEST_CASE("parse errors carry positions and reject malformed files")
{
    CHECK_THROWS_AS(code_from_string(""), ParseError);
    CHECK_THROWS_AS(code_from_string("gf 3 0b1011\ngf 3 0b1011\nrows 0\n"), ParseError);
    CHECK_THROWS_AS(code_from_string("gf 3 1011\nn 2\nrows 0\n"), ParseError);
    CHECK_THROWS_AS(code_from_string("gf 3 0b1111\nn 2\nrows 0\n"), FieldMismatch);
    CHECK_THROWS_AS(code_from_string("gf 3 0b1011\nn 2\nrows 1\n7\n"), ParseError);
    CHECK_THROWS_AS(code_from_string("gf 3 0b1011\nn 2\nrows 1\n1 2\n"), ParseError);
    CHECK_THROWS_AS(code_from_string("gf 3 0b1011\nn 2\nrows 2\n1\n"), ParseError);
    try {
        code_from_string("gf 3 0b1011\nn 2\nrows 1\n7\n");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
    }
}

TEST_CASE("bundled tables parse and carry their annotations")
{
    const auto& tables = bundled_tables();
    CHECK(tables.size() == 36);
    CHECK(tables.front().m == 3);
    CHECK(tables.front().delta == 6);
    CHECK(tables.front().exact);
    CHECK(tables.front().rareness == "0.035");
    int exact_count = 0;
    for (const auto& e : tables) {
        CHECK(static_cast<int>(e.log_rows.size()) == e.delta - 2);
        if (e.exact) ++exact_count;
        Code c = e.to_code();
        CHECK(c.deg() == e.delta - 2);
        CHECK(c.canonical());
    }
    CHECK(exact_count == 8);  // complete searches: all of m <= 5 plus two at m = 6
}
