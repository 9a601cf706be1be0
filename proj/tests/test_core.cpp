#include <catch2/catch_amalgamated.hpp>

#include "fsbench/core/csv.hpp"
#include "fsbench/core/hash.hpp"
#include "fsbench/core/matrix.hpp"
#include "fsbench/core/rng.hpp"

#include "support.hpp"

using namespace fsbench;

TEST_CASE("rng streams are deterministic and independent") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

    auto s1 = Rng::derive(7, "tag", 0);
    auto s2 = Rng::derive(7, "tag", 1);
    REQUIRE(s1.next_u64() != s2.next_u64());

    Rng c(99);
    for (int i = 0; i < 1000; ++i) {
        const double v = c.next_double();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        REQUIRE(c.below(17) < 17);
    }
}

TEST_CASE("rng shuffle is a permutation") {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    Rng rng(5);
    rng.shuffle(v);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) REQUIRE(sorted[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("csv parses quotes, escapes and CRLF") {
    const auto t = parse_csv("a,b,c\r\n1,\"x,y\",\"he said \"\"hi\"\"\"\n2,,3\n");
    REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.rows[0][1] == "x,y");
    REQUIRE(t.rows[0][2] == "he said \"hi\"");
    REQUIRE(t.rows[1][1].empty());
}

TEST_CASE("csv errors carry row location") {
    REQUIRE_THROWS_AS(parse_csv("a,b\n1\n"), DataError);
    try {
        parse_csv("a,b\n1,2\n3\n");
        FAIL("expected throw");
    } catch (const DataError& e) {
        REQUIRE(std::string(e.what()).find("row 3") != std::string::npos);
    }
    REQUIRE_THROWS_AS(parse_csv("a,b\n\"unterminated,2\n"), DataError);
}

TEST_CASE("csv round trip picks quoting automatically") {
    CsvTable t;
    t.header = {"name", "value"};
    t.rows = {{"plain", "1"}, {"with,comma", "2"}, {"with\"quote", "3"}};
    const auto text = write_csv(t);
    const auto back = parse_csv(text);
    REQUIRE(back.header == t.header);
    REQUIRE(back.rows == t.rows);
}

TEST_CASE("matrix row and column selection") {
    Matrix m(3, 2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) m(i, j) = static_cast<double>(10 * i + j);
    const auto sub = m.select_rows({2, 0});
    REQUIRE(sub(0, 0) == 20.0);
    REQUIRE(sub(1, 1) == 1.0);
    const auto col = m.select_cols({1});
    REQUIRE(col.cols() == 1);
    REQUIRE(col(1, 0) == 11.0);
}

TEST_CASE("fnv1a hex key is stable") {
    REQUIRE(hex64(fnv1a64("abc")) == hex64(fnv1a64("abc")));
    REQUIRE(hex64(fnv1a64("abc")) != hex64(fnv1a64("abd")));
    REQUIRE(hex64(fnv1a64("")).size() == 16);
}
