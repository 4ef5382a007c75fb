#include <catch2/catch_amalgamated.hpp>

#include "suq2/basis.hpp"

using namespace suq2;

TEST_CASE("dimension of the truncated space") {
    CHECK(TruncatedSpace(0).dim() == 1);
    CHECK(TruncatedSpace(1).dim() == 5);
    CHECK(TruncatedSpace(4).dim() == 55); // 1+4+9+16+25
}

TEST_CASE("enumeration order and inverse lookup") {
    const TruncatedSpace s(1);
    const auto labs = s.enumerate();
    REQUIRE(labs.size() == 5);
    CHECK(labs[0] == BasisLabel{0, 0, 0});
    CHECK(labs[1] == BasisLabel{1, -1, -1});
    CHECK(labs[2] == BasisLabel{1, -1, 1});
    CHECK(labs[3] == BasisLabel{1, 1, -1});
    CHECK(labs[4] == BasisLabel{1, 1, 1});
    CHECK(s.index_of(BasisLabel{1, 1, 1}) == 4);
}

TEST_CASE("enumerate is a bijection respecting label invariants") {
    const TruncatedSpace s(9);
    const auto labs = s.enumerate();
    REQUIRE(static_cast<std::int64_t>(labs.size()) == s.dim());
    for (std::int64_t k = 0; k < s.dim(); ++k) {
        const BasisLabel x = labs[static_cast<std::size_t>(k)];
        CHECK(x.is_valid());
        CHECK(s.index_of(x) == k);
        CHECK(s.label_at(k) == x);
    }
    // strictly increasing lexicographically
    for (std::size_t k = 1; k < labs.size(); ++k) CHECK(labs[k - 1] < labs[k]);
}

TEST_CASE("interior prefix") {
    const TruncatedSpace s4(4);
    CHECK(s4.interior(1).count == 30); // 1+4+9+16
    CHECK(s4.interior(0).count == 55);
    const TruncatedSpace s2(2);
    const auto in = s2.interior(2);
    CHECK(in.count == 1);
    CHECK(s2.label_at(0) == BasisLabel{0, 0, 0});

    const auto clipped = s2.interior(3);
    CHECK(clipped.count == 0);
    CHECK(clipped.clipped);

    // nesting
    const TruncatedSpace s(12);
    for (int b = 1; b <= 12; ++b) CHECK(s.interior(b).count <= s.interior(b - 1).count);
}

TEST_CASE("half integers stay exact") {
    const HalfInt n = HalfInt::from_twice(7); // 7/2
    CHECK(!n.is_integer());
    CHECK((n + nu_half).twice() == 8);
    CHECK((n - nu_half).is_integer());
    CHECK(n.str() == "7/2");
    CHECK(HalfInt::whole(3).str() == "3");
}
