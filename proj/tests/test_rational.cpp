#include "bltab/rational.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace bltab;

TEST_CASE("rational parsing accepts fractions, integers and decimals") {
    CHECK(rat_from_string("1/2") == Rat(1, 2));
    CHECK(rat_from_string("3") == Rat(3));
    CHECK(rat_from_string("0") == Rat(0));
    CHECK(rat_from_string("2/4") == Rat(1, 2));  // canonicalized
    CHECK(rat_from_string("0.25") == Rat(1, 4));
    CHECK(rat_from_string(".5") == Rat(1, 2));
    CHECK(rat_from_string("1.") == Rat(1));
    CHECK(rat_from_string("-3/4") == Rat(-3, 4));
    CHECK(rat_from_string("+7/8") == Rat(7, 8));
}

TEST_CASE("rational parsing rejects malformed input") {
    CHECK_THROWS_AS(rat_from_string(""), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string("a"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string("1/"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string("1 / 2"), std::invalid_argument);
}

TEST_CASE("rational rendering round-trips and stays canonical") {
    CHECK(rat_to_string(Rat(1, 2)) == "1/2");
    CHECK(rat_to_string(Rat(2, 4)) == "1/2");
    CHECK(rat_to_string(Rat(5)) == "5");
    CHECK(rat_to_string(Rat(0)) == "0");
    CHECK(rat_from_string(rat_to_string(Rat(355, 113))) == Rat(355, 113));
}

TEST_CASE("unit-interval check") {
    CHECK(rat_in_unit(Rat(0)));
    CHECK(rat_in_unit(Rat(1)));
    CHECK(rat_in_unit(Rat(1, 2)));
    CHECK_FALSE(rat_in_unit(Rat(-1, 2)));
    CHECK_FALSE(rat_in_unit(Rat(9, 8)));
}

TEST_CASE("rational hash agrees on equal values") {
    CHECK(rat_hash(Rat(1, 2)) == rat_hash(Rat(2, 4)));
    CHECK(rat_hash(Rat(1, 2)) != rat_hash(Rat(1, 3)));  // overwhelmingly likely
}
