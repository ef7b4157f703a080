#include <gtest/gtest.h>

#include "vshell/vshell.hpp"

using vshell::LatticeVector;

TEST(LatticeVector, ParsesBothNotations) {
    EXPECT_EQ(LatticeVector::parse("2,3,3,4"), (LatticeVector{2, 3, 3, 4}));
    EXPECT_EQ(LatticeVector::parse("1102"), (LatticeVector{1, 1, 0, 2}));
    EXPECT_EQ(LatticeVector::parse("10, 0, 2"), (LatticeVector{10, 0, 2}));
}

TEST(LatticeVector, RejectsMalformedText) {
    EXPECT_THROW(LatticeVector::parse(""), std::invalid_argument);
    EXPECT_THROW(LatticeVector::parse("1,,2"), std::invalid_argument);
    EXPECT_THROW(LatticeVector::parse("1,-2"), std::invalid_argument);
    EXPECT_THROW(LatticeVector::parse("12a"), std::invalid_argument);
    EXPECT_THROW(LatticeVector::parse("99999999999,1"), std::invalid_argument);
    EXPECT_THROW(LatticeVector::parse("11111111111111111"), std::invalid_argument);
}

TEST(LatticeVector, DisplayUsesDigitsWhenPossible) {
    EXPECT_EQ((LatticeVector{1, 1, 0, 2}).to_string(), "1102");
    EXPECT_EQ((LatticeVector{10, 0, 2}).to_string(), "10,0,2");
}

TEST(LatticeVector, Arithmetic) {
    LatticeVector a{2, 3, 3, 4}, b{0, 0, 1, 3};
    EXPECT_EQ(a - b, (LatticeVector{2, 3, 2, 1}));
    EXPECT_EQ(a - b + b, a);
    EXPECT_EQ(a.sum(), 12u);
    EXPECT_THROW(b - a, std::domain_error);
    EXPECT_THROW(a + (LatticeVector{1, 1}), std::invalid_argument);
    EXPECT_TRUE(b.dominated_by(a));
    EXPECT_FALSE(a.dominated_by(b));
}

TEST(LatticeVector, SuffixAndLeadingIndex) {
    LatticeVector a{0, 2, 0, 0};
    EXPECT_EQ(a.leading_index(), 2u);
    EXPECT_TRUE(a.suffix_is_zero(3));
    EXPECT_FALSE(a.suffix_is_zero(2));
    EXPECT_EQ(LatticeVector::zero(3).leading_index(), 0u);
}

TEST(LatticeVector, LexOrder) {
    EXPECT_LT((LatticeVector{0, 0, 0, 4}), (LatticeVector{0, 0, 1, 3}));
    EXPECT_LT((LatticeVector{3, 1, 0, 0}), (LatticeVector{4, 0, 0, 0}));
}

TEST(LatticeVector, DimensionLimits) {
    EXPECT_THROW(LatticeVector(0), std::invalid_argument);
    EXPECT_THROW(LatticeVector(17), std::invalid_argument);
    EXPECT_NO_THROW(LatticeVector(16));
}
