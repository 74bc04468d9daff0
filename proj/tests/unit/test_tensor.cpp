#include "hroc/tensor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hroc;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int d, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix m(d);
    for (double& v : m.flat()) v = u(rng);
    return m;
}

Vector random_vector(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = u(rng);
    return v;
}

const Matrix kFhat{{0.2, 0.1}, {0.1, 0.3}};

}  // namespace

TEST(FrobeniusNorm, Examples) {
    EXPECT_EQ(frobenius_norm(Matrix(2)), 0.0);
    EXPECT_DOUBLE_EQ(frobenius_norm(Matrix::identity(2)), std::sqrt(2.0));
    EXPECT_NEAR(frobenius_norm(kFhat), std::sqrt(0.15), 1e-15);
}

TEST(Det, Examples) {
    EXPECT_DOUBLE_EQ(det(Matrix::identity(2)), 1.0);
    EXPECT_NEAR(det(kFhat), 0.05, 1e-15);
    EXPECT_DOUBLE_EQ(det(Matrix::diagonal({2.0, 3.0, 4.0})), 24.0);
}

TEST(SignedSingularValues, Examples) {
    auto [a, b] = signed_singular_values(Matrix::identity(2));
    EXPECT_NEAR(a, 1.0, 1e-15);
    EXPECT_NEAR(b, 1.0, 1e-15);
    std::tie(a, b) = signed_singular_values(Matrix::diagonal({2.0, -1.0}));
    EXPECT_NEAR(a, 2.0, 1e-15);
    EXPECT_NEAR(b, -1.0, 1e-15);
    std::tie(a, b) = signed_singular_values(Matrix(2));
    EXPECT_EQ(a, 0.0);
    EXPECT_EQ(b, 0.0);
}

TEST(SignedSingularValues, ProductIsDeterminant) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 1000; ++k) {
        const Matrix m = random_matrix(rng, 2, 3.0);
        const auto [a, b] = signed_singular_values(m);
        EXPECT_NEAR(a * b, det(m), 1e-12 * std::max(1.0, std::abs(det(m)))) << m;
        EXPECT_GE(a, std::abs(b));
    }
}

TEST(SingularValues, SumOfSquaresIsFrobenius) {
    std::mt19937_64 rng(12);
    for (int d : {2, 3}) {
        for (int k = 0; k < 500; ++k) {
            const Matrix m = random_matrix(rng, d, 2.0);
            const auto s = singular_values(m);
            double sum = 0.0;
            for (int i = 0; i < d; ++i) sum += s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
            const double n2 = frobenius_norm(m) * frobenius_norm(m);
            EXPECT_NEAR(sum, n2, 1e-12 * n2);
        }
    }
}

TEST(IsRankOne, Examples) {
    EXPECT_TRUE(is_rank_one(Matrix::outer(Vector{1.0, 0.0}, Vector{0.0, 1.0})));
    EXPECT_FALSE(is_rank_one(Matrix::identity(2)));
    EXPECT_FALSE(is_rank_one(Matrix(2)));
}

TEST(IsRankOne, RandomDyadsAndSums) {
    std::mt19937_64 rng(13);
    for (int d : {2, 3}) {
        for (int k = 0; k < 500; ++k) {
            const Vector a = random_vector(rng, d), b = random_vector(rng, d);
            const Vector c = random_vector(rng, d), e = random_vector(rng, d);
            EXPECT_TRUE(is_rank_one(Matrix::outer(a, b)));
            EXPECT_FALSE(is_rank_one(Matrix::outer(a, b) + Matrix::outer(c, e)));
        }
    }
}

TEST(IsParallel, ScalarMultiples) {
    const Matrix a{{1.0, -1.0}, {-1.0, 1.0}};
    EXPECT_TRUE(is_parallel(a, -2.5 * a));
    EXPECT_FALSE(is_parallel(a, Matrix::identity(2)));
    EXPECT_FALSE(is_parallel(a, Matrix(2)));
}

TEST(Matrix, InverseAndProduct) {
    std::mt19937_64 rng(14);
    for (int d : {2, 3}) {
        Matrix m = random_matrix(rng, d) + Matrix::identity(d) * 3.0;
        const Matrix e = m * m.inverse() - Matrix::identity(d);
        EXPECT_LT(e.max_abs(), 1e-13);
    }
}

TEST(Matrix, RotationIsOrthogonal) {
    const Matrix Q = Matrix::rotation2(0.3);
    EXPECT_LT((Q.transpose() * Q - Matrix::identity(2)).max_abs(), 1e-15);
    EXPECT_NEAR(det(Q), 1.0, 1e-15);
}

TEST(Tensor4, ContractIdentity) {
    const Matrix m{{1.0, 2.0}, {3.0, 4.0}};
    EXPECT_EQ(Tensor4::identity(2).contract(m), m);
    const Tensor4 o = Tensor4::outer(m, Matrix::identity(2));
    EXPECT_DOUBLE_EQ(o(1, 0, 1, 1), 3.0);
}
