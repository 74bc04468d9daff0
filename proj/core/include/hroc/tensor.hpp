#pragma once

// Small fixed-capacity dense algebra for 2x2 and 3x3 deformation gradients.
//
// Everything lives on the stack; the dimension is a runtime tag so a single
// energy interface can serve both plane (d = 2) and volumetric (d = 3) models.

#include <array>
#include <cmath>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <utility>

namespace hroc {

inline constexpr int kMaxDim = 3;

/// Default relative tolerance used by rank tests.
inline constexpr double kRankTolerance = 1e-10;

class Vector {
public:
    Vector() = default;
    explicit Vector(int dim);
    Vector(std::initializer_list<double> values);

    static Vector unit(int dim, int axis);

    int dim() const { return dim_; }
    double& operator[](int i) { return v_[i]; }
    double operator[](int i) const { return v_[i]; }

    double norm() const;
    double dot(const Vector& other) const;

    Vector& operator+=(const Vector& o);
    Vector& operator-=(const Vector& o);
    Vector& operator*=(double s);

    friend Vector operator+(Vector a, const Vector& b) { return a += b; }
    friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
    friend Vector operator*(Vector a, double s) { return a *= s; }
    friend Vector operator*(double s, Vector a) { return a *= s; }
    friend bool operator==(const Vector& a, const Vector& b);

private:
    std::array<double, kMaxDim> v_{};
    int dim_ = 0;
};

class Matrix {
public:
    Matrix() = default;
    /// Zero matrix of the given dimension (2 or 3).
    explicit Matrix(int dim);
    /// Row-major nested initializer, e.g. {{0.2, 0.1}, {0.1, 0.3}}.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix zero(int dim) { return Matrix(dim); }
    static Matrix identity(int dim);
    static Matrix diagonal(std::initializer_list<double> diag);
    static Matrix outer(const Vector& a, const Vector& b);
    /// Rotation by angle theta in the plane (d = 2).
    static Matrix rotation2(double theta);

    int dim() const { return dim_; }
    int size() const { return dim_ * dim_; }

    double& operator()(int i, int j) { return m_[i * dim_ + j]; }
    double operator()(int i, int j) const { return m_[i * dim_ + j]; }

    /// Row-major view of the d*d entries.
    std::span<double> flat() { return {m_.data(), static_cast<std::size_t>(size())}; }
    std::span<const double> flat() const { return {m_.data(), static_cast<std::size_t>(size())}; }

    Matrix transpose() const;
    Matrix inverse() const;
    double trace() const;
    /// Frobenius inner product A:B.
    double ddot(const Matrix& other) const;
    /// Largest absolute entry.
    double max_abs() const;
    bool all_finite() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);
    /// this += s * o without a temporary.
    Matrix& axpy(double s, const Matrix& o);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) { return a *= -1.0; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Vector operator*(const Matrix& a, const Vector& x);
    friend bool operator==(const Matrix& a, const Matrix& b);

private:
    std::array<double, kMaxDim * kMaxDim> m_{};
    int dim_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Matrix& m);

/// Fourth-order d x d x d x d array, e.g. the tangent moduli d^2W/dF dF.
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int dim);

    /// Symmetric identity on matrices: I_ijkl = delta_ik delta_jl.
    static Tensor4 identity(int dim);
    /// (A (x) B)_ijkl = A_ij B_kl.
    static Tensor4 outer(const Matrix& a, const Matrix& b);

    int dim() const { return dim_; }
    double& operator()(int i, int j, int k, int l) { return t_[index(i, j, k, l)]; }
    double operator()(int i, int j, int k, int l) const { return t_[index(i, j, k, l)]; }

    std::span<double> flat() { return {t_.data(), static_cast<std::size_t>(count())}; }
    std::span<const double> flat() const { return {t_.data(), static_cast<std::size_t>(count())}; }

    /// A : M, contracting the trailing index pair.
    Matrix contract(const Matrix& m) const;
    double max_abs() const;

    Tensor4& operator+=(const Tensor4& o);
    Tensor4& operator*=(double s);
    Tensor4& axpy(double s, const Tensor4& o);

    friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
    friend Tensor4 operator*(Tensor4 a, double s) { return a *= s; }
    friend Tensor4 operator*(double s, Tensor4 a) { return a *= s; }

private:
    int count() const { return dim_ * dim_ * dim_ * dim_; }
    int index(int i, int j, int k, int l) const { return ((i * dim_ + j) * dim_ + k) * dim_ + l; }

    std::array<double, 81> t_{};
    int dim_ = 0;
};

/// Rank-one matrix a (x) b with both factors retained.
class Dyad {
public:
    Dyad() = default;
    Dyad(Vector a, Vector b);

    const Vector& a() const { return a_; }
    const Vector& b() const { return b_; }
    const Matrix& matrix() const { return matrix_; }
    int dim() const { return a_.dim(); }

private:
    Vector a_;
    Vector b_;
    Matrix matrix_;
};

double frobenius_norm(const Matrix& m);
double det(const Matrix& m);

/// Ordinary singular values in descending order; entries beyond dim() are zero.
std::array<double, kMaxDim> singular_values(const Matrix& m);

/// Signed singular values (nu1, nu2) of a 2x2 matrix: nu1 >= |nu2| and
/// nu1 * nu2 == det(m).
std::pair<double, double> signed_singular_values(const Matrix& m);

/// True iff the second singular value is at most tol times the first and the
/// first exceeds tol.
bool is_rank_one(const Matrix& m, double tol = kRankTolerance);

/// True iff a == s * b for some nonzero s (both nonzero).
bool is_parallel(const Matrix& a, const Matrix& b, double tol = kRankTolerance);

}  // namespace hroc
