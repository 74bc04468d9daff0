#include "hroc/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <ostream>

namespace hroc {

namespace {

void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("hroc: dimension must be 1, 2 or 3");
}

void check_same(int a, int b) {
    if (a != b) throw std::invalid_argument("hroc: dimension mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// Vector

Vector::Vector(int dim) : dim_(dim) { check_dim(dim); }

Vector::Vector(std::initializer_list<double> values) : dim_(static_cast<int>(values.size())) {
    check_dim(dim_);
    std::copy(values.begin(), values.end(), v_.begin());
}

Vector Vector::unit(int dim, int axis) {
    Vector e(dim);
    e[axis] = 1.0;
    return e;
}

double Vector::norm() const { return std::sqrt(dot(*this)); }

double Vector::dot(const Vector& other) const {
    check_same(dim_, other.dim_);
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += v_[i] * other.v_[i];
    return s;
}

Vector& Vector::operator+=(const Vector& o) {
    check_same(dim_, o.dim_);
    for (int i = 0; i < dim_; ++i) v_[i] += o.v_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& o) {
    check_same(dim_, o.dim_);
    for (int i = 0; i < dim_; ++i) v_[i] -= o.v_[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (int i = 0; i < dim_; ++i) v_[i] *= s;
    return *this;
}

bool operator==(const Vector& a, const Vector& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
        if (a.v_[i] != b.v_[i]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(int dim) : dim_(dim) { check_dim(dim); }

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : dim_(static_cast<int>(rows.size())) {
    check_dim(dim_);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != dim_)
            throw std::invalid_argument("hroc: matrix rows must be square");
        int j = 0;
        for (double v : row) (*this)(i, j++) = v;
        ++i;
    }
}

Matrix Matrix::identity(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> diag) {
    Matrix m(static_cast<int>(diag.size()));
    int i = 0;
    for (double v : diag) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

Matrix Matrix::outer(const Vector& a, const Vector& b) {
    check_same(a.dim(), b.dim());
    Matrix m(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) m(i, j) = a[i] * b[j] + 0.0;  // no negative zeros
    return m;
}

Matrix Matrix::rotation2(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return Matrix{{c, -s}, {s, c}};
}

Matrix Matrix::transpose() const {
    Matrix t(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::inverse() const {
    const double d = det(*this);
    if (d == 0.0) throw std::domain_error("hroc: singular matrix");
    Matrix inv(dim_);
    const Matrix& a = *this;
    if (dim_ == 1) {
        inv(0, 0) = 1.0 / d;
    } else if (dim_ == 2) {
        inv(0, 0) = a(1, 1) / d;
        inv(0, 1) = -a(0, 1) / d;
        inv(1, 0) = -a(1, 0) / d;
        inv(1, 1) = a(0, 0) / d;
    } else {
        // adjugate / det
        inv(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
        inv(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
        inv(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
        inv(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
        inv(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
        inv(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
        inv(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
        inv(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
        inv(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
    }
    return inv;
}

double Matrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double Matrix::ddot(const Matrix& other) const {
    check_same(dim_, other.dim_);
    double s = 0.0;
    for (int k = 0; k < size(); ++k) s += m_[k] * other.m_[k];
    return s;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (int k = 0; k < size(); ++k) m = std::max(m, std::abs(m_[k]));
    return m;
}

bool Matrix::all_finite() const {
    for (int k = 0; k < size(); ++k)
        if (!std::isfinite(m_[k])) return false;
    return true;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    check_same(dim_, o.dim_);
    for (int k = 0; k < size(); ++k) m_[k] += o.m_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    check_same(dim_, o.dim_);
    for (int k = 0; k < size(); ++k) m_[k] -= o.m_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (int k = 0; k < size(); ++k) m_[k] *= s;
    return *this;
}

Matrix& Matrix::axpy(double s, const Matrix& o) {
    check_same(dim_, o.dim_);
    for (int k = 0; k < size(); ++k) m_[k] += s * o.m_[k];
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    check_same(a.dim_, b.dim_);
    Matrix c(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
        for (int k = 0; k < a.dim_; ++k)
            for (int j = 0; j < a.dim_; ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
    check_same(a.dim_, x.dim());
    Vector y(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
        for (int j = 0; j < a.dim_; ++j) y[i] += a(i, j) * x[j];
    return y;
}

bool operator==(const Matrix& a, const Matrix& b) {
    if (a.dim_ != b.dim_) return false;
    for (int k = 0; k < a.size(); ++k)
        if (a.m_[k] != b.m_[k]) return false;
    return true;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (int i = 0; i < m.dim(); ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < m.dim(); ++j) os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    return os << ']';
}

// ---------------------------------------------------------------------------
// Tensor4

Tensor4::Tensor4(int dim) : dim_(dim) { check_dim(dim); }

Tensor4 Tensor4::identity(int dim) {
    Tensor4 t(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) t(i, j, i, j) = 1.0;
    return t;
}

Tensor4 Tensor4::outer(const Matrix& a, const Matrix& b) {
    check_same(a.dim(), b.dim());
    const int d = a.dim();
    Tensor4 t(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) t(i, j, k, l) = a(i, j) * b(k, l);
    return t;
}

Matrix Tensor4::contract(const Matrix& m) const {
    check_same(dim_, m.dim());
    Matrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            double s = 0.0;
            for (int k = 0; k < dim_; ++k)
                for (int l = 0; l < dim_; ++l) s += (*this)(i, j, k, l) * m(k, l);
            r(i, j) = s;
        }
    return r;
}

double Tensor4::max_abs() const {
    double m = 0.0;
    for (int k = 0; k < count(); ++k) m = std::max(m, std::abs(t_[k]));
    return m;
}

Tensor4& Tensor4::operator+=(const Tensor4& o) {
    check_same(dim_, o.dim_);
    for (int k = 0; k < count(); ++k) t_[k] += o.t_[k];
    return *this;
}

Tensor4& Tensor4::operator*=(double s) {
    for (int k = 0; k < count(); ++k) t_[k] *= s;
    return *this;
}

Tensor4& Tensor4::axpy(double s, const Tensor4& o) {
    check_same(dim_, o.dim_);
    for (int k = 0; k < count(); ++k) t_[k] += s * o.t_[k];
    return *this;
}

// ---------------------------------------------------------------------------
// Dyad

Dyad::Dyad(Vector a, Vector b) : a_(a), b_(b), matrix_(Matrix::outer(a, b)) {}

// ---------------------------------------------------------------------------
// free functions

double frobenius_norm(const Matrix& m) { return std::sqrt(m.ddot(m)); }

double det(const Matrix& m) {
    switch (m.dim()) {
        case 1:
            return m(0, 0);
        case 2:
            return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        case 3:
            return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        default:
            throw std::invalid_argument("hroc: det of empty matrix");
    }
}

std::pair<double, double> signed_singular_values(const Matrix& m) {
    if (m.dim() != 2) throw std::invalid_argument("hroc: signed singular values need d = 2");
    // Closed form via the conformal/anticonformal split of a 2x2 matrix:
    // sigma_{1,2} = q +- r with q^2 - r^2 = det.
    const double e = 0.5 * (m(0, 0) + m(1, 1));
    const double f = 0.5 * (m(0, 0) - m(1, 1));
    const double g = 0.5 * (m(1, 0) + m(0, 1));
    const double h = 0.5 * (m(1, 0) - m(0, 1));
    const double q = std::hypot(e, h);
    const double r = std::hypot(f, g);
    return {q + r, q - r};
}

std::array<double, kMaxDim> singular_values(const Matrix& m) {
    std::array<double, kMaxDim> out{};
    const int d = m.dim();
    if (d == 2) {
        auto [s1, s2] = signed_singular_values(m);
        out[0] = s1;
        out[1] = std::abs(s2);
        return out;
    }
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = m(i, j);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(a);
    const auto& s = svd.singularValues();
    for (int i = 0; i < d; ++i) out[i] = s[i];
    return out;
}

bool is_rank_one(const Matrix& m, double tol) {
    const auto s = singular_values(m);
    return s[0] > tol && s[1] <= tol * s[0];
}

bool is_parallel(const Matrix& a, const Matrix& b, double tol) {
    const double na = frobenius_norm(a), nb = frobenius_norm(b);
    if (na == 0.0 || nb == 0.0) return false;
    const double c = std::abs(a.ddot(b)) / (na * nb);
    return c >= 1.0 - tol;
}

}  // namespace hroc
