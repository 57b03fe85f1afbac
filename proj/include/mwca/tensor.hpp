#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwca {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

template <typename Scalar>
using Matrix = Eigen::MatrixX<Scalar>;
template <typename Scalar>
using Vector = Eigen::VectorX<Scalar>;

inline Index shape_size(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), Index{1},
                           std::multiplies<Index>());
}

/// Dense tensor of order d >= 1 over a contiguous flat array.
///
/// Modes and element indices are 1-based, matching the usual multiway
/// notation: valid multi-indices are 1 <= i_mu <= dim(mu). The flat layout
/// stores index i_1 fastest, so flat offset = sum_mu (i_mu - 1) * stride_mu
/// with stride_1 = 1 and stride_{mu+1} = stride_mu * n_mu.
template <typename Scalar>
class Tensor {
  public:
    Tensor() = default;

    explicit Tensor(Shape shape) : shape_(std::move(shape)) {
        check_shape(shape_);
        data_ = Vector<Scalar>::Zero(shape_size(shape_));
    }

    Tensor(Shape shape, Vector<Scalar> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        check_shape(shape_);
        if (data_.size() != shape_size(shape_))
            throw std::invalid_argument(
                "tensor data length " + std::to_string(data_.size()) +
                " does not match shape product " +
                std::to_string(shape_size(shape_)));
    }

    Index order() const { return static_cast<Index>(shape_.size()); }
    const Shape& shape() const { return shape_; }
    Index size() const { return data_.size(); }

    /// Dimension of the given mode, 1 <= mode <= order().
    Index dim(Index mode) const {
        check_mode(mode);
        return shape_[static_cast<std::size_t>(mode - 1)];
    }

    const Vector<Scalar>& flat() const { return data_; }
    Vector<Scalar>& flat() { return data_; }

    Scalar norm() const { return data_.norm(); }

    Scalar at(std::span<const Index> idx) const { return data_[offset(idx)]; }
    Scalar& at(std::span<const Index> idx) { return data_[offset(idx)]; }

    Scalar at(std::initializer_list<Index> idx) const {
        return at(std::span<const Index>(idx.begin(), idx.size()));
    }
    Scalar& at(std::initializer_list<Index> idx) {
        return at(std::span<const Index>(idx.begin(), idx.size()));
    }

    template <typename... Ix>
    Scalar operator()(Ix... idx) const {
        const std::array<Index, sizeof...(Ix)> a{static_cast<Index>(idx)...};
        return at(std::span<const Index>(a.data(), a.size()));
    }
    template <typename... Ix>
    Scalar& operator()(Ix... idx) {
        const std::array<Index, sizeof...(Ix)> a{static_cast<Index>(idx)...};
        return at(std::span<const Index>(a.data(), a.size()));
    }

    /// Flat offset of a 1-based multi-index.
    Index offset(std::span<const Index> idx) const {
        if (order() == 0)
            throw std::invalid_argument("tensor is empty");
        if (static_cast<Index>(idx.size()) != order())
            throw std::invalid_argument("multi-index has " +
                                        std::to_string(idx.size()) +
                                        " entries, tensor order is " +
                                        std::to_string(order()));
        Index off = 0;
        Index stride = 1;
        for (std::size_t a = 0; a < shape_.size(); ++a) {
            if (idx[a] < 1 || idx[a] > shape_[a])
                throw std::out_of_range("index " + std::to_string(idx[a]) +
                                        " out of range [1," +
                                        std::to_string(shape_[a]) +
                                        "] at mode " + std::to_string(a + 1));
            off += (idx[a] - 1) * stride;
            stride *= shape_[a];
        }
        return off;
    }

  private:
    static void check_shape(const Shape& shape) {
        if (shape.empty())
            throw std::invalid_argument("tensor order must be >= 1");
        for (Index n : shape)
            if (n < 1)
                throw std::invalid_argument("tensor dimensions must be >= 1");
    }

    void check_mode(Index mode) const {
        if (mode < 1 || mode > order())
            throw std::invalid_argument("mode " + std::to_string(mode) +
                                        " out of range [1," +
                                        std::to_string(order()) + "]");
    }

    Shape shape_;
    Vector<Scalar> data_;
};

namespace detail {

// Element count before / after a mode in the flat layout. With first index
// fastest, flat = l + left * (m + n_mode * r) for l in [0,left), m in
// [0,n_mode), r in [0,right).
inline void mode_split(const Shape& shape, Index mode, Index& left,
                       Index& right) {
    left = 1;
    right = 1;
    for (Index a = 0; a < static_cast<Index>(shape.size()); ++a) {
        if (a < mode - 1) left *= shape[static_cast<std::size_t>(a)];
        if (a > mode - 1) right *= shape[static_cast<std::size_t>(a)];
    }
}

inline void check_unfold_mode(Index order, Index mode) {
    if (mode < 1 || mode > order)
        throw std::invalid_argument("mode " + std::to_string(mode) +
                                    " out of range [1," +
                                    std::to_string(order) + "]");
}

// Visit every 1-based multi-index of `dims` with the first index fastest,
// matching the flat layout and the unfolding column order.
template <typename Fn>
void for_each_index(const Shape& dims, Fn&& fn) {
    std::vector<Index> idx(dims.size(), 1);
    for (;;) {
        fn(std::span<const Index>(idx.data(), idx.size()));
        std::size_t a = 0;
        while (a < dims.size() && ++idx[a] > dims[a]) idx[a++] = 1;
        if (a == dims.size()) break;
    }
}

}  // namespace detail

/// Mode-mu matricization. Element (i_1,...,i_d) lands at row i_mu and
/// column 1 + sum_{a != mu} (i_a - 1) m_a with m_a the product of the
/// dimensions of the modes before a, mode mu excluded; i.e. the remaining
/// indices are combined with the lowest mode varying fastest.
template <typename Scalar>
Matrix<Scalar> unfold(const Tensor<Scalar>& t, Index mode) {
    detail::check_unfold_mode(t.order(), mode);
    Index left, right;
    detail::mode_split(t.shape(), mode, left, right);
    const Index n = t.dim(mode);

    Matrix<Scalar> m(n, left * right);
    const auto& flat = t.flat();
    for (Index r = 0; r < right; ++r)
        for (Index k = 0; k < n; ++k)
            for (Index l = 0; l < left; ++l)
                m(k, l + left * r) = flat[l + left * (k + n * r)];
    return m;
}

/// Inverse of unfold: fold(unfold(t, mu), mu, t.shape()) == t exactly.
template <typename Scalar>
Tensor<Scalar> fold(const Matrix<Scalar>& m, Index mode, const Shape& shape) {
    detail::check_unfold_mode(static_cast<Index>(shape.size()), mode);
    Index left, right;
    detail::mode_split(shape, mode, left, right);
    const Index n = shape[static_cast<std::size_t>(mode - 1)];
    if (m.rows() != n || m.cols() != left * right)
        throw std::invalid_argument(
            "matrix of " + std::to_string(m.rows()) + "x" +
            std::to_string(m.cols()) + " cannot fold to mode " +
            std::to_string(mode) + " of the requested shape");

    Tensor<Scalar> t(shape);
    auto& flat = t.flat();
    for (Index r = 0; r < right; ++r)
        for (Index k = 0; k < n; ++k)
            for (Index l = 0; l < left; ++l)
                flat[l + left * (k + n * r)] = m(k, l + left * r);
    return t;
}

/// Apply one matrix along one mode: unfold, multiply from the left, fold.
template <typename Scalar>
Tensor<Scalar> ttm(const Tensor<Scalar>& t, Index mode,
                   const Matrix<Scalar>& m) {
    detail::check_unfold_mode(t.order(), mode);
    if (m.cols() != t.dim(mode))
        throw std::invalid_argument(
            "ttm: matrix at mode " + std::to_string(mode) + " has " +
            std::to_string(m.cols()) + " columns, tensor dimension is " +
            std::to_string(t.dim(mode)));
    Shape out_shape = t.shape();
    out_shape[static_cast<std::size_t>(mode - 1)] = m.rows();
    Matrix<Scalar> product = m * unfold(t, mode);
    return fold(product, mode, out_shape);
}

/// Tensor-times-matrix product with one matrix per mode; an empty optional
/// stands for the identity and leaves that mode untouched.
template <typename Scalar>
Tensor<Scalar> ttm(const Tensor<Scalar>& t,
                   const std::vector<std::optional<Matrix<Scalar>>>& mats) {
    if (static_cast<Index>(mats.size()) != t.order())
        throw std::invalid_argument("ttm: expected " +
                                    std::to_string(t.order()) +
                                    " matrices, got " +
                                    std::to_string(mats.size()));
    Tensor<Scalar> out = t;
    for (Index mu = 1; mu <= t.order(); ++mu) {
        const auto& m = mats[static_cast<std::size_t>(mu - 1)];
        if (m) out = ttm(out, mu, *m);
    }
    return out;
}

template <typename Scalar>
Tensor<Scalar> ttm(const Tensor<Scalar>& t,
                   const std::vector<Matrix<Scalar>>& mats) {
    std::vector<std::optional<Matrix<Scalar>>> opt(mats.begin(), mats.end());
    return ttm(t, opt);
}

template <typename Scalar>
Matrix<Scalar> kronecker(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
    Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

using Tensord = Tensor<double>;
using Matrixd = Matrix<double>;
using Vectord = Vector<double>;

}  // namespace mwca
