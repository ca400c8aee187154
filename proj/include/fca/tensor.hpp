#ifndef FCA_TENSOR_HPP
#define FCA_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fca {

#ifdef FCA_SINGLE_PRECISION
using Real = float;
#else
using Real = double;
#endif

using Shape = std::vector<std::size_t>;

/// Thrown when operand shapes do not satisfy an operation's contract.
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

inline std::size_t shape_numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

/**
 * Dense row-major N-dimensional array.
 *
 * Extents are positive; the flat index of (i0, i1, ..., ik) is the usual
 * row-major linearization, e.g. c*H*W + i*W + j for a C x H x W tensor.
 */
template <typename T>
class BasicTensor {
public:
  using value_type = T;

  BasicTensor() = default;

  explicit BasicTensor(Shape shape, T fill = T{0}) : shape_(std::move(shape)) {
    check_extents();
    data_.assign(shape_numel(shape_), fill);
  }

  BasicTensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    check_extents();
    if (shape_numel(shape_) != data_.size()) {
      throw ShapeError("tensor: shape " + shape_str(shape_) + " holds " +
                       std::to_string(shape_numel(shape_)) + " values, got " +
                       std::to_string(data_.size()));
    }
  }

  static BasicTensor zeros(Shape shape) { return BasicTensor(std::move(shape), T{0}); }
  static BasicTensor ones(Shape shape) { return BasicTensor(std::move(shape), T{1}); }
  static BasicTensor full(Shape shape, T v) { return BasicTensor(std::move(shape), v); }

  /// 2-D convenience constructor from nested rows.
  static BasicTensor matrix(std::initializer_list<std::initializer_list<T>> rows) {
    const std::size_t h = rows.size();
    const std::size_t w = h ? rows.begin()->size() : 0;
    std::vector<T> data;
    data.reserve(h * w);
    for (const auto& row : rows) {
      if (row.size() != w) throw ShapeError("tensor: ragged matrix literal");
      data.insert(data.end(), row.begin(), row.end());
    }
    return BasicTensor({h, w}, std::move(data));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  template <typename... Idx>
  T& operator()(Idx... idx) {
    return data_[offset(static_cast<std::size_t>(idx)...)];
  }
  template <typename... Idx>
  const T& operator()(Idx... idx) const {
    return data_[offset(static_cast<std::size_t>(idx)...)];
  }

  /// Flat offset of a multi-index; bounds are checked.
  std::size_t index_of(std::span<const std::size_t> idx) const {
    if (idx.size() != shape_.size()) {
      throw ShapeError("tensor: index rank " + std::to_string(idx.size()) + " vs tensor rank " +
                       std::to_string(shape_.size()));
    }
    std::size_t flat = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (idx[a] >= shape_[a]) throw std::out_of_range("tensor: index out of range");
      flat = flat * shape_[a] + idx[a];
    }
    return flat;
  }

  /// Inverse of index_of.
  Shape coords_of(std::size_t flat) const {
    if (flat >= data_.size()) throw std::out_of_range("tensor: flat index out of range");
    Shape idx(shape_.size());
    for (std::size_t a = shape_.size(); a-- > 0;) {
      idx[a] = flat % shape_[a];
      flat /= shape_[a];
    }
    return idx;
  }

  /// Copy of slice `i` along axis 0.
  BasicTensor slice(std::size_t i) const {
    if (rank() == 0 || i >= shape_[0]) throw std::out_of_range("tensor: slice out of range");
    Shape sub(shape_.begin() + 1, shape_.end());
    if (sub.empty()) sub = {1};
    const std::size_t n = shape_numel(sub);
    return BasicTensor(sub, std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * n),
                                           data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
  }

  std::span<const T> plane(std::size_t i) const {
    const std::size_t n = data_.size() / shape_.at(0);
    return std::span<const T>(data_).subspan(i * n, n);
  }
  std::span<T> plane(std::size_t i) {
    const std::size_t n = data_.size() / shape_.at(0);
    return std::span<T>(data_).subspan(i * n, n);
  }

  BasicTensor reshaped(Shape shape) const {
    return BasicTensor(std::move(shape), data_);
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
  }

  friend bool operator==(const BasicTensor& a, const BasicTensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

private:
  void check_extents() const {
    for (auto e : shape_) {
      if (e == 0) throw ShapeError("tensor: extents must be positive, got " + shape_str(shape_));
    }
  }

  template <typename... Idx>
  std::size_t offset(Idx... idx) const {
    const std::size_t ids[] = {idx...};
    std::size_t flat = 0;
    for (std::size_t a = 0; a < sizeof...(Idx); ++a) flat = flat * shape_[a] + ids[a];
    return flat;
  }

  Shape shape_;
  std::vector<T> data_;
};

using Tensor = BasicTensor<Real>;

template <typename T>
void require_same_shape(const BasicTensor<T>& a, const BasicTensor<T>& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }
}

template <typename T>
void require_rank(const BasicTensor<T>& a, std::size_t rank, const char* what) {
  if (a.rank() != rank) {
    throw ShapeError(std::string(what) + ": expected rank " + std::to_string(rank) + ", got " +
                     shape_str(a.shape()));
  }
}

/// Sum of a_i * b_i over all positions.
template <typename T>
T elementwise_mul_sum(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  require_same_shape(a, b, "elementwise_mul_sum");
  T acc{0};
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

/// Per-channel spatial mean of a C x H x W tensor.
template <typename T>
BasicTensor<T> reduce_mean_hw(const BasicTensor<T>& x) {
  require_rank(x, 3, "reduce_mean_hw");
  const std::size_t c = x.extent(0);
  const std::size_t hw = x.extent(1) * x.extent(2);
  const T inv = T{1} / static_cast<T>(hw);
  BasicTensor<T> out({c});
  for (std::size_t k = 0; k < c; ++k) {
    T acc{0};
    for (T v : x.plane(k)) acc += v;
    out[k] = acc * inv;
  }
  return out;
}

template <typename T>
BasicTensor<T> axpby(T alpha, const BasicTensor<T>& x, T beta, const BasicTensor<T>& y) {
  require_same_shape(x, y, "axpby");
  BasicTensor<T> out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i] + beta * y[i];
  return out;
}

template <typename T>
BasicTensor<T> scaled(const BasicTensor<T>& x, T alpha) {
  BasicTensor<T> out = x;
  for (auto& v : out.data()) v *= alpha;
  return out;
}

template <typename T>
T max_abs_diff(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  require_same_shape(a, b, "max_abs_diff");
  T m{0};
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <typename T>
T sum(const BasicTensor<T>& x) {
  T acc{0};
  for (T v : x.data()) acc += v;
  return acc;
}

} // namespace fca

#endif
