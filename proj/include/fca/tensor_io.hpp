#ifndef FCA_TENSOR_IO_HPP
#define FCA_TENSOR_IO_HPP

// Tensor file formats.
//
// Binary: "FCAT" | u32 rank | u32 extent * rank | f64 payload, all little-endian.
// CSV:    "shape,<e0>,<e1>,..." on the first line, then the flat row-major
//         values comma-separated on the second line.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "fca/tensor.hpp"

namespace fca {

class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename U>
void put_le(std::ostream& os, U v) {
  std::array<unsigned char, sizeof(U)> buf{};
  std::memcpy(buf.data(), &v, sizeof(U));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
  os.write(reinterpret_cast<const char*>(buf.data()), sizeof(U));
}

template <typename U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> buf{};
  if (!is.read(reinterpret_cast<char*>(buf.data()), sizeof(U))) {
    throw FormatError("tensor binary: truncated stream");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf.begin(), buf.end());
  U v;
  std::memcpy(&v, buf.data(), sizeof(U));
  return v;
}

} // namespace detail

inline constexpr char kTensorMagic[4] = {'F', 'C', 'A', 'T'};

template <typename T>
void write_tensor_binary(std::ostream& os, const BasicTensor<T>& t) {
  os.write(kTensorMagic, 4);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.rank()));
  for (auto e : t.shape()) detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(e));
  for (T v : t.data()) detail::put_le<double>(os, static_cast<double>(v));
}

template <typename T = Real>
BasicTensor<T> read_tensor_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kTensorMagic, 4) != 0) {
    throw FormatError("tensor binary: bad magic");
  }
  const auto rank = detail::get_le<std::uint32_t>(is);
  if (rank > 16) throw FormatError("tensor binary: implausible rank " + std::to_string(rank));
  Shape shape(rank);
  for (auto& e : shape) e = detail::get_le<std::uint32_t>(is);
  std::vector<T> data(shape_numel(shape));
  for (auto& v : data) v = static_cast<T>(detail::get_le<double>(is));
  return BasicTensor<T>(std::move(shape), std::move(data));
}

template <typename T>
void save_tensor(const std::string& path, const BasicTensor<T>& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  write_tensor_binary(os, t);
}

template <typename T = Real>
BasicTensor<T> load_tensor(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path);
  return read_tensor_binary<T>(is);
}

template <typename T>
void write_tensor_csv(std::ostream& os, const BasicTensor<T>& t) {
  os << "shape";
  for (auto e : t.shape()) os << ',' << e;
  os << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ',';
    os << static_cast<double>(t[i]);
  }
  os << '\n';
}

template <typename T = Real>
BasicTensor<T> read_tensor_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("tensor csv: missing shape line");
  std::istringstream hs(line);
  std::string cell;
  std::getline(hs, cell, ',');
  if (cell != "shape") throw FormatError("tensor csv: first line must start with 'shape'");
  Shape shape;
  while (std::getline(hs, cell, ',')) shape.push_back(std::stoul(cell));
  std::vector<T> data;
  if (std::getline(is, line)) {
    std::istringstream vs(line);
    while (std::getline(vs, cell, ',')) data.push_back(static_cast<T>(std::stod(cell)));
  }
  return BasicTensor<T>(std::move(shape), std::move(data));
}

} // namespace fca

#endif
