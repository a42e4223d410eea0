#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "core/matrix.hpp"

namespace tq {

// Fixed-width bit-packed unsigned integers, LSB-first within little-endian
// 64-bit words. Value i occupies bits [i*width, (i+1)*width) of the stream.
class PackedBits {
 public:
  PackedBits() = default;
  PackedBits(int width, std::size_t count);

  int width() const { return width_; }
  std::size_t count() const { return count_; }
  std::size_t bit_size() const { return count_ * static_cast<std::size_t>(width_); }
  std::size_t payload_bytes() const { return (bit_size() + 7) / 8; }

  std::uint64_t get(std::size_t i) const;
  void set(std::size_t i, std::uint64_t value);

  // Grows (or shrinks) the value count in place, preserving existing values.
  void resize(std::size_t count);

  // Raw little-endian byte image, exactly payload_bytes() long.
  std::vector<std::uint8_t> bytes() const;
  static PackedBits from_bytes(int width, std::size_t count,
                               std::span<const std::uint8_t> bytes);

  bool operator==(const PackedBits& other) const = default;

 private:
  int width_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

// b-bit quantized counterpart of SparseMatrix: same CSR layout, q values kept
// bit-packed so the in-memory value payload really is entries*b bits.
class QuantizedMatrix {
 public:
  QuantizedMatrix() { offsets_.push_back(0); }
  QuantizedMatrix(std::size_t n_rows, std::size_t n_cols, int bitwidth);

  int bitwidth() const { return bitwidth_; }
  std::uint64_t max_value() const;
  std::size_t rows() const { return offsets_.size() - 1; }
  std::size_t cols() const { return n_cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t i) const {
    return {col_idx_.data() + offsets_[i], col_idx_.data() + offsets_[i + 1]};
  }
  std::uint64_t entry_q(std::size_t flat_index) const { return q_.get(flat_index); }
  std::span<const std::uint64_t> offsets() const { return offsets_; }
  const PackedBits& packed() const { return q_; }

  void append_row(std::span<const std::uint32_t> cols, std::span<const std::uint64_t> qs);

  bool operator==(const QuantizedMatrix& other) const = default;

 private:
  friend QuantizedMatrix unpack(std::span<const std::uint8_t> bytes);

  std::size_t n_cols_ = 0;
  int bitwidth_ = 1;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> col_idx_;
  PackedBits q_;
};

// ceil(x * (2^b - 1)) evaluated exactly in integer arithmetic; products within
// 2^-48 relative above an integer snap down to it so that quantizing a
// dequantized value reproduces q for every input. x must lie in [0, 1].
std::uint64_t quantize_unit_value(double x, int bitwidth);

QuantizedMatrix quantize(const SparseMatrix& m, int bitwidth);
SparseMatrix dequantize(const QuantizedMatrix& qm);

// Arbitrary-range dense values: affine min-max rescale to [0,1], then the
// same ceiling map. A constant input quantizes to all zeros and the recorded
// range restores the constant exactly.
struct DenseQuantized {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  int bitwidth = 1;
  double lo = 0.0;
  double hi = 0.0;
  PackedBits q;

  bool operator==(const DenseQuantized& other) const = default;
};

DenseQuantized quantize_dense(std::span<const double> values, int bitwidth);
DenseQuantized quantize_dense(const DenseMatrix& m, int bitwidth);
std::vector<double> dequantize_dense_values(const DenseQuantized& dq);
DenseMatrix dequantize_dense(const DenseQuantized& dq);

// Wire format (little-endian): magic "QVSM", version u8, bitwidth u8,
// n_rows u64, n_cols u64, entry_count u64, row offsets u64 x (n_rows+1),
// column indices u32 x entries, then the bit-packed q payload padded to a
// byte boundary (exactly ceil(entries*b/8) bytes).
inline constexpr std::size_t kQvsmHeaderBytes = 30;

std::vector<std::uint8_t> pack(const QuantizedMatrix& qm);
QuantizedMatrix unpack(std::span<const std::uint8_t> bytes);

}  // namespace tq
