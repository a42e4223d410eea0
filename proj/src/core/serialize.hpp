#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/matrix.hpp"

namespace tq {

class SvdModel;
class LinearModel;
class KnnModel;

// Little-endian buffer writer for the binary container family.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const std::uint8_t* data, std::size_t n) {
    buf_.insert(buf_.end(), data, data + n);
  }
  void magic(const char tag[4]) {
    bytes(reinterpret_cast<const std::uint8_t*>(tag), 4);
  }
  std::vector<std::uint8_t> take() && { return std::move(buf_); }
  std::size_t size() const { return buf_.size(); }

 private:
  std::vector<std::uint8_t> buf_;
};

// Bounds-checked reader; any overrun raises CorruptStream.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64();
  void read(std::uint8_t* out, std::size_t n);
  void expect_magic(const char tag[4], const char* what);
  bool at_end() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::string& path);

// "TQSM": n_rows u64, n_cols u64, nnz u64, offsets u64 x (n_rows+1),
// cols u32 x nnz, weights f64 x nnz.
std::vector<std::uint8_t> serialize_sparse(const SparseMatrix& m);
SparseMatrix deserialize_sparse(std::span<const std::uint8_t> bytes);
void save_sparse(const SparseMatrix& m, const std::string& path);
SparseMatrix load_sparse(const std::string& path);

// Debug view: one `row col weight` line per stored entry.
void write_triplets(const SparseMatrix& m, std::ostream& out);

std::vector<std::uint8_t> serialize_svd(const SvdModel& model, std::uint64_t vocab_hash);
SvdModel deserialize_svd(std::span<const std::uint8_t> bytes, std::uint64_t* vocab_hash);

std::vector<std::uint8_t> serialize_linear(const LinearModel& model);
LinearModel deserialize_linear(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_knn(const KnnModel& model);
KnnModel deserialize_knn(std::span<const std::uint8_t> bytes);

}  // namespace tq
