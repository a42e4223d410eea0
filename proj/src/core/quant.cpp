#include "core/quant.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "core/error.hpp"
#include "core/serialize.hpp"

namespace tq {

PackedBits::PackedBits(int width, std::size_t count) : width_(width), count_(count) {
  if (width < 1 || width > 64) raise(Errc::invalid_bitwidth, std::to_string(width));
  words_.assign((bit_size() + 63) / 64, 0);
}

std::uint64_t PackedBits::get(std::size_t i) const {
  const std::size_t bit = i * static_cast<std::size_t>(width_);
  const std::size_t word = bit / 64;
  const unsigned off = static_cast<unsigned>(bit % 64);
  std::uint64_t v = words_[word] >> off;
  if (off + static_cast<unsigned>(width_) > 64)
    v |= words_[word + 1] << (64 - off);
  if (width_ < 64) v &= (std::uint64_t{1} << width_) - 1;
  return v;
}

void PackedBits::set(std::size_t i, std::uint64_t value) {
  const std::uint64_t mask =
      width_ < 64 ? (std::uint64_t{1} << width_) - 1 : ~std::uint64_t{0};
  value &= mask;
  const std::size_t bit = i * static_cast<std::size_t>(width_);
  const std::size_t word = bit / 64;
  const unsigned off = static_cast<unsigned>(bit % 64);
  words_[word] = (words_[word] & ~(mask << off)) | (value << off);
  if (off + static_cast<unsigned>(width_) > 64) {
    const unsigned hi = 64 - off;
    words_[word + 1] = (words_[word + 1] & ~(mask >> hi)) | (value >> hi);
  }
}

void PackedBits::resize(std::size_t count) {
  if (width_ == 0) raise(Errc::internal, "resize of default-constructed PackedBits");
  const std::size_t old_bits = bit_size();
  count_ = count;
  words_.resize((bit_size() + 63) / 64, 0);
  if (bit_size() < old_bits && bit_size() % 64 != 0) {
    // keep tail bits zeroed so equality and bytes() stay canonical
    words_.back() &= (std::uint64_t{1} << (bit_size() % 64)) - 1;
  }
}

std::vector<std::uint8_t> PackedBits::bytes() const {
  std::vector<std::uint8_t> out(payload_bytes(), 0);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    for (unsigned b = 0; b < 8; ++b) {
      std::size_t idx = w * 8 + b;
      if (idx >= out.size()) break;
      out[idx] = static_cast<std::uint8_t>(words_[w] >> (8 * b));
    }
  }
  return out;
}

PackedBits PackedBits::from_bytes(int width, std::size_t count,
                                  std::span<const std::uint8_t> bytes) {
  PackedBits pb(width, count);
  if (bytes.size() != pb.payload_bytes())
    raise(Errc::corrupt_stream, "bit payload size mismatch");
  for (std::size_t i = 0; i < bytes.size(); ++i)
    pb.words_[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
  return pb;
}

QuantizedMatrix::QuantizedMatrix(std::size_t n_rows, std::size_t n_cols, int bitwidth)
    : n_cols_(n_cols), bitwidth_(bitwidth) {
  if (bitwidth < 1 || bitwidth > 64) raise(Errc::invalid_bitwidth, std::to_string(bitwidth));
  (void)n_rows;
  offsets_.push_back(0);
}

std::uint64_t QuantizedMatrix::max_value() const {
  return bitwidth_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bitwidth_) - 1;
}

void QuantizedMatrix::append_row(std::span<const std::uint32_t> cols,
                                 std::span<const std::uint64_t> qs) {
  if (cols.size() != qs.size()) raise(Errc::internal, "append_row: size mismatch");
  const std::uint64_t maxv = max_value();
  for (std::size_t e = 0; e < cols.size(); ++e) {
    if (cols[e] >= n_cols_) raise(Errc::internal, "append_row: column out of bounds");
    if (e > 0 && cols[e] <= cols[e - 1]) raise(Errc::internal, "append_row: unsorted columns");
    if (qs[e] < 1 || qs[e] > maxv) raise(Errc::internal, "append_row: q out of range");
  }
  std::size_t base = col_idx_.size();
  col_idx_.insert(col_idx_.end(), cols.begin(), cols.end());
  if (q_.width() == 0) q_ = PackedBits(bitwidth_, 0);
  q_.resize(col_idx_.size());
  for (std::size_t e = 0; e < qs.size(); ++e) q_.set(base + e, qs[e]);
  offsets_.push_back(col_idx_.size());
}

std::uint64_t quantize_unit_value(double x, int bitwidth) {
  const std::uint64_t maxv =
      bitwidth >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bitwidth) - 1;
  if (x <= 0.0) return 0;
  if (x >= 1.0) return maxv;

  // x = m / 2^s exactly, with m a 53-bit integer and s >= 53 since x < 1.
  int exp = 0;
  double frac = std::frexp(x, &exp);
  const std::uint64_t m = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  const int s = 53 - exp;

  const unsigned __int128 p = static_cast<unsigned __int128>(m) * maxv;
  if (s >= 128) return 1;  // x > 0 but x * maxv < 1
  const std::uint64_t j = static_cast<std::uint64_t>(p >> s);
  const unsigned __int128 rem = p & (((static_cast<unsigned __int128>(1)) << s) - 1);
  if (rem == 0) return j;
  // Snap down when the product sits within 2^-48 relative above the integer:
  // IEEE round-to-nearest in dequantize's q/max can land marginally above the
  // exact grid point, and a strict ceiling would then re-quantize q to q+1.
  if (rem <= (p >> 48)) return j;
  return j + 1;
}

QuantizedMatrix quantize(const SparseMatrix& m, int bitwidth) {
  if (bitwidth < 1 || bitwidth > 64)
    raise(Errc::invalid_bitwidth, std::to_string(bitwidth));
  QuantizedMatrix out(m.rows(), m.cols(), bitwidth);
  std::vector<std::uint64_t> qs;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_vals(r);
    qs.clear();
    for (std::size_t e = 0; e < vals.size(); ++e) {
      double w = vals[e];
      if (!(w >= 0.0 && w <= 1.0)) {
        raise(Errc::out_of_range, "weight outside [0,1] at row " + std::to_string(r) +
                                      ", col " + std::to_string(cols[e]));
      }
      qs.push_back(quantize_unit_value(w, bitwidth));
    }
    out.append_row(cols, qs);
  }
  return out;
}

SparseMatrix dequantize(const QuantizedMatrix& qm) {
  SparseMatrix out(qm.cols());
  const double maxv = static_cast<double>(qm.max_value());
  std::vector<double> vals;
  for (std::size_t r = 0; r < qm.rows(); ++r) {
    auto cols = qm.row_cols(r);
    vals.clear();
    for (std::size_t e = 0; e < cols.size(); ++e) {
      std::uint64_t q = qm.entry_q(qm.offsets()[r] + e);
      vals.push_back(static_cast<double>(q) / maxv);
    }
    out.append_row(cols, vals);
  }
  return out;
}

DenseQuantized quantize_dense(std::span<const double> values, int bitwidth) {
  if (bitwidth < 1 || bitwidth > 64)
    raise(Errc::invalid_bitwidth, std::to_string(bitwidth));
  DenseQuantized dq;
  dq.n_rows = 1;
  dq.n_cols = values.size();
  dq.bitwidth = bitwidth;
  dq.q = PackedBits(bitwidth, values.size());
  if (values.empty()) return dq;

  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) raise(Errc::non_finite_input, "quantize_dense");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  dq.lo = lo;
  dq.hi = hi;
  if (lo == hi) return dq;  // degenerate range: all q stay 0, lo restores it

  const double range = hi - lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double unit = (values[i] - lo) / range;
    if (unit < 0.0) unit = 0.0;
    if (unit > 1.0) unit = 1.0;
    dq.q.set(i, quantize_unit_value(unit, bitwidth));
  }
  return dq;
}

DenseQuantized quantize_dense(const DenseMatrix& m, int bitwidth) {
  DenseQuantized dq = quantize_dense(m.data(), bitwidth);
  dq.n_rows = m.rows();
  dq.n_cols = m.cols();
  return dq;
}

std::vector<double> dequantize_dense_values(const DenseQuantized& dq) {
  std::vector<double> out(dq.q.count());
  if (dq.lo == dq.hi) {
    for (auto& v : out) v = dq.lo;
    return out;
  }
  const double maxv = dq.bitwidth >= 64
                          ? static_cast<double>(~std::uint64_t{0})
                          : static_cast<double>((std::uint64_t{1} << dq.bitwidth) - 1);
  const double range = dq.hi - dq.lo;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = dq.lo + (static_cast<double>(dq.q.get(i)) / maxv) * range;
  return out;
}

DenseMatrix dequantize_dense(const DenseQuantized& dq) {
  return DenseMatrix(dq.n_rows, dq.n_cols, dequantize_dense_values(dq));
}

std::vector<std::uint8_t> pack(const QuantizedMatrix& qm) {
  ByteWriter w;
  w.bytes(reinterpret_cast<const std::uint8_t*>("QVSM"), 4);
  w.u8(1);  // version
  w.u8(static_cast<std::uint8_t>(qm.bitwidth()));
  w.u64(qm.rows());
  w.u64(qm.cols());
  w.u64(qm.nnz());
  for (auto off : qm.offsets()) w.u64(off);
  for (std::size_t r = 0; r < qm.rows(); ++r)
    for (auto c : qm.row_cols(r)) w.u32(c);
  auto payload = qm.packed().bytes();
  w.bytes(payload.data(), payload.size());
  return std::move(w).take();
}

QuantizedMatrix unpack(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  std::uint8_t magic[4];
  r.read(magic, 4);
  if (std::memcmp(magic, "QVSM", 4) != 0) raise(Errc::corrupt_stream, "bad magic");
  std::uint8_t version = r.u8();
  if (version != 1) raise(Errc::corrupt_stream, "unsupported version");
  int bitwidth = r.u8();
  if (bitwidth < 1 || bitwidth > 64) raise(Errc::corrupt_stream, "bad bitwidth");
  std::uint64_t n_rows = r.u64();
  std::uint64_t n_cols = r.u64();
  std::uint64_t entries = r.u64();

  QuantizedMatrix qm(n_rows, n_cols, bitwidth);
  qm.offsets_.clear();
  qm.offsets_.reserve(n_rows + 1);
  for (std::uint64_t i = 0; i <= n_rows; ++i) {
    std::uint64_t off = r.u64();
    if ((i == 0 && off != 0) || (i > 0 && off < qm.offsets_.back()) || off > entries)
      raise(Errc::corrupt_stream, "row offsets not monotone");
    qm.offsets_.push_back(off);
  }
  if (qm.offsets_.back() != entries) raise(Errc::corrupt_stream, "offsets/entry count mismatch");

  qm.col_idx_.resize(entries);
  for (std::uint64_t e = 0; e < entries; ++e) {
    std::uint32_t c = r.u32();
    if (c >= n_cols) raise(Errc::corrupt_stream, "column index out of bounds");
    qm.col_idx_[e] = c;
  }
  for (std::uint64_t row = 0; row < n_rows; ++row) {
    for (std::uint64_t e = qm.offsets_[row] + 1; e < qm.offsets_[row + 1]; ++e) {
      if (qm.col_idx_[e] <= qm.col_idx_[e - 1])
        raise(Errc::corrupt_stream, "columns not strictly increasing within a row");
    }
  }

  const std::size_t payload = (static_cast<std::size_t>(entries) * bitwidth + 7) / 8;
  std::vector<std::uint8_t> buf(payload);
  r.read(buf.data(), payload);
  if (!r.at_end()) raise(Errc::corrupt_stream, "trailing bytes");
  qm.q_ = PackedBits::from_bytes(bitwidth, entries, buf);

  const std::uint64_t maxv = qm.max_value();
  for (std::uint64_t e = 0; e < entries; ++e) {
    std::uint64_t q = qm.q_.get(e);
    if (q < 1 || q > maxv) raise(Errc::corrupt_stream, "q value out of range");
  }
  return qm;
}

}  // namespace tq
