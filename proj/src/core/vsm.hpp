#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/corpus.hpp"
#include "core/matrix.hpp"

namespace tq {

// idf_t = ln(|D| / df_t); terms present in every training document get idf 0
// and are effectively dropped from the weighting.
// The smoothed mode is ln((1+|D|) / (1+df_t)) + 1, the common library default.
enum class IdfMode { paper_literal, smoothed };
enum class NormMode { l2, none };

const char* to_string(IdfMode m);
const char* to_string(NormMode m);
std::optional<IdfMode> idf_mode_from_string(const std::string& s);
std::optional<NormMode> norm_mode_from_string(const std::string& s);

// Immutable once fitted; transform is pure and thread-safe.
class TfidfModel {
 public:
  std::size_t vocab_size() const { return terms_.size(); }
  IdfMode idf_mode() const { return idf_mode_; }
  NormMode norm_mode() const { return norm_mode_; }

  // -1 when the term is unknown.
  std::int64_t term_index(const std::string& term) const;
  const std::string& term(std::size_t index) const { return terms_[index]; }
  double idf(std::size_t index) const { return idf_[index]; }
  std::span<const double> idf_values() const { return idf_; }

  // FNV-1a over terms in index order; identifies the vocabulary a model or an
  // SVD basis was fitted against.
  std::uint64_t vocab_hash() const;

  friend TfidfModel fit_tfidf(const Corpus& corpus, std::span<const std::uint32_t> doc_ids,
                              IdfMode idf_mode, NormMode norm_mode);

 private:
  std::vector<std::string> terms_;  // index -> term, first-appearance order
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<double> idf_;
  IdfMode idf_mode_ = IdfMode::paper_literal;
  NormMode norm_mode_ = NormMode::l2;
};

TfidfModel fit_tfidf(const Corpus& corpus, std::span<const std::uint32_t> doc_ids,
                     IdfMode idf_mode = IdfMode::paper_literal,
                     NormMode norm_mode = NormMode::l2);
TfidfModel fit_tfidf(const Corpus& corpus, IdfMode idf_mode = IdfMode::paper_literal,
                     NormMode norm_mode = NormMode::l2);

// tf uses only in-vocabulary tokens in the denominator; out-of-vocabulary
// tokens are dropped entirely. A document with no known tokens yields an
// empty row.
SparseMatrix transform(const TfidfModel& model, const Corpus& corpus,
                       std::span<const std::uint32_t> doc_ids);
SparseMatrix transform(const TfidfModel& model, const Corpus& corpus);

std::vector<std::uint32_t> all_doc_ids(const Corpus& corpus);

}  // namespace tq
