#include "core/vsm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"

namespace tq {

const char* to_string(IdfMode m) {
  return m == IdfMode::paper_literal ? "paper-literal" : "smoothed";
}

const char* to_string(NormMode m) { return m == NormMode::l2 ? "l2" : "none"; }

std::optional<IdfMode> idf_mode_from_string(const std::string& s) {
  if (s == "paper-literal" || s == "paper" || s == "literal") return IdfMode::paper_literal;
  if (s == "smoothed" || s == "smooth") return IdfMode::smoothed;
  return std::nullopt;
}

std::optional<NormMode> norm_mode_from_string(const std::string& s) {
  if (s == "l2") return NormMode::l2;
  if (s == "none") return NormMode::none;
  return std::nullopt;
}

std::int64_t TfidfModel::term_index(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::uint64_t TfidfModel::vocab_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& t : terms_) {
    for (unsigned char c : t) mix(c);
    mix(0);
  }
  return h;
}

std::vector<std::uint32_t> all_doc_ids(const Corpus& corpus) {
  std::vector<std::uint32_t> ids(corpus.doc_count());
  std::iota(ids.begin(), ids.end(), 0u);
  return ids;
}

TfidfModel fit_tfidf(const Corpus& corpus, std::span<const std::uint32_t> doc_ids,
                     IdfMode idf_mode, NormMode norm_mode) {
  if (doc_ids.empty()) raise(Errc::empty_training_set, "no training documents");
  TfidfModel model;
  model.idf_mode_ = idf_mode;
  model.norm_mode_ = norm_mode;

  std::vector<std::uint64_t> df;
  std::vector<std::uint32_t> seen_in_doc;  // term ids seen in the current doc
  for (auto id : doc_ids) {
    seen_in_doc.clear();
    for (const auto& tok : corpus.doc(id).tokens) {
      auto [it, inserted] = model.index_.try_emplace(
          tok, static_cast<std::uint32_t>(model.terms_.size()));
      if (inserted) {
        model.terms_.push_back(tok);
        df.push_back(0);
      }
      seen_in_doc.push_back(it->second);
    }
    std::sort(seen_in_doc.begin(), seen_in_doc.end());
    seen_in_doc.erase(std::unique(seen_in_doc.begin(), seen_in_doc.end()),
                      seen_in_doc.end());
    for (auto t : seen_in_doc) ++df[t];
  }

  const double n_docs = static_cast<double>(doc_ids.size());
  model.idf_.resize(df.size());
  for (std::size_t t = 0; t < df.size(); ++t) {
    double dft = static_cast<double>(df[t]);
    model.idf_[t] = idf_mode == IdfMode::paper_literal
                        ? std::log(n_docs / dft)
                        : std::log((1.0 + n_docs) / (1.0 + dft)) + 1.0;
  }
  return model;
}

TfidfModel fit_tfidf(const Corpus& corpus, IdfMode idf_mode, NormMode norm_mode) {
  auto ids = all_doc_ids(corpus);
  return fit_tfidf(corpus, ids, idf_mode, norm_mode);
}

SparseMatrix transform(const TfidfModel& model, const Corpus& corpus,
                       std::span<const std::uint32_t> doc_ids) {
  SparseMatrix out(model.vocab_size());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;  // (term, occurrences)
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  for (auto id : doc_ids) {
    counts.clear();
    cols.clear();
    vals.clear();

    std::uint64_t in_vocab_tokens = 0;
    for (const auto& tok : corpus.doc(id).tokens) {
      std::int64_t t = model.term_index(tok);
      if (t < 0) continue;  // unseen at fit time: dropped from tf entirely
      counts.emplace_back(static_cast<std::uint32_t>(t), 1u);
      ++in_vocab_tokens;
    }
    if (in_vocab_tokens == 0) {
      out.append_row({}, {});
      continue;
    }
    std::sort(counts.begin(), counts.end());
    // collapse duplicates
    std::size_t w = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
      if (w > 0 && counts[w - 1].first == counts[r].first)
        counts[w - 1].second += counts[r].second;
      else
        counts[w++] = counts[r];
    }
    counts.resize(w);

    const double denom = static_cast<double>(in_vocab_tokens);
    for (auto [t, n] : counts) {
      double weight = (static_cast<double>(n) / denom) * model.idf(t);
      if (weight != 0.0) {
        cols.push_back(t);
        vals.push_back(weight);
      }
    }
    if (model.norm_mode() == NormMode::l2 && !vals.empty()) {
      double sq = 0.0;
      for (double v : vals) sq += v * v;
      double norm = std::sqrt(sq);
      for (double& v : vals) v /= norm;
    }
    out.append_row(cols, vals);
  }
  return out;
}

SparseMatrix transform(const TfidfModel& model, const Corpus& corpus) {
  auto ids = all_doc_ids(corpus);
  return transform(model, corpus, ids);
}

}  // namespace tq
