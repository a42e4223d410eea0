#include "core/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace tq {

std::int32_t Corpus::label_id(const std::string& name) const {
  auto it = label_ids_.find(name);
  return it == label_ids_.end() ? -1 : it->second;
}

bool Corpus::docs_equal(const Corpus& other) const {
  if (docs_.size() != other.docs_.size()) return false;
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    if (docs_[i].label_id != other.docs_[i].label_id ||
        docs_[i].tokens != other.docs_[i].tokens)
      return false;
  }
  return true;
}

namespace {

inline bool is_ws(char c) { return c == ' ' || c == '\t'; }

}  // namespace

Corpus parse_corpus(std::istream& in, const std::string& origin) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t pos = 0;
    while (pos < line.size() && is_ws(line[pos])) ++pos;
    if (pos == line.size()) continue;  // blank line

    std::size_t label_end = pos;
    while (label_end < line.size() && !is_ws(line[label_end])) ++label_end;
    std::string label = line.substr(pos, label_end - pos);

    Document doc;
    pos = label_end;
    for (;;) {
      while (pos < line.size() && is_ws(line[pos])) ++pos;
      if (pos == line.size()) break;
      std::size_t tok_end = pos;
      while (tok_end < line.size() && !is_ws(line[tok_end])) ++tok_end;
      doc.tokens.emplace_back(line.substr(pos, tok_end - pos));
      pos = tok_end;
    }
    if (doc.tokens.empty()) {
      raise(Errc::malformed_line,
            origin + ":" + std::to_string(line_no) + ": label without tokens");
    }

    auto [it, inserted] = corpus.label_ids_.try_emplace(
        label, static_cast<std::int32_t>(corpus.label_names_.size()));
    if (inserted) {
      corpus.label_names_.push_back(label);
      corpus.class_counts_.push_back(0);
    }
    doc.label_id = it->second;
    ++corpus.class_counts_[doc.label_id];
    corpus.docs_.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, CorpusFormat format) {
  (void)format;  // cachopo_lines is the only format
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open dataset file: " + path);
  Corpus c = parse_corpus(in, path);
  if (in.bad()) raise(Errc::io_error, "read failure on: " + path);
  return c;
}

std::vector<std::uint32_t> FoldPlan::test_indices(int fold) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == fold) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

std::vector<std::uint32_t> FoldPlan::train_indices(int fold) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != fold) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(n_folds), 0);
  for (auto f : fold_of) ++sizes[static_cast<std::size_t>(f)];
  return sizes;
}

FoldPlan make_folds(const Corpus& corpus, int n_folds, std::uint64_t seed,
                    bool stratified) {
  if (n_folds < 2) raise(Errc::invalid_config, "n_folds must be at least 2");
  if (corpus.doc_count() < static_cast<std::size_t>(n_folds)) {
    raise(Errc::too_few_documents,
          std::to_string(corpus.doc_count()) + " documents for " +
              std::to_string(n_folds) + " folds");
  }
  FoldPlan plan;
  plan.seed = seed;
  plan.n_folds = n_folds;
  plan.stratified = stratified;
  plan.fold_of.assign(corpus.doc_count(), -1);

  Rng rng(seed);
  if (!stratified) {
    std::vector<std::uint32_t> ids(corpus.doc_count());
    std::iota(ids.begin(), ids.end(), 0u);
    rng.shuffle(ids);
    for (std::size_t pos = 0; pos < ids.size(); ++pos)
      plan.fold_of[ids[pos]] = static_cast<std::int32_t>(pos % n_folds);
  } else {
    // Per-class shuffle, then deal the concatenated groups with one running
    // position so both overall and per-class fold sizes stay within one.
    std::vector<std::vector<std::uint32_t>> groups(corpus.class_count());
    for (std::size_t i = 0; i < corpus.doc_count(); ++i)
      groups[corpus.doc(i).label_id].push_back(static_cast<std::uint32_t>(i));
    std::size_t pos = 0;
    for (auto& g : groups) {
      rng.shuffle(g);
      for (auto id : g) plan.fold_of[id] = static_cast<std::int32_t>(pos++ % n_folds);
    }
  }
  return plan;
}

StatsRecord corpus_stats(const Corpus& corpus) {
  if (corpus.doc_count() == 0) raise(Errc::empty_evaluation, "corpus is empty");
  StatsRecord s;
  s.classes = corpus.class_count();
  s.documents = corpus.doc_count();

  std::unordered_set<std::string> vocab;
  std::size_t total_tokens = 0;
  for (const auto& d : corpus.docs()) {
    total_tokens += d.tokens.size();
    for (const auto& t : d.tokens) vocab.insert(t);
  }
  s.vocabulary = vocab.size();
  s.mean_doc_length = static_cast<double>(total_tokens) / static_cast<double>(s.documents);

  const auto& counts = corpus.class_counts();
  s.min_class_size = counts.front();
  s.max_class_size = counts.front();
  double sum = 0.0;
  for (auto c : counts) {
    s.min_class_size = std::min(s.min_class_size, c);
    s.max_class_size = std::max(s.max_class_size, c);
    sum += static_cast<double>(c);
  }
  s.mean_class_size = sum / static_cast<double>(counts.size());
  double var = 0.0;
  for (auto c : counts) {
    double d = static_cast<double>(c) - s.mean_class_size;
    var += d * d;
  }
  var /= static_cast<double>(counts.size());
  s.stddev_class_size = std::sqrt(var);
  s.relative_stddev = s.mean_class_size > 0 ? s.stddev_class_size / s.mean_class_size : 0.0;
  return s;
}

}  // namespace tq
