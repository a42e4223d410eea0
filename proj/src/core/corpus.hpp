#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace tq {

struct Document {
  std::int32_t label_id = -1;
  std::vector<std::string> tokens;
};

enum class CorpusFormat { cachopo_lines };

// Immutable after load; safe to share across threads.
class Corpus {
 public:
  std::size_t doc_count() const { return docs_.size(); }
  std::size_t class_count() const { return label_names_.size(); }

  const Document& doc(std::size_t i) const { return docs_[i]; }
  const std::vector<Document>& docs() const { return docs_; }

  const std::string& label_name(std::int32_t id) const { return label_names_[id]; }
  // -1 when the label string is unknown.
  std::int32_t label_id(const std::string& name) const;
  const std::vector<std::string>& label_names() const { return label_names_; }
  const std::vector<std::size_t>& class_counts() const { return class_counts_; }

  bool operator==(const Corpus& other) const {
    return label_names_ == other.label_names_ && class_counts_ == other.class_counts_ &&
           docs_equal(other);
  }

  friend Corpus parse_corpus(std::istream& in, const std::string& origin);

 private:
  bool docs_equal(const Corpus& other) const;

  std::vector<Document> docs_;
  std::vector<std::string> label_names_;
  std::unordered_map<std::string, std::int32_t> label_ids_;
  std::vector<std::size_t> class_counts_;
};

Corpus load_corpus(const std::string& path,
                   CorpusFormat format = CorpusFormat::cachopo_lines);
Corpus parse_corpus(std::istream& in, const std::string& origin);

// Random (optionally stratified) partition of documents into n_folds folds.
// Shuffled indices are dealt round-robin, so fold sizes differ by at most one.
struct FoldPlan {
  std::uint64_t seed = 0;
  int n_folds = 0;
  bool stratified = false;
  std::vector<std::int32_t> fold_of;  // per document, in corpus order

  std::vector<std::uint32_t> test_indices(int fold) const;
  std::vector<std::uint32_t> train_indices(int fold) const;
  std::vector<std::size_t> fold_sizes() const;
};

FoldPlan make_folds(const Corpus& corpus, int n_folds, std::uint64_t seed,
                    bool stratified = false);

struct StatsRecord {
  std::size_t classes = 0;
  std::size_t documents = 0;
  std::size_t vocabulary = 0;
  double mean_doc_length = 0.0;
  std::size_t min_class_size = 0;
  std::size_t max_class_size = 0;
  double mean_class_size = 0.0;
  double stddev_class_size = 0.0;  // population
  double relative_stddev = 0.0;    // stddev / mean
};

StatsRecord corpus_stats(const Corpus& corpus);

}  // namespace tq
