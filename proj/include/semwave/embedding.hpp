#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace semwave {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    double norm() const;
};

// Token -> vector collection with a shared dimension. Insertion order is
// preserved so downstream iteration is deterministic.
class EmbeddingSet {
  public:
    EmbeddingSet() = default;
    explicit EmbeddingSet(std::string model_id) : model_id_(std::move(model_id)) {}

    // Throws on duplicate token or dimension mismatch (first insert fixes dim).
    void insert(std::string token, EmbeddingVector vec);

    const EmbeddingVector* find(const std::string& token) const;
    const EmbeddingVector& at(const std::string& token) const;
    bool contains(const std::string& token) const { return find(token) != nullptr; }

    std::size_t size() const { return order_.size(); }
    std::size_t dim() const { return dim_; }
    const std::string& model_id() const { return model_id_; }
    void set_model_id(std::string id) { model_id_ = std::move(id); }
    const std::vector<std::string>& tokens() const { return order_; }

  private:
    std::vector<std::string> order_;
    std::unordered_map<std::string, EmbeddingVector> entries_;
    std::string model_id_;
    std::size_t dim_ = 0;
};

enum class EmbeddingFormat { jsonl, csv, binary };

EmbeddingSet load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);
void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path,
                     EmbeddingFormat format);

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct PcaResult {
    std::vector<std::string> tokens;
    std::vector<std::vector<double>> coords;          // size() x k
    std::vector<double> explained_variance_ratio;     // k, nonincreasing
    std::vector<std::vector<double>> components;      // k x dim, orthonormal rows
    std::vector<double> mean;                         // dim
};

PcaResult pca_project(const EmbeddingSet& set, std::size_t k);

struct ScanEntry {
    std::string candidate;
    double delta; // |S_C(cand, a) - S_C(cand, b)|
};

struct ScanResult {
    std::vector<ScanEntry> ranked;                      // ascending by delta
    std::vector<ScanEntry> best_per_length;             // index l-1 -> best of length l
};

// Resolves a candidate token to a vector, or nullopt to skip it.
using EmbeddingLookup = std::function<std::optional<EmbeddingVector>(const std::string&)>;

EmbeddingLookup lookup_from(const EmbeddingSet& set);

ScanResult scan_balanced_tokens(const EmbeddingLookup& source, const std::string& target_a,
                                const std::string& target_b, const std::string& alphabet,
                                std::size_t max_len, std::size_t candidate_cap = 500000);

} // namespace semwave
