#pragma once

// Pretrained embedding loading (word2vec-style text format, optionally
// gzip-compressed) and vocabulary resolution with a seeded OOV stream.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "icenet/errors.hpp"

namespace icenet {

enum class ResolveMode { Strict, OovRandom };

class EmbeddingTable {
public:
    EmbeddingTable(int dim, std::uint64_t oov_seed) : dim_(dim), oov_seed_(oov_seed) {}

    int dim() const { return dim_; }
    std::size_t vocab_size() const { return index_.size(); }
    bool contains(const std::string& word) const { return index_.count(word) > 0; }

    void add(const std::string& word, std::vector<double> vec);

    // Strict mode throws MissingWordError on unknown words. OovRandom draws a
    // vector uniform in [-0.5/d, 0.5/d] from a stream keyed by (oov_seed,
    // word), caches it, and returns the same vector on every later call.
    const std::vector<double>& resolve(const std::string& word, ResolveMode mode);

    // Pre-draws OOV vectors for every listed word so later lookups are
    // read-only (safe for concurrent use).
    void prepopulate_oov(const std::vector<std::string>& words);

    // Baseline-1: every resolve draws from the OOV stream, ignoring loaded rows.
    void set_random_mode(bool on) { random_mode_ = on; }

    int skipped_lines = 0;  // malformed lines encountered during loading

private:
    std::vector<double> draw_oov(const std::string& word) const;

    int dim_;
    std::uint64_t oov_seed_;
    bool random_mode_ = false;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<double>> rows_;
    std::unordered_map<std::string, std::vector<double>> oov_cache_;
};

// Parses the text format: optional "count dim" header, then one line per
// word ("token v1 ... vdim"). Malformed lines are skipped and counted.
// Filenames ending in ".gz" are decompressed on the fly.
EmbeddingTable load_embeddings(const std::string& path, int expected_dim,
                               std::uint64_t oov_seed = 0);

}  // namespace icenet
