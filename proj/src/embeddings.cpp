#include "icenet/embeddings.hpp"

#include <zlib.h>

#include <charconv>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace icenet {

namespace {

// FNV-1a; stable across platforms, unlike std::hash<std::string>.
std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ull ^ seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

bool parse_line(const std::string& line, int dim, std::string& word, std::vector<double>& vec) {
    std::istringstream iss(line);
    if (!(iss >> word)) return false;
    vec.resize(dim);
    for (int i = 0; i < dim; ++i)
        if (!(iss >> vec[i])) return false;
    double extra;
    if (iss >> extra) return false;
    return true;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::vector<std::string> lines;
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw FormatError("cannot open embedding file: " + path);
        std::string current;
        char buf[1 << 16];
        int n;
        while ((n = gzread(f, buf, sizeof(buf))) > 0) {
            for (int i = 0; i < n; ++i) {
                if (buf[i] == '\n') {
                    lines.push_back(std::move(current));
                    current.clear();
                } else {
                    current.push_back(buf[i]);
                }
            }
        }
        gzclose(f);
        if (!current.empty()) lines.push_back(std::move(current));
    } else {
        std::ifstream f(path);
        if (!f) throw FormatError("cannot open embedding file: " + path);
        std::string line;
        while (std::getline(f, line)) lines.push_back(line);
    }
    return lines;
}

}  // namespace

void EmbeddingTable::add(const std::string& word, std::vector<double> vec) {
    if (static_cast<int>(vec.size()) != dim_)
        throw DimensionError("embedding for '" + word + "' has dimension " +
                             std::to_string(vec.size()) + ", table expects " +
                             std::to_string(dim_));
    auto [it, inserted] = index_.emplace(word, rows_.size());
    if (inserted)
        rows_.push_back(std::move(vec));
    else
        rows_[it->second] = std::move(vec);
}

std::vector<double> EmbeddingTable::draw_oov(const std::string& word) const {
    std::mt19937_64 rng(fnv1a(word, oov_seed_));
    std::uniform_real_distribution<double> dist(-0.5 / dim_, 0.5 / dim_);
    std::vector<double> v(dim_);
    for (auto& x : v) x = dist(rng);
    return v;
}

const std::vector<double>& EmbeddingTable::resolve(const std::string& word, ResolveMode mode) {
    if (!random_mode_) {
        auto it = index_.find(word);
        if (it != index_.end()) return rows_[it->second];
        if (mode == ResolveMode::Strict) throw MissingWordError(word);
    }
    auto it = oov_cache_.find(word);
    if (it == oov_cache_.end()) it = oov_cache_.emplace(word, draw_oov(word)).first;
    return it->second;
}

void EmbeddingTable::prepopulate_oov(const std::vector<std::string>& words) {
    for (const auto& w : words)
        if (random_mode_ || !contains(w)) resolve(w, ResolveMode::OovRandom);
}

EmbeddingTable load_embeddings(const std::string& path, int expected_dim, std::uint64_t oov_seed) {
    auto lines = read_lines(path);
    std::size_t start = 0;
    // Optional "count dim" header: exactly two integer tokens.
    if (!lines.empty()) {
        std::istringstream iss(lines[0]);
        long long count, dim;
        std::string tail;
        if (iss >> count >> dim && !(iss >> tail)) {
            if (dim != expected_dim)
                throw FormatError("embedding header declares dimension " + std::to_string(dim) +
                                  ", expected " + std::to_string(expected_dim));
            start = 1;
        }
    }
    EmbeddingTable table(expected_dim, oov_seed);
    std::string word;
    std::vector<double> vec;
    for (std::size_t i = start; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        if (parse_line(lines[i], expected_dim, word, vec))
            table.add(word, vec);
        else
            ++table.skipped_lines;
    }
    if (table.vocab_size() == 0)
        throw FormatError("no embeddings parsed from " + path);
    return table;
}

}  // namespace icenet
