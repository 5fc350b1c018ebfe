#pragma once

// Antonym/synonym pair datasets: TSV parsing per split, vocabulary,
// lexical-split checking, and negative-sample generation.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "icenet/errors.hpp"

namespace icenet {

enum class Relation { Synonym = 0, Antonym = 1 };
enum class Split { Train = 0, Dev = 1, Test = 2 };

struct RelationPair {
    std::string head;
    std::string tail;
    Relation label;
    Split split;
};

struct SplitDataset {
    std::string word_class;  // adjective | noun | verb | other
    std::vector<RelationPair> train, dev, test;
    std::set<std::string> vocabulary;
    int duplicate_warnings = 0;

    const std::vector<RelationPair>& pairs(Split s) const {
        switch (s) {
            case Split::Train: return train;
            case Split::Dev: return dev;
            default: return test;
        }
    }
    std::vector<RelationPair> all_pairs() const;
    // antonym:synonym counts per split
    std::pair<int, int> class_balance(Split s) const;
    // true iff train and test vocabularies are disjoint
    bool lexical_split_holds() const;
};

enum class CorruptionKind { RandomWord, CrossRelation };

struct NegativeSample {
    std::size_t source_index;  // into the positive list that was corrupted
    std::string head;
    std::string tail;
    CorruptionKind kind;
};

// Loads train.tsv / dev.tsv / test.tsv from dir. Each line is
// "head<TAB>tail<TAB>label" with label in {0,1} or {synonym,antonym}.
SplitDataset load_dataset(const std::string& dir, const std::string& word_class);

// Parses one split's TSV content (exposed for fixtures).
std::vector<RelationPair> parse_pairs(const std::string& path, Split split);

// For each positive of `relation` in the training split emits k corruptions.
// With probability 1/2 the corruption replaces head or tail (uniform coin)
// with a uniform vocabulary word; otherwise a training pair of the opposite
// relation is used verbatim. Corruptions colliding with a positive pair of
// the same relation are re-drawn. Deterministic given seed.
std::vector<NegativeSample> sample_negatives(const SplitDataset& ds, Relation relation,
                                             int k_per_positive, std::uint64_t seed);

}  // namespace icenet
