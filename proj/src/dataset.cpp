#include "icenet/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <unordered_set>

namespace icenet {

std::vector<RelationPair> SplitDataset::all_pairs() const {
    std::vector<RelationPair> out;
    out.reserve(train.size() + dev.size() + test.size());
    out.insert(out.end(), train.begin(), train.end());
    out.insert(out.end(), dev.begin(), dev.end());
    out.insert(out.end(), test.begin(), test.end());
    return out;
}

std::pair<int, int> SplitDataset::class_balance(Split s) const {
    int ant = 0, syn = 0;
    for (const auto& p : pairs(s))
        (p.label == Relation::Antonym ? ant : syn) += 1;
    return {ant, syn};
}

bool SplitDataset::lexical_split_holds() const {
    std::set<std::string> train_vocab, test_vocab;
    for (const auto& p : train) {
        train_vocab.insert(p.head);
        train_vocab.insert(p.tail);
    }
    for (const auto& p : test) {
        test_vocab.insert(p.head);
        test_vocab.insert(p.tail);
    }
    for (const auto& w : test_vocab)
        if (train_vocab.count(w)) return false;
    return true;
}

std::vector<RelationPair> parse_pairs(const std::string& path, Split split) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot open dataset file: " + path);
    std::vector<RelationPair> out;
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw FormatError(path + ":" + std::to_string(line_no) + ": expected 3 tab-separated fields");
        std::string head = line.substr(0, t1);
        std::string tail = line.substr(t1 + 1, t2 - t1 - 1);
        std::string label = line.substr(t2 + 1);
        while (!label.empty() && (label.back() == '\r' || label.back() == ' ')) label.pop_back();
        Relation rel;
        if (label == "0" || label == "synonym")
            rel = Relation::Synonym;
        else if (label == "1" || label == "antonym")
            rel = Relation::Antonym;
        else
            throw FormatError(path + ":" + std::to_string(line_no) + ": unknown label '" + label + "'");
        out.push_back({head, tail, rel, split});
    }
    if (out.empty()) throw FormatError(path + ": empty split file");
    return out;
}

SplitDataset load_dataset(const std::string& dir, const std::string& word_class) {
    SplitDataset ds;
    ds.word_class = word_class;
    ds.train = parse_pairs(dir + "/train.tsv", Split::Train);
    ds.dev = parse_pairs(dir + "/dev.tsv", Split::Dev);
    ds.test = parse_pairs(dir + "/test.tsv", Split::Test);
    std::set<std::string> seen;
    for (const auto& p : ds.all_pairs()) {
        std::string key = p.head + "\t" + p.tail + "\t" + std::to_string(static_cast<int>(p.label)) +
                          "\t" + std::to_string(static_cast<int>(p.split));
        if (!seen.insert(key).second) ++ds.duplicate_warnings;
        ds.vocabulary.insert(p.head);
        ds.vocabulary.insert(p.tail);
    }
    return ds;
}

std::vector<NegativeSample> sample_negatives(const SplitDataset& ds, Relation relation,
                                             int k_per_positive, std::uint64_t seed) {
    if (k_per_positive < 1) throw ContractError("sample_negatives: k_per_positive must be >= 1");
    if (ds.vocabulary.size() <= 2)
        throw SamplingError("vocabulary too small to corrupt pairs");

    std::vector<std::string> vocab(ds.vocabulary.begin(), ds.vocabulary.end());
    std::vector<const RelationPair*> positives, opposite;
    std::unordered_set<std::string> positive_keys;
    for (const auto& p : ds.train) {
        if (p.label == relation) {
            positives.push_back(&p);
            positive_keys.insert(p.head + "\t" + p.tail);
        } else {
            opposite.push_back(&p);
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> word_dist(0, vocab.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);

    std::vector<NegativeSample> out;
    out.reserve(positives.size() * static_cast<std::size_t>(k_per_positive));
    for (std::size_t i = 0; i < positives.size(); ++i) {
        const auto& pos = *positives[i];
        for (int k = 0; k < k_per_positive; ++k) {
            for (int attempt = 0; attempt < 1000; ++attempt) {
                NegativeSample neg;
                neg.source_index = i;
                bool cross = !opposite.empty() && coin(rng) == 1;
                if (cross) {
                    std::uniform_int_distribution<std::size_t> opp_dist(0, opposite.size() - 1);
                    const auto& o = *opposite[opp_dist(rng)];
                    neg.head = o.head;
                    neg.tail = o.tail;
                    neg.kind = CorruptionKind::CrossRelation;
                } else {
                    neg.head = pos.head;
                    neg.tail = pos.tail;
                    auto& slot = coin(rng) == 0 ? neg.head : neg.tail;
                    slot = vocab[word_dist(rng)];
                    neg.kind = CorruptionKind::RandomWord;
                }
                if (neg.head == neg.tail) continue;
                if (positive_keys.count(neg.head + "\t" + neg.tail)) continue;
                out.push_back(std::move(neg));
                break;
            }
        }
    }
    return out;
}

}  // namespace icenet
