#pragma once

// End-to-end training: Adam on L1+L2+L3 with the three-phase protocol
// (encoder-only preliminary model, one-shot graph construction with frozen
// attention, then joint optimization), baseline variants, multi-seed
// suites, and the synthetic-corpus generator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icenet/dataset.hpp"
#include "icenet/embeddings.hpp"
#include "icenet/encoders.hpp"
#include "icenet/gcn.hpp"
#include "icenet/graph.hpp"
#include "icenet/metrics.hpp"

namespace icenet {

enum class Variant { Full, Baseline1RandomVectors, Baseline2NoGcn };

Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);

struct TrainConfig {
    std::uint64_t seed = 0;
    double learning_rate = 0.001;
    int epochs = 200;         // joint phase
    int m_init_epochs = 100;  // encoder-only phase
    int batch_size = 0;       // 0 = full batch
    double gamma1 = 0.9, gamma2 = 0.9;
    Thresholds thresholds;  // syn 0.15, ant 0.10
    int d = 300, enc_hidden = 150, p = 80;
    int gcn_hidden = 70, q = 60;
    ad::Act sigma = ad::Act::Sigmoid;
    AttentionScheme scheme = AttentionScheme::A5;
    int negatives_per_positive = 1;
    Variant variant = Variant::Full;
    int patience = 20;       // early-stop patience on dev F1
    bool warm_start = true;  // continue from the preliminary encoder weights
    bool strict_oov = false;
    double confidence_band = 0.05;
    // Fraction of graph-construction scores replaced by wrong-side,
    // near-threshold values (ablation stress knob).
    double score_noise_fraction = 0.0;
    std::string checkpoint_path;

    void validate() const;
    EncoderConfig encoder_config() const;
    GcnConfig gcn_config() const;
};

// Flat key=value config file; '#' starts a comment.
TrainConfig parse_config_file(const std::string& path);
void apply_config_entry(TrainConfig& cfg, const std::string& key, const std::string& value);

struct EpochLosses {
    double l1 = 0, l2 = 0, l3 = 0;
    double total() const { return l1 + l2 + l3; }
};

struct RunRecord {
    std::vector<std::pair<std::string, std::string>> config_snapshot;
    std::vector<EpochLosses> phase1_losses;
    std::vector<EpochLosses> epoch_losses;  // joint phase
    std::vector<double> dev_f1_curve;
    EvalReport dev_report, test_report;
    double wall_clock_sec = 0;
    int best_epoch = -1;
    std::string checkpoint_path;
    std::uint64_t adjacency_checksum_before = 0, adjacency_checksum_after = 0;

    std::string to_json() const;
};

struct TrainedModel {
    EncoderConfig enc_cfg;
    GcnConfig gcn_cfg;
    EncoderParams enc;
    GcnParams gcn;
    AttentiveGraph graph_h, graph_t;  // empty for Baseline2
    std::vector<std::string> vocabulary;
    Variant variant = Variant::Full;
    AttentionScheme scheme = AttentionScheme::A5;
};

struct TrainResult {
    RunRecord record;
    TrainedModel model;
};

// Phase-1 model: encoders trained on L1+L2 over the train split only.
EncoderParams train_m_init(const SplitDataset& ds, EmbeddingTable& table, const TrainConfig& cfg);

TrainResult train_full(const SplitDataset& ds, EmbeddingTable& table, const TrainConfig& cfg);

EvalReport evaluate_split(const TrainedModel& model, EmbeddingTable& table, const SplitDataset& ds,
                          Split split);

struct SuiteResult {
    std::vector<TrainResult> runs;
    EvalReport dev_aggregate, test_aggregate;
};

// Runs seeds seed+0 .. seed+n_runs-1 and aggregates mean +- sample std.
SuiteResult run_suite(const SplitDataset& ds, EmbeddingTable& table, TrainConfig cfg, int n_runs = 5);

// ---------------------------------------------------------------------------
// Synthetic corpus

struct SyntheticSpec {
    int n_clusters = 4;
    int words_per_cluster = 25;
    int antonym_cluster_pairs = 2;  // opposed (centroid, -centroid) cluster pairs
    int d = 50;
    double noise = 0.1;
    std::uint64_t seed = 0;
    bool lexical_split = false;  // disjoint train/dev/test vocabularies
    int pairs_per_word = 3;      // sampling density per class
};

// Cluster centroids on the unit sphere; opposed clusters sit at +-c.
// Synonyms are sampled within clusters, antonyms across opposed clusters,
// so symmetry, transitivity, and trans-transitivity hold exactly at the
// cluster level. Splits are 70/10/20 per class.
std::pair<SplitDataset, EmbeddingTable> generate_synthetic(const SyntheticSpec& spec);

// Writes train/dev/test.tsv plus embeddings.txt in the loader's formats.
void write_synthetic(const std::string& dir, const SplitDataset& ds, EmbeddingTable& table);

// Checkpoint round-trip for a trained model.
void save_model(const std::string& path, const TrainedModel& model,
                const std::vector<std::pair<std::string, std::string>>& meta);
TrainedModel load_model(const std::string& path);

}  // namespace icenet
