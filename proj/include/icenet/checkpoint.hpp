#pragma once

// Versioned binary checkpoint: metadata key/value pairs, named tensors with
// shapes, and the frozen graphs. Layout (little-endian):
//   magic "ICENETCK", u32 version
//   u32 n_meta,    n_meta    x (string key, string value)
//   u32 n_tensors, n_tensors x (string name, u32 rows, u32 cols, rows*cols f64)
//   u32 n_graphs,  n_graphs  x (string name, graph edge-list text blob)
// Strings are u32 length + bytes.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "icenet/graph.hpp"

namespace icenet {

struct Checkpoint {
    std::map<std::string, std::string> meta;
    std::vector<std::tuple<std::string, int, int, std::vector<double>>> tensors;
    std::vector<std::pair<std::string, AttentiveGraph>> graphs;

    void add_tensor(const std::string& name, const ad::Var& v);
    // Copies stored values into v; shape must match.
    void restore_tensor(const std::string& name, ad::Var& v) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace icenet
