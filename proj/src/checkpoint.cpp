#include "icenet/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace icenet {

namespace {

constexpr char kMagic[8] = {'I', 'C', 'E', 'N', 'E', 'T', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& is) {
    std::uint32_t v;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!is) throw FormatError("checkpoint: truncated file");
    return v;
}

void write_str(std::ostream& os, const std::string& s) {
    write_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_str(std::istream& is) {
    std::uint32_t n = read_u32(is);
    std::string s(n, '\0');
    is.read(s.data(), n);
    if (!is) throw FormatError("checkpoint: truncated string");
    return s;
}

}  // namespace

void Checkpoint::add_tensor(const std::string& name, const ad::Var& v) {
    tensors.emplace_back(name, v->rows, v->cols, v->val);
}

void Checkpoint::restore_tensor(const std::string& name, ad::Var& v) const {
    for (const auto& [n, r, c, vals] : tensors) {
        if (n != name) continue;
        if (r != v->rows || c != v->cols)
            throw DimensionError("checkpoint tensor '" + name + "' is " + std::to_string(r) + "x" +
                                 std::to_string(c) + ", expected " + v->shape_str());
        v->val = vals;
        return;
    }
    throw FormatError("checkpoint has no tensor named '" + name + "'");
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot write checkpoint: " + path);
    os.write(kMagic, sizeof(kMagic));
    write_u32(os, kVersion);
    write_u32(os, static_cast<std::uint32_t>(ckpt.meta.size()));
    for (const auto& [k, v] : ckpt.meta) {
        write_str(os, k);
        write_str(os, v);
    }
    write_u32(os, static_cast<std::uint32_t>(ckpt.tensors.size()));
    for (const auto& [name, rows, cols, vals] : ckpt.tensors) {
        write_str(os, name);
        write_u32(os, static_cast<std::uint32_t>(rows));
        write_u32(os, static_cast<std::uint32_t>(cols));
        os.write(reinterpret_cast<const char*>(vals.data()),
                 static_cast<std::streamsize>(vals.size() * sizeof(double)));
    }
    write_u32(os, static_cast<std::uint32_t>(ckpt.graphs.size()));
    for (const auto& [name, graph] : ckpt.graphs) {
        write_str(os, name);
        std::ostringstream blob;
        write_graph(blob, graph);
        write_str(os, blob.str());
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open checkpoint: " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::string(magic, 8) != std::string(kMagic, 8))
        throw FormatError("not a checkpoint file: " + path);
    if (read_u32(is) != kVersion) throw FormatError("unsupported checkpoint version");
    Checkpoint ckpt;
    for (std::uint32_t i = 0, n = read_u32(is); i < n; ++i) {
        std::string k = read_str(is);
        ckpt.meta[k] = read_str(is);
    }
    for (std::uint32_t i = 0, n = read_u32(is); i < n; ++i) {
        std::string name = read_str(is);
        int rows = static_cast<int>(read_u32(is));
        int cols = static_cast<int>(read_u32(is));
        std::vector<double> vals(static_cast<std::size_t>(rows) * cols);
        is.read(reinterpret_cast<char*>(vals.data()),
                static_cast<std::streamsize>(vals.size() * sizeof(double)));
        if (!is) throw FormatError("checkpoint: truncated tensor '" + name + "'");
        ckpt.tensors.emplace_back(name, rows, cols, std::move(vals));
    }
    for (std::uint32_t i = 0, n = read_u32(is); i < n; ++i) {
        std::string name = read_str(is);
        std::istringstream blob(read_str(is));
        ckpt.graphs.emplace_back(name, read_graph(blob));
    }
    return ckpt;
}

}  // namespace icenet
