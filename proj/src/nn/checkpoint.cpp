#include "pdsc/nn/checkpoint.hpp"

#include <array>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace pdsc::nn {

namespace {

constexpr std::array<char, 8> kMagic{'P', 'D', 'S', 'C', 'M', 'L', 'P', '\0'};
constexpr std::uint32_t kMaxLayers = 64;
constexpr std::uint32_t kMaxWidth = 1u << 16;

}  // namespace

void write_mlp(BinaryWriter& out, const Mlp& net) {
    out.write_bytes(kMagic);
    out.write_u32(kMlpFormatVersion);
    out.write_u64(net.seed());
    out.write_u32(static_cast<std::uint32_t>(net.layers().size()));
    for (const auto& layer : net.layers()) {
        out.write_u32(static_cast<std::uint32_t>(layer.weight.rows()));
        out.write_u32(static_cast<std::uint32_t>(layer.weight.cols()));
        out.write_string(std::string(to_string(layer.activation)));
    }
    out.write_f64s(net.flatten());
}

Mlp read_mlp(BinaryReader& in) {
    std::array<char, 8> magic{};
    in.read_bytes(magic);
    if (magic != kMagic) throw FormatError("not a network checkpoint (bad magic)");
    const std::uint32_t version = in.read_u32();
    if (version != kMlpFormatVersion) {
        throw FormatError("unsupported network checkpoint version " + std::to_string(version));
    }
    const std::uint64_t seed = in.read_u64();
    const std::uint32_t count = in.read_u32();
    if (count == 0 || count > kMaxLayers) throw FormatError("implausible layer count " + std::to_string(count));

    std::vector<Layer> layers;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t out = in.read_u32();
        const std::uint32_t inputs = in.read_u32();
        if (out == 0 || inputs == 0 || out > kMaxWidth || inputs > kMaxWidth) {
            throw FormatError("implausible layer shape in checkpoint");
        }
        Activation activation;
        try {
            activation = parse_activation(in.read_string(64));
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
        layers.push_back({Matrix::Zero(out, inputs), Vector::Zero(out), activation});
    }
    Mlp net;
    try {
        net = Mlp(std::move(layers), seed);
    } catch (const DimensionError& e) {
        throw ShapeMismatchError(e.what());
    }
    net.unflatten(in.read_f64s(net.parameter_count()));
    return net;
}

void save_mlp(const std::string& path, const Mlp& net) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
    BinaryWriter w(out);
    write_mlp(w, net);
    if (!out) throw CheckpointError("write to '" + path + "' failed");
}

Mlp load_mlp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open '" + path + "'");
    BinaryReader r(in);
    return read_mlp(r);
}

}  // namespace pdsc::nn
