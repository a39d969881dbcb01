#include "qtime/model_io.hpp"

#include <cstring>
#include <fstream>

#include "qtime/hash.hpp"
#include "qtime/textio.hpp"

namespace qtime {
namespace {

constexpr char kMagic[4] = {'Q', 'T', 'M', 'W'};
constexpr uint32_t kVersion = 1;

void put_u16(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

class Reader {
  public:
    Reader(const std::string& buf, size_t pos, const std::string& path)
        : buf_(buf), pos_(pos), path_(path) {}

    uint16_t u16() { return static_cast<uint16_t>(byte() | (byte() << 8)); }

    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(byte()) << (8 * i);
        return v;
    }

    uint64_t u64() {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(byte()) << (8 * i);
        return v;
    }

    double f64() {
        uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    std::string bytes(size_t n) {
        need(n);
        std::string s = buf_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    size_t pos() const { return pos_; }

  private:
    uint32_t byte() {
        need(1);
        return static_cast<unsigned char>(buf_[pos_++]);
    }

    void need(size_t n) {
        if (pos_ + n > buf_.size()) throw DataError(path_ + ": truncated weight container");
    }

    const std::string& buf_;
    size_t pos_;
    const std::string& path_;
};

void append_array(std::string& out, const std::string& name, size_t rows, size_t cols,
                  const double* data) {
    put_u16(out, static_cast<uint16_t>(name.size()));
    out.append(name);
    put_u32(out, static_cast<uint32_t>(rows));
    put_u32(out, static_cast<uint32_t>(cols));
    for (size_t i = 0; i < rows * cols; ++i) put_f64(out, data[i]);
}

}  // namespace

void save_model(const ModelBundle& bundle, const std::string& path) {
    const Model model(bundle.config);
    const ModelShape& shape = model.shape();
    if (bundle.params.flat.size() != shape.total)
        throw DataError("save_model: parameter vector does not match config");
    const auto& sc = bundle.scalers;
    if (sc.node.dimension() != static_cast<size_t>(bundle.config.node_dim) ||
        sc.global.dimension() != static_cast<size_t>(bundle.config.global_dim))
        throw DataError("save_model: scaler dimensions do not match config");

    std::string out;
    out.append(kMagic, 4);
    put_u32(out, kVersion);

    const ModelConfig& c = bundle.config;
    put_u32(out, static_cast<uint32_t>(c.node_dim));
    put_u32(out, static_cast<uint32_t>(c.global_dim));
    put_u32(out, static_cast<uint32_t>(c.gt_layers));
    put_u32(out, static_cast<uint32_t>(c.gt_hidden));
    put_u32(out, static_cast<uint32_t>(c.global_fc_dims.size()));
    for (int dim : c.global_fc_dims) put_u32(out, static_cast<uint32_t>(dim));
    put_u32(out, static_cast<uint32_t>(c.head_dims.size()));
    for (int dim : c.head_dims) put_u32(out, static_cast<uint32_t>(dim));
    put_u64(out, c.seed);
    out.push_back(bundle.space == TargetSpace::LogSeconds ? '\0' : '\1');

    put_u32(out, static_cast<uint32_t>(shape.tensors.size() + 4));
    for (const TensorSpec& t : shape.tensors) {
        append_array(out, t.name, t.rows, t.cols, bundle.params.flat.data() + t.offset);
    }
    append_array(out, "scaler.node.min", 1, sc.node.dimension(), sc.node.mins.data());
    append_array(out, "scaler.node.max", 1, sc.node.dimension(), sc.node.maxs.data());
    append_array(out, "scaler.global.min", 1, sc.global.dimension(), sc.global.mins.data());
    append_array(out, "scaler.global.max", 1, sc.global.dimension(), sc.global.maxs.data());

    put_u32(out, crc32(out.data(), out.size()));
    write_text_file(path, out);
}

ModelBundle load_model(const std::string& path, const ModelConfig* expect) {
    const std::string buf = read_text_file(path);
    if (buf.size() < 12 || std::memcmp(buf.data(), kMagic, 4) != 0)
        throw DataError(path + ": not a weight container");

    const size_t payload_len = buf.size() - 4;
    uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i) {
        stored_crc |= static_cast<uint32_t>(static_cast<unsigned char>(buf[payload_len + i]))
                      << (8 * i);
    }
    if (crc32(buf.data(), payload_len) != stored_crc)
        throw DataError(path + ": checksum mismatch (corrupt or truncated container)");

    Reader r(buf, 4, path);
    uint32_t version = r.u32();
    if (version != kVersion)
        throw DataError(path + ": unsupported container version " + std::to_string(version));

    ModelBundle bundle;
    ModelConfig& c = bundle.config;
    c.node_dim = static_cast<int>(r.u32());
    c.global_dim = static_cast<int>(r.u32());
    c.gt_layers = static_cast<int>(r.u32());
    c.gt_hidden = static_cast<int>(r.u32());
    c.global_fc_dims.resize(r.u32());
    for (int& dim : c.global_fc_dims) dim = static_cast<int>(r.u32());
    c.head_dims.resize(r.u32());
    for (int& dim : c.head_dims) dim = static_cast<int>(r.u32());
    c.seed = r.u64();
    bundle.space = r.bytes(1)[0] == '\0' ? TargetSpace::LogSeconds : TargetSpace::Seconds;

    if (expect != nullptr && !(c == *expect))
        throw DataError(path + ": stored model config does not match the expected config");

    const Model model(c);
    const ModelShape& shape = model.shape();
    bundle.params.flat.assign(shape.total, 0.0);

    uint32_t count = r.u32();
    if (count != shape.tensors.size() + 4)
        throw DataError(path + ": unexpected array count for the stored config");

    auto& sc = bundle.scalers;
    size_t next_tensor = 0;
    for (uint32_t a = 0; a < count; ++a) {
        std::string name = r.bytes(r.u16());
        size_t rows = r.u32();
        size_t cols = r.u32();
        std::vector<double> data(rows * cols);
        for (double& v : data) v = r.f64();

        if (name.rfind("scaler.", 0) == 0) {
            size_t want = name.find(".node.") != std::string::npos
                              ? static_cast<size_t>(c.node_dim)
                              : static_cast<size_t>(c.global_dim);
            if (rows != 1 || cols != want)
                throw DataError(path + ": scaler array '" + name + "' has wrong shape");
            if (name == "scaler.node.min") sc.node.mins = std::move(data);
            else if (name == "scaler.node.max") sc.node.maxs = std::move(data);
            else if (name == "scaler.global.min") sc.global.mins = std::move(data);
            else if (name == "scaler.global.max") sc.global.maxs = std::move(data);
            else throw DataError(path + ": unknown scaler array '" + name + "'");
            continue;
        }
        if (next_tensor >= shape.tensors.size())
            throw DataError(path + ": too many parameter arrays");
        const TensorSpec& t = shape.tensors[next_tensor++];
        if (name != t.name || rows != t.rows || cols != t.cols)
            throw DataError(path + ": array '" + name + "' does not match expected tensor '" +
                            t.name + "' (shape mismatch vs config)");
        std::copy(data.begin(), data.end(), bundle.params.flat.begin() +
                                                static_cast<ptrdiff_t>(t.offset));
    }
    if (next_tensor != shape.tensors.size() || sc.node.mins.empty() || sc.node.maxs.empty() ||
        sc.global.mins.empty() || sc.global.maxs.empty())
        throw DataError(path + ": container is missing arrays");
    return bundle;
}

}  // namespace qtime
