#include "qtime/gate_registry.hpp"

#include <sstream>

#include "qtime/errors.hpp"
#include "qtime/hash.hpp"
#include "qtime/textio.hpp"

namespace qtime {

GateRegistry::GateRegistry(std::vector<GateKind> entries) : entries_(std::move(entries)) {
    for (size_t i = 0; i < entries_.size(); ++i) {
        const GateKind& g = entries_[i];
        if (g.name.empty()) throw DataError("registry: empty gate name");
        if (g.arity != 1 && g.arity != 2)
            throw DataError("registry: gate '" + g.name + "' has unsupported arity " +
                            std::to_string(g.arity));
        if (g.param_count < 0) throw DataError("registry: negative param count for " + g.name);
        auto [it, inserted] = by_name_.emplace(g.name, static_cast<GateKindId>(i));
        (void)it;
        if (!inserted) throw DataError("registry: duplicate gate name '" + g.name + "'");
    }
}

GateRegistry GateRegistry::load(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<GateKind> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        auto fields = split_fields(sv);
        if (fields.size() != 3)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected 'name,arity,param_count'");
        GateKind g;
        g.name = fields[0];
        g.arity = static_cast<int>(parse_int(fields[1], path + ":" + std::to_string(lineno)));
        g.param_count =
            static_cast<int>(parse_int(fields[2], path + ":" + std::to_string(lineno)));
        entries.push_back(std::move(g));
    }
    if (entries.empty()) throw DataError(path + ": empty registry");
    return GateRegistry(std::move(entries));
}

std::optional<GateKindId> GateRegistry::find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

uint64_t GateRegistry::content_hash() const {
    uint64_t h = kFnvOffset;
    for (const GateKind& g : entries_) {
        h = fnv1a64(g.name, h);
        std::string tail = "," + std::to_string(g.arity) + "," + std::to_string(g.param_count) + "\n";
        h = fnv1a64(tail, h);
    }
    return h;
}

std::string GateRegistry::to_text() const {
    std::string out = "# name,arity,param_count (order fixes feature slots)\n";
    for (const GateKind& g : entries_) {
        out += g.name + "," + std::to_string(g.arity) + "," + std::to_string(g.param_count) + "\n";
    }
    return out;
}

namespace {

std::vector<GateKind> global_gate_set() {
    return {
        {"x", 1, 0},    {"y", 1, 0},    {"z", 1, 0},   {"h", 1, 0},     {"s", 1, 0},
        {"sdg", 1, 0},  {"t", 1, 0},    {"tdg", 1, 0}, {"sx", 1, 0},    {"sxdg", 1, 0},
        {"id", 1, 0},   {"rx", 1, 1},   {"ry", 1, 1},  {"rz", 1, 1},    {"p", 1, 1},
        {"u1", 1, 1},   {"u2", 1, 2},   {"u3", 1, 3},  {"u", 1, 3},     {"cx", 2, 0},
        {"cy", 2, 0},   {"cz", 2, 0},   {"ch", 2, 0},  {"swap", 2, 0},  {"iswap", 2, 0},
        {"dcx", 2, 0},  {"ecr", 2, 0},  {"cp", 2, 1},  {"crx", 2, 1},   {"cry", 2, 1},
        {"crz", 2, 1},  {"cu1", 2, 1},  {"rzz", 2, 1}, {"rxx", 2, 1},
    };
}

std::vector<GateKind> node_gate_set() {
    auto gates = global_gate_set();
    const std::vector<GateKind> extra = {
        {"r", 1, 2},          {"ryy", 2, 1},         {"rzx", 2, 1}, {"cs", 2, 0},
        {"csdg", 2, 0},       {"csx", 2, 0},         {"cu", 2, 4},  {"cu3", 2, 3},
        {"xx_plus_yy", 2, 2}, {"xx_minus_yy", 2, 2},
    };
    gates.insert(gates.end(), extra.begin(), extra.end());
    return gates;
}

}  // namespace

const GateRegistry& default_global_registry() {
    static const GateRegistry registry(global_gate_set());
    return registry;
}

const GateRegistry& default_node_registry() {
    static const GateRegistry registry(node_gate_set());
    return registry;
}

}  // namespace qtime
