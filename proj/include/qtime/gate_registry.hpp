#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace qtime {

/// Index of a gate kind within a GateRegistry. The ordering of the registry is
/// canonical: it fixes the feature-vector slot assignment, so registries must
/// never be reordered between extraction and training.
using GateKindId = int;

struct GateKind {
    std::string name;
    int arity = 1;        // 1 or 2
    int param_count = 0;  // rotation-angle parameters
};

class GateRegistry {
  public:
    GateRegistry() = default;
    explicit GateRegistry(std::vector<GateKind> entries);

    /// Loads a registry config: one `name,arity,param_count` entry per line,
    /// `#` comments and blank lines ignored. Line order is significant.
    static GateRegistry load(const std::string& path);

    const std::vector<GateKind>& entries() const { return entries_; }
    int size() const { return static_cast<int>(entries_.size()); }
    const GateKind& at(GateKindId id) const { return entries_.at(static_cast<size_t>(id)); }
    std::optional<GateKindId> find(const std::string& name) const;

    /// FNV-1a over the canonical serialization; artifact headers use this to
    /// detect registry drift between pipeline stages.
    uint64_t content_hash() const;

    /// Canonical config-file rendering (one `name,arity,param_count` per line).
    std::string to_text() const;

  private:
    std::vector<GateKind> entries_;
    std::unordered_map<std::string, GateKindId> by_name_;
};

/// The 34 gate kinds counted by the global features. Shipped as
/// data/registry_global.txt; the synthetic generator emits the same content.
const GateRegistry& default_global_registry();

/// The 44 gate kinds of the node-type one-hot encoding; a superset of the
/// global registry. Circuits are parsed against this set.
const GateRegistry& default_node_registry();

}  // namespace qtime
