#pragma once

#include <map>
#include <string>
#include <vector>

#include "qtime/node_features.hpp"

namespace qtime {

/// Provenance header carried by every tabular artifact as leading
/// `# key: value` lines. Headers never contain timestamps or paths, so
/// identical inputs and seed reproduce artifacts byte for byte.
using ArtifactHeader = std::map<std::string, std::string>;

std::string render_header(const std::string& kind, const ArtifactHeader& fields);

/// Splits artifact text into its header and remaining content lines.
std::pair<ArtifactHeader, std::vector<std::string>> parse_artifact(const std::string& text,
                                                                   const std::string& path);

/// Global feature table: one row per circuit, header naming every slot.
struct FeatureTable {
    ArtifactHeader header;
    std::vector<std::string> columns;  // feature names, excluding the id column
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
};

void write_feature_table(const std::string& path, const FeatureTable& table);
FeatureTable read_feature_table(const std::string& path);

/// Graph archive: node matrix (sparse row rendering; most entries are zero)
/// plus edge list per circuit-on-backend.
struct GraphArchiveEntry {
    std::string circuit_id;
    std::string backend_id;
    NodeFeatureMatrix nodes;
    std::vector<std::pair<int, int>> edges;
};

struct GraphArchive {
    ArtifactHeader header;
    std::vector<GraphArchiveEntry> entries;
};

void write_graph_archive(const std::string& path, const GraphArchive& archive);
GraphArchive read_graph_archive(const std::string& path);

/// Key/value report artifact (evaluation results, CV summaries).
void write_kv_report(const std::string& path, const std::string& kind,
                     const ArtifactHeader& header,
                     const std::vector<std::pair<std::string, std::string>>& rows);

std::vector<std::string> list_files_sorted(const std::string& dir, const std::string& ext);

/// FNV-1a over sorted (filename, contents) pairs; detects any content drift.
uint64_t hash_dir(const std::string& dir, const std::string& ext);

/// Advisory lock on an artifact directory; refuses concurrent writers.
class DirLock {
  public:
    explicit DirLock(const std::string& dir);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

  private:
    std::string lock_path_;
};

}  // namespace qtime
