#include "qtime/artifacts.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "qtime/errors.hpp"
#include "qtime/hash.hpp"
#include "qtime/textio.hpp"

namespace qtime {
namespace {

namespace fs = std::filesystem;

}  // namespace

std::string render_header(const std::string& kind, const ArtifactHeader& fields) {
    std::string out = "# qtime-artifact: " + kind + " v1\n";
    for (const auto& [key, value] : fields) {
        out += "# " + key + ": " + value + "\n";
    }
    return out;
}

std::pair<ArtifactHeader, std::vector<std::string>> parse_artifact(const std::string& text,
                                                                   const std::string& path) {
    ArtifactHeader header;
    std::vector<std::string> content;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        if (sv.front() == '#') {
            sv.remove_prefix(1);
            sv = trim(sv);
            auto colon = sv.find(':');
            if (colon != std::string_view::npos) {
                std::string key(trim(sv.substr(0, colon)));
                std::string value(trim(sv.substr(colon + 1)));
                if (first && key == "qtime-artifact") {
                    header["artifact"] = value;
                } else {
                    header[key] = value;
                }
            }
            first = false;
            continue;
        }
        first = false;
        content.emplace_back(sv);
    }
    if (content.empty() && header.empty()) throw DataError(path + ": empty artifact");
    return {std::move(header), std::move(content)};
}

void write_feature_table(const std::string& path, const FeatureTable& table) {
    std::string out = render_header("global-features", table.header);
    out += "circuit_id";
    for (const std::string& c : table.columns) out += "," + c;
    out += "\n";
    for (size_t r = 0; r < table.rows.size(); ++r) {
        out += table.ids[r];
        for (double v : table.rows[r]) out += "," + format_double(v);
        out += "\n";
    }
    write_text_file(path, out);
}

FeatureTable read_feature_table(const std::string& path) {
    auto [header, lines] = parse_artifact(read_text_file(path), path);
    if (lines.empty()) throw DataError(path + ": feature table has no column header");

    FeatureTable table;
    table.header = std::move(header);
    auto head = split_fields(lines[0]);
    if (head.empty() || head[0] != "circuit_id")
        throw DataError(path + ": feature table must start with circuit_id column");
    table.columns.assign(head.begin() + 1, head.end());

    for (size_t i = 1; i < lines.size(); ++i) {
        const std::string where = path + " row " + std::to_string(i);
        auto fields = split_fields(lines[i]);
        if (fields.size() != head.size())
            throw DataError(where + ": expected " + std::to_string(head.size()) + " fields");
        table.ids.push_back(fields[0]);
        std::vector<double> row;
        row.reserve(fields.size() - 1);
        for (size_t c = 1; c < fields.size(); ++c) row.push_back(parse_double(fields[c], where));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_graph_archive(const std::string& path, const GraphArchive& archive) {
    std::string out = render_header("graph-archive", archive.header);
    for (const GraphArchiveEntry& e : archive.entries) {
        out += "graph " + e.circuit_id + " " + e.backend_id + " " +
               std::to_string(e.nodes.rows) + " " + std::to_string(e.edges.size()) + "\n";
        for (size_t r = 0; r < e.nodes.rows; ++r) {
            out += "n";
            auto row = e.nodes.row(r);
            for (size_t c = 0; c < row.size(); ++c) {
                if (row[c] != 0.0) out += " " + std::to_string(c) + ":" + format_double(row[c]);
            }
            out += "\n";
        }
        for (const auto& [src, dst] : e.edges) {
            out += "e " + std::to_string(src) + " " + std::to_string(dst) + "\n";
        }
    }
    write_text_file(path, out);
}

GraphArchive read_graph_archive(const std::string& path) {
    auto [header, lines] = parse_artifact(read_text_file(path), path);
    GraphArchive archive;
    archive.header = std::move(header);

    GraphArchiveEntry* current = nullptr;
    size_t row_cursor = 0;
    for (size_t i = 0; i < lines.size(); ++i) {
        const std::string where = path + " line " + std::to_string(i + 1);
        std::istringstream ls(lines[i]);
        std::string tag;
        ls >> tag;
        if (tag == "graph") {
            GraphArchiveEntry e;
            size_t n_nodes = 0, n_edges = 0;
            if (!(ls >> e.circuit_id >> e.backend_id >> n_nodes >> n_edges))
                throw DataError(where + ": malformed graph record");
            e.nodes.rows = n_nodes;
            e.nodes.data.assign(n_nodes * e.nodes.cols, 0.0);
            e.edges.reserve(n_edges);
            archive.entries.push_back(std::move(e));
            current = &archive.entries.back();
            row_cursor = 0;
        } else if (tag == "n") {
            if (current == nullptr || row_cursor >= current->nodes.rows)
                throw DataError(where + ": node row outside a graph record");
            auto row = current->nodes.row(row_cursor++);
            std::string cell;
            while (ls >> cell) {
                auto colon = cell.find(':');
                if (colon == std::string::npos) throw DataError(where + ": malformed node cell");
                long idx = parse_int(cell.substr(0, colon), where);
                if (idx < 0 || static_cast<size_t>(idx) >= row.size())
                    throw DataError(where + ": node feature index out of range");
                row[static_cast<size_t>(idx)] = parse_double(cell.substr(colon + 1), where);
            }
        } else if (tag == "e") {
            if (current == nullptr) throw DataError(where + ": edge outside a graph record");
            int src = 0, dst = 0;
            if (!(ls >> src >> dst)) throw DataError(where + ": malformed edge record");
            current->edges.emplace_back(src, dst);
        } else {
            throw DataError(where + ": unknown record '" + tag + "'");
        }
    }
    return archive;
}

void write_kv_report(const std::string& path, const std::string& kind,
                     const ArtifactHeader& header,
                     const std::vector<std::pair<std::string, std::string>>& rows) {
    std::string out = render_header(kind, header);
    out += "key,value\n";
    for (const auto& [key, value] : rows) out += key + "," + value + "\n";
    write_text_file(path, out);
}

std::vector<std::string> list_files_sorted(const std::string& dir, const std::string& ext) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ext)
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

uint64_t hash_dir(const std::string& dir, const std::string& ext) {
    uint64_t h = kFnvOffset;
    for (const std::string& f : list_files_sorted(dir, ext)) {
        h = fnv1a64(fs::path(f).filename().string(), h);
        uint64_t fh = hash_file(f);
        h = fnv1a64(&fh, sizeof fh, h);
    }
    return h;
}

DirLock::DirLock(const std::string& dir) {
    fs::create_directories(dir);
    lock_path_ = (fs::path(dir) / ".qtime.lock").string();
    int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        if (errno == EEXIST)
            throw Error("artifact directory '" + dir +
                        "' is locked by another command (remove " + lock_path_ + " if stale)");
        throw Error("cannot create lock file " + lock_path_ + ": " + std::strerror(errno));
    }
    ::close(fd);
}

DirLock::~DirLock() { ::unlink(lock_path_.c_str()); }

}  // namespace qtime
