#include "qtime/manifest.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "qtime/errors.hpp"
#include "qtime/textio.hpp"

namespace qtime {

double TimingRecord::mean_seconds() const {
    double sum = 0;
    for (double t : repeats) sum += t;
    return sum / static_cast<double>(repeats.size());
}

double TimingRecord::stdev_seconds() const {
    if (repeats.size() < 2) return 0.0;
    double mean = mean_seconds();
    double ss = 0;
    for (double t : repeats) ss += (t - mean) * (t - mean);
    return std::sqrt(ss / static_cast<double>(repeats.size() - 1));
}

std::vector<TimingRecord> load_manifest(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    int lineno = 0;
    bool header_seen = false;

    std::vector<TimingRecord> records;
    std::map<std::pair<std::string, std::string>, size_t> index;

    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        if (!header_seen) {
            auto head = split_fields(sv);
            if (head.size() < 4 || head[0] != "circuit_id" || head[1] != "backend_id" ||
                head[2] != "shots")
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": expected header 'circuit_id,backend_id,shots,t1_s,...'");
            header_seen = true;
            continue;
        }
        const std::string where = path + ":" + std::to_string(lineno);
        auto fields = split_fields(sv);
        if (fields.size() < 4) throw DataError(where + ": expected at least one repeat column");

        TimingRecord rec;
        rec.circuit_id = fields[0];
        rec.backend_id = fields[1];
        if (rec.circuit_id.empty() || rec.backend_id.empty())
            throw DataError(where + ": empty circuit or backend id");
        rec.shots = parse_int(fields[2], where);
        if (rec.shots <= 0) throw DataError(where + ": shots must be positive");
        for (size_t i = 3; i < fields.size(); ++i) {
            if (fields[i].empty()) continue;  // ragged rows pad with empty cells
            double t = parse_double(fields[i], where);
            if (!std::isfinite(t) || t <= 0)
                throw DataError(where + ": execution time must be finite positive, got '" +
                                fields[i] + "'");
            rec.repeats.push_back(t);
        }
        if (rec.repeats.empty()) throw DataError(where + ": no repeat measurements");

        auto key = std::make_pair(rec.circuit_id, rec.backend_id);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(std::move(key), records.size());
            records.push_back(std::move(rec));
        } else {
            TimingRecord& existing = records[it->second];
            existing.repeats.insert(existing.repeats.end(), rec.repeats.begin(),
                                    rec.repeats.end());
        }
    }
    if (!header_seen) throw DataError(path + ": empty manifest");
    return records;
}

std::string manifest_header(size_t max_repeats) {
    std::string h = "circuit_id,backend_id,shots";
    for (size_t i = 1; i <= max_repeats; ++i) h += ",t" + std::to_string(i) + "_s";
    return h;
}

std::string manifest_to_text(const std::vector<TimingRecord>& records) {
    size_t max_repeats = 1;
    for (const TimingRecord& r : records) max_repeats = std::max(max_repeats, r.repeats.size());
    std::ostringstream out;
    out << manifest_header(max_repeats) << "\n";
    for (const TimingRecord& r : records) {
        out << r.circuit_id << "," << r.backend_id << "," << r.shots;
        for (double t : r.repeats) out << "," << format_double(t);
        out << "\n";
    }
    return out.str();
}

}  // namespace qtime
