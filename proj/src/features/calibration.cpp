#include "qtime/calibration.hpp"

#include <cmath>
#include <sstream>

#include "qtime/errors.hpp"
#include "qtime/textio.hpp"

namespace qtime {

BackendCalibration BackendCalibration::load(const std::string& path) {
    std::istringstream in(read_text_file(path));
    BackendCalibration calib;
    long declared = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const std::string where = path + ":" + std::to_string(lineno);
        auto fields = split_fields(sv);
        if (fields.size() == 2 && fields[0] == "backend_id") {
            calib.backend_id = fields[1];
            continue;
        }
        if (fields.size() == 2 && fields[0] == "num_qubits") {
            declared = parse_int(fields[1], where);
            continue;
        }
        if (fields.size() != 3) throw DataError(where + ": expected 'index,t1_us,t2_us'");
        long idx = parse_int(fields[0], where);
        if (idx != static_cast<long>(calib.qubits.size()))
            throw DataError(where + ": qubit indices must be contiguous ascending");
        QubitCalibration q;
        q.t1_us = parse_double(fields[1], where);
        q.t2_us = parse_double(fields[2], where);
        if (!std::isfinite(q.t1_us) || q.t1_us <= 0 || !std::isfinite(q.t2_us) || q.t2_us <= 0)
            throw DataError(where + ": T1/T2 must be finite positive");
        calib.qubits.push_back(q);
    }
    if (calib.backend_id.empty()) throw DataError(path + ": missing backend_id record");
    if (calib.qubits.empty()) throw DataError(path + ": no qubit rows");
    if (declared >= 0 && declared != calib.num_qubits())
        throw DataError(path + ": num_qubits record disagrees with qubit rows");
    return calib;
}

}  // namespace qtime
