#pragma once

#include <cstdint>
#include <string>

namespace qtime {

/// Parameters for the self-contained synthetic fixture: random circuits,
/// calibrated synthetic backends, and a timing manifest whose targets follow
/// a fixed smooth function of the true circuit features plus multiplicative
/// noise. Used by the end-to-end tests and the `synth` subcommand.
struct SynthSpec {
    size_t circuits = 500;
    int backends = 1;
    int min_qubits = 2;
    int max_qubits = 5;
    int min_gates = 2;
    int max_gates = 9;
    int repeats = 3;
    long shots = 1024;
    double noise = 0.05;  // log-space standard deviation per repeat
    uint64_t seed = 7;
};

/// Writes corpus/*.qasm, calib/*.calib, manifest.csv, registry files and a
/// ready-to-run qtime.json into `out_dir`. Deterministic under spec.seed.
void generate_synthetic_project(const std::string& out_dir, const SynthSpec& spec);

}  // namespace qtime
