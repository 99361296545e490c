#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coverwalk/json_io.hpp"
#include "coverwalk/measure.hpp"

namespace coverwalk {

/// One measure of the fixed evaluation corpus.
struct CorpusEntry {
    std::string name;
    BooleanMeasure measure;
};

/// The evaluation corpus: uniform cubes up to dimension 4, a three-coordinate
/// product law and its slices, uniform slices, the spanning-tree ensembles of
/// the triangle, the square and the complete graph on four vertices, and one
/// determinantal measure on five coordinates with a fixed random kernel.
std::vector<CorpusEntry> corpus();

/// Outcome of one numbered acceptance criterion. details carries one line per
/// failed check (and a one-line summary when everything passed).
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    long checks = 0;
    std::vector<std::string> details;
    double seconds = 0; // wall time; excluded from JSON to keep output stable
};

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    bool all_pass = false;
};

/// Run the numbered criteria (all ten when ids is empty) with the given base
/// seed for the randomized checks. Throws InputError on an id outside 1..10.
SuiteResult run_suite(const std::vector<int>& ids = {}, std::uint64_t seed = 0);

/// Deterministic JSON view (timings omitted).
Json suite_to_json(const SuiteResult& r);

} // namespace coverwalk
