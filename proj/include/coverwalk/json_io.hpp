#pragma once

#include <string>

#include "json.hpp"

#include "coverwalk/chain.hpp"
#include "coverwalk/concentration.hpp"
#include "coverwalk/coupling.hpp"
#include "coverwalk/decompose.hpp"
#include "coverwalk/dynamics.hpp"
#include "coverwalk/functional.hpp"
#include "coverwalk/measure.hpp"
#include "coverwalk/negdep.hpp"

namespace coverwalk {

/// All documents preserve insertion order so identical inputs produce
/// byte-identical output.
using Json = nlohmann::ordered_json;

// ---- parsing ---------------------------------------------------------------

/// Parse a JSON text; origin names the source in error messages.
/// Throws InputError on malformed JSON.
Json parse_json(const std::string& text, const std::string& origin = "<inline>");

/// Read and parse a file. Throws InputError when unreadable or malformed.
Json load_json(const std::string& path);

// ---- readers ---------------------------------------------------------------

/// Measure document: {"n": int, "spec": {"kind": ..., ...}}.
///
/// kinds and their fields:
///   explicit        states: ["110", ...], weights: [w, ...]
///   product         p: [w, ...]            (one entry per coordinate)
///   conditioned_sum p: [w, ...], k: int
///   spanning_tree   vertices: int, edges: [[u, v], ...]  (1-based, n = #edges)
///   l_ensemble      L: [[...], ...]        (n x n symmetric PSD)
///
/// Parameter entries are JSON strings ("3/10", "0.25"), parsed exactly, or
/// JSON numbers. The derived kinds (product, conditioned_sum, spanning_tree)
/// always build the exact lane; explicit builds it when every weight is a
/// string or integer and keeps fractional doubles on the real lane, so
/// real-lane documents round-trip; l_ensemble is always real.
BooleanMeasure measure_from_json(const Json& doc);
BooleanMeasure load_measure(const std::string& path);

/// Generator document: {"n": int, "support": [...], "weights": [...],
/// "rates": [{"from": "01", "to": "10", "rate": r}, ...]}. from/to are
/// support bit-strings; the diagonal is rebuilt as the negative row sum.
/// The exact lane is used when every weight and rate is a string or integer;
/// any fractional JSON number switches the document to the real lane.
Generator generator_from_json(const Json& doc);
Generator load_generator(const std::string& path);

/// Observable document: {"values": [...]} aligned with the sorted support,
/// or a bare array. Length must equal the support size.
Observable observable_from_json(const Json& doc, const BooleanMeasure& m);

// ---- writers ---------------------------------------------------------------

/// Finite doubles map to JSON numbers; infinities and NaN (legal in reports:
/// vacuous extremes, Jensen gaps with no coupled pair) map to the strings
/// "inf" / "-inf" / "nan" since JSON has no number for them.
Json json_number(double x);

Json measure_to_json(const BooleanMeasure& m);   // re-readable explicit spec
Json generator_to_json(const Generator& g);      // re-readable rate document
Json coupling_to_json(const Coupling& c);
Json stats_to_json(const ChainStats& s);
Json scp_to_json(const SCPReport& r);
Json estimate_to_json(const ConstantEstimate& e);
Json two_state_to_json(const TwoStateConstants& t);
Json forms_to_json(const FormReport& f);
Json split_to_json(const SplitResult& s);
Json condition_to_json(const ConditionResult& c);
Json chi_to_json(const ChiReport& r);
Json identities_to_json(const IdentityReport& r);
Json certificate_to_json(const Certificate& c);
Json synthesis_to_json(const SynthesisResult& s);
Json mixing_to_json(const MixingReport& r);
Json tail_to_json(const TailReport& r);

/// dump(2) plus a trailing newline: the single stdout serialization.
std::string dump_report(const Json& doc);

} // namespace coverwalk
