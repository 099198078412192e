#pragma once

// JSON and CSV interchange.
//
// FuncSpec documents: {"kind": "<variant>", ...fields...} with camelCase
// keys. Certificate documents are versioned ({"version": 1}) and embed the
// full FuncSpec, so a standalone verifier needs nothing but the file.
// Serialization and parsing round-trip value-identically.

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "lipcert/counterexamples.hpp"
#include "lipcert/func_spec.hpp"
#include "lipcert/lipschitz.hpp"
#include "lipcert/witness.hpp"

namespace lipcert {

nlohmann::json func_to_json(const FuncSpec& f);
// Throws SpecError on unknown kinds, missing fields, or violated invariants.
FuncSpec func_from_json(const nlohmann::json& j);

// Two-column CSV (x, y) -> Sampled. A leading non-numeric line is treated as
// a header; any later malformed line is an error.
Sampled sampled_from_csv(std::istream& in);

// Profile CSV: header "x,value,divergent,sided,wm0,...,wm{K-1}", one row per
// grid point, shortest round-trip number formatting, divergent as 0/1.
std::string profile_to_csv(const LipschitzProfile& p);
nlohmann::json profile_to_json(const LipschitzProfile& p);

// Versioned certificate document:
// {"version":1, "func":..., "C":..., "cPrime":..., "depth":...,
//  "nodes":[{"addr":"", "a":..., "b":..., "slope":...}, ...]}
// Nodes in breadth-first order; a node's children are addr+"0" and addr+"1".
nlohmann::json tree_to_json(const WitnessTree& t);

// Tree document plus the leaf-level certificate:
// "leaves":[{"addr":..., "a":..., "b":..., "branchSlopeMin":...}, ...]
nlohmann::json certificate_to_json(const WitnessTree& t,
                                   const CantorCertificate& cert);

// Strict loader; throws SpecError on any structural defect.
WitnessTree tree_from_json(const nlohmann::json& j);

// Standalone verification of a certificate document. Structural defects
// (missing root, missing sibling, duplicate or orphan addresses, degenerate
// intervals) are reported as violations; a structurally sound tree then gets
// the full verify_tree recheck. Only a document whose top-level shape is
// unusable (wrong version, missing/mistyped fields) raises SpecError.
VerifyReport verify_document(const nlohmann::json& j);

nlohmann::json report_to_json(const EquivalenceReport& r);
nlohmann::json report_to_json(const IsolationReport& r);
nlohmann::json report_to_json(const FlatnessReport& r);
nlohmann::json report_to_json(const VerifyReport& r);
// Embeds the witness certificate document verbatim.
nlohmann::json report_to_json(const NonremovabilityReport& r);

}  // namespace lipcert
