#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "symcomp/grid.hpp"
#include "symcomp/module.hpp"
#include "symcomp/refinement.hpp"
#include "symcomp/synthesis.hpp"

namespace symcomp {

// ---- text dump -------------------------------------------------------------
//
// Human-diffable listing of a small predicate: a header naming the variables
// with their domain sizes, then one satisfying assignment per line as
// `var=value` fields joined by spaces, lines sorted byte-wise. Only suitable
// when the assignment count is small; artifacts use the JSON forms below.

std::string dump_predicate(Predicate p, const std::vector<Variable>& vars);

/// Rebuilds a dumped predicate. Variables named in the header are declared
/// when absent; present ones must match the recorded domain (TypeMismatch).
/// Malformed headers, fields, or out-of-domain values throw FormatError.
Predicate parse_predicate_dump(Context& ctx, const std::string& text);

// ---- quantizer schema ------------------------------------------------------

/// `{"var":..., "kind":"uniform"|"identity", "lower","upper","eta","anchor",
/// "cells"}`, identity quantizers carrying `labels` instead of the uniform
/// fields. Cross-checked on load: a stored cell count that disagrees with the
/// reconstructed quantizer is a FormatError.
nlohmann::json quantizer_json(const Quantizer& q, const std::string& var);
Quantizer quantizer_from_json(const nlohmann::json& j);

struct NamedQuantizer {
  std::string var;
  Quantizer q;
};

// ---- predicate payloads ----------------------------------------------------
//
// Predicates travel inside artifacts in one of two encodings:
//   assignments  explicit rows over the artifact's variables (small sets);
//   nodes        the reduced decision diagram verbatim, with levels
//                renumbered to the rank they hold among the artifact's
//                variables (large sets; loading requires a compatible
//                variable layout).
// The artifact header records the variables (declaration order, domains) and
// which rank belongs to which variable, so a fresh context can reproduce the
// exact layout and adopt the diagram without reordering.

inline constexpr std::uint64_t kAssignmentEncodingLimit = 1u << 16;

/// Variable header + payload for one predicate. `vars` must cover the
/// support of p; they become the artifact's variable universe.
nlohmann::json predicate_json(Predicate p, const std::vector<Variable>& vars,
                              std::uint64_t assignment_limit = kAssignmentEncodingLimit);

/// Reload into `ctx`. An empty context gets the recorded layout declared
/// verbatim; otherwise every artifact variable must already exist with the
/// same domain and, for node payloads, the same relative bit order.
Predicate predicate_from_json(Context& ctx, const nlohmann::json& j);

// ---- module and controller artifacts ---------------------------------------

nlohmann::json module_json(const FiniteModule& m,
                           const std::vector<NamedQuantizer>& quantizers = {},
                           std::uint64_t assignment_limit = kAssignmentEncodingLimit);

struct LoadedModule {
  FiniteModule module;
  std::vector<NamedQuantizer> quantizers;
};

LoadedModule module_from_json(Context& ctx, const nlohmann::json& j);

nlohmann::json controller_json(const Controller& c);
Controller controller_from_json(Context& ctx, const nlohmann::json& j);

// file wrappers; write errors and json parse errors surface as FormatError
void save_module(const FiniteModule& m, const std::string& path,
                 const std::vector<NamedQuantizer>& quantizers = {});
LoadedModule load_module(Context& ctx, const std::string& path);
void save_controller(const Controller& c, const std::string& path);
Controller load_controller(Context& ctx, const std::string& path);

// ---- reports ---------------------------------------------------------------

nlohmann::json check_report_json(const CheckReport& rep);
nlohmann::json trial_json(const TrialRecord& t);      // one JSONL line
nlohmann::json harness_json(const HarnessStats& st);

// ---- artifact summaries ----------------------------------------------------

/// What `stats` prints for a module artifact. Counts use 128-bit arithmetic:
/// a composed transition relation can overflow 64 bits even when each factor
/// is modest.
struct ArtifactSummary {
  std::string name;
  unsigned __int128 transitions = 0;   // over inputs + outputs
  unsigned __int128 inputs_total = 0;  // product of input domains
  unsigned __int128 nonblocking = 0;   // inputs with at least one row
  std::size_t nodes = 0;               // diagram size of the constraint
  double blocking_fraction() const;
};

/// Loads the artifact into a private context and counts. Corrupt or
/// truncated files throw FormatError.
ArtifactSummary summarize_module(const std::string& path);

std::string dec_string(unsigned __int128 v);
std::string sci_string(unsigned __int128 v); // e.g. "8.80e+14"

} // namespace symcomp
