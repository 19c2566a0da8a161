#pragma once

// Seeded verification suites over the library, with deterministic reports.
//
// Each check draws its randomness from a seed derived from the configured
// seed and the check name, so a check produces identical output whether it
// runs alone or as part of "all".  Reports render as text or as JSON
// (schema "twistor-verifier/1"); the JSON form contains no timing and is
// byte-identical across runs with the same configuration.
//
// A case aggregates one property over all samples: `residual` is the worst
// value seen and `digest` fingerprints the sampled inputs (FNV-1a over the
// matrix bytes).  Cases with `gated` false are informational: their
// residuals are reported but do not affect the verdict.

#include <json.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace twistor::checks {

enum class Check {
  kKaehler,
  kRetract,
  kSphere,
  kNijenhuis,
  kSection,
  kHolomorphy,
  kMorse,
  kIndex,
  kPoincare,
  kAll,
};

const std::vector<std::string>& check_names();
std::string check_name(Check c);
Check check_from_name(const std::string& name);

enum class OutputMode { kText, kJson };

struct RunConfig {
  Check check = Check::kAll;
  int n = 3;                    // half-dimension of the base sphere / space
  std::uint64_t seed = 2026;
  int samples = 50;
  double tol = 1e-8;            // bound for exact (non-differenced) identities
  double h = 1e-5;              // finite-difference step for derivative checks
  OutputMode output = OutputMode::kText;  // how callers should render the report
};

struct CaseResult {
  std::string label;
  std::uint64_t digest = 0;
  double residual = 0.0;
  double bound = 0.0;
  bool gated = true;
  bool pass = true;
};

struct CheckReport {
  std::string check;
  nlohmann::ordered_json params;
  std::vector<CaseResult> cases;
  std::vector<CheckReport> sub;  // populated only by "all"
  double max_residual = 0.0;     // over gated cases
  bool pass = true;
  double wall_seconds = 0.0;     // text output only, never serialized
};

std::uint64_t fnv1a(const void* data, std::size_t nbytes);
std::uint64_t matrix_digest(const Eigen::MatrixXd& m, std::uint64_t h0 = 0);

nlohmann::ordered_json report_to_json(const CheckReport& r);
std::string report_to_text(const CheckReport& r);

CheckReport run(const RunConfig& cfg);

}  // namespace twistor::checks
