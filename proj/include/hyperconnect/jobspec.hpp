#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperconnect/connection.hpp"
#include "hyperconnect/frobenius.hpp"
#include "hyperconnect/types.hpp"

namespace hyperconnect {

/// Input failed schema or precondition checks; maps to exit code 2.
class ValidationError : public Error {
 public:
  ValidationError(std::string code, const std::string& message)
      : Error(message), code(std::move(code)) {}
  std::string code;
};

/// A batch job description. Complex numbers parse from [re, im] pairs.
struct JobSpec {
  int n = 0;
  CVec alpha;
  CVec beta;
  Normalization normalization;
  std::vector<Method> methods;
  int truncation = 64;
  double tolerance = 1e-9;
  std::int64_t asymptotic_m_max = 16384;
  std::string output;  // empty writes to stdout
  std::string format = "json";

  // CLI-level knobs, not part of the document schema.
  std::uint64_t seed = 0;
  bool seeded = false;
  std::int64_t max_terms = 1'000'000;

  static JobSpec parse_file(const std::string& path);
  static JobSpec parse_text(const std::string& text);

  /// Schema and precondition checks; throws ValidationError.
  void validate() const;

  ParameterSet parameter_set() const;
};

struct JobOutcome {
  int exit_code = 0;
  bool pass = false;
  std::string document;  // rendered in the requested format
};

/// Run every requested computation and render the result document.
/// Convergence failures surface as exit code 3 with an error object.
JobOutcome run_job(const JobSpec& spec);

/// Serialize an error as the machine-readable error object.
std::string error_document(const std::string& code, const std::string& message);

/// Write content to path atomically (temp file + rename).
void write_atomic(const std::string& path, const std::string& content);

}  // namespace hyperconnect
