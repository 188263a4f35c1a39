#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hyperconnect/jobspec.hpp"

namespace {

void apply_env_overrides(hyperconnect::JobSpec& spec) {
  if (const char* cap = std::getenv("HYPERCONNECT_MAX_TERMS")) {
    char* end = nullptr;
    const long long v = std::strtoll(cap, &end, 10);
    if (end && *end == '\0' && v > 0) spec.max_terms = v;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"connection matrices of the generalized hypergeometric equation "
               "between x=0 and x=1"};
  app.require_subcommand(1);

  std::string spec_path, out_path, format;
  double tol = 0.0;
  int truncation = 0;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "run a job and write the result document");
  run->add_option("spec", spec_path, "job spec JSON file")->required();
  CLI::Option* out_opt = run->add_option("--out", out_path, "output path (overrides spec)");
  CLI::Option* fmt_opt = run->add_option("--format", format, "json or csv");
  CLI::Option* tol_opt = run->add_option("--tol", tol, "series tolerance");
  CLI::Option* trunc_opt = run->add_option("--truncation", truncation, "basis truncation order M");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "seed for random verify sample points");

  std::string check_path;
  CLI::App* check = app.add_subcommand("check", "validate a job spec only");
  check->add_option("spec", check_path, "job spec JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  using hyperconnect::JobSpec;

  if (check->parsed()) {
    try {
      JobSpec spec = JobSpec::parse_file(check_path);
      spec.validate();
    } catch (const hyperconnect::ValidationError& e) {
      std::cout << hyperconnect::error_document(e.code, e.what());
      return 2;
    }
    std::cout << "{\"ok\":true}\n";
    return 0;
  }

  JobSpec spec;
  try {
    spec = JobSpec::parse_file(spec_path);
  } catch (const hyperconnect::ValidationError& e) {
    std::cout << hyperconnect::error_document(e.code, e.what());
    return 2;
  }
  if (*out_opt) spec.output = out_path;
  if (*fmt_opt) spec.format = format;
  if (*tol_opt) spec.tolerance = tol;
  if (*trunc_opt) spec.truncation = truncation;
  if (*seed_opt) {
    spec.seed = seed;
    spec.seeded = true;
  }
  apply_env_overrides(spec);

  const hyperconnect::JobOutcome outcome = hyperconnect::run_job(spec);
  if (outcome.exit_code == 0 || outcome.exit_code == 1) {
    if (spec.output.empty()) {
      std::cout << outcome.document;
    } else {
      try {
        hyperconnect::write_atomic(spec.output, outcome.document);
      } catch (const hyperconnect::Error& e) {
        std::cout << hyperconnect::error_document("io", e.what());
        return 3;
      }
    }
  } else {
    std::cout << outcome.document;  // error object
  }
  return outcome.exit_code;
}
