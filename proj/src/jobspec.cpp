#include "hyperconnect/jobspec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hyperconnect/asymptotic.hpp"
#include "hyperconnect/complexfn.hpp"
#include "hyperconnect/series.hpp"
#include "hyperconnect/verify.hpp"

namespace hyperconnect {

namespace {

using nlohmann::json;

// ---- deterministic rendering -------------------------------------------

std::string fd(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fc(Complex z) { return "[" + fd(z.real()) + "," + fd(z.imag()) + "]"; }

std::string fcvec(const CVec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fc(v[i]);
  }
  return s + "]";
}

std::string fmat(const Eigen::MatrixXcd& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) s += ",";
    s += "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) s += ",";
      s += fc(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

std::string fmat_real(const Eigen::MatrixXd& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) s += ",";
    s += "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) s += ",";
      s += fd(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

std::string jstr(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

// ---- parsing -------------------------------------------------------------

Complex parse_complex(const json& j, const char* what) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw ValidationError("schema", std::string(what) + " must be [re, im]");
}

CVec parse_cvec(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError("schema", std::string(what) + " must be an array");
  CVec v;
  for (const auto& e : j) v.push_back(parse_complex(e, what));
  return v;
}

const std::map<std::string, Method>& method_table() {
  static const std::map<std::string, Method> table = {
      {"theorem", Method::theorem},
      {"column_shift", Method::column_shift},
      {"oracle", Method::oracle},
      {"asymptotic", Method::asymptotic},
  };
  return table;
}

}  // namespace

JobSpec JobSpec::parse_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError("parse", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("schema", "job spec must be an object");

  JobSpec spec;
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw ValidationError("schema", "field 'n' (integer) is required");
  }
  spec.n = j["n"].get<int>();
  if (!j.contains("alpha") || !j.contains("beta")) {
    throw ValidationError("schema", "fields 'alpha' and 'beta' are required");
  }
  spec.alpha = parse_cvec(j["alpha"], "alpha entry");
  spec.beta = parse_cvec(j["beta"], "beta entry");

  if (j.contains("normalization")) {
    const json& norm = j["normalization"];
    if (norm.is_string() && norm.get<std::string>() == "canonical") {
      spec.normalization = Normalization{};
    } else if (norm.is_array()) {
      std::vector<CVec> table;
      for (const auto& row : norm) table.push_back(parse_cvec(row, "d-table entry"));
      spec.normalization = Normalization::custom(std::move(table));
    } else {
      throw ValidationError("schema", "normalization must be \"canonical\" or a d-table");
    }
  }

  if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty()) {
    throw ValidationError("schema", "field 'methods' (non-empty array) is required");
  }
  for (const auto& m : j["methods"]) {
    const auto it = method_table().find(m.is_string() ? m.get<std::string>() : "");
    if (it == method_table().end()) {
      throw ValidationError("schema", "unknown method in 'methods'");
    }
    spec.methods.push_back(it->second);
  }

  if (j.contains("truncation")) spec.truncation = j["truncation"].get<int>();
  if (j.contains("tolerance")) spec.tolerance = j["tolerance"].get<double>();
  if (j.contains("asymptotic_m_max")) spec.asymptotic_m_max = j["asymptotic_m_max"].get<std::int64_t>();
  if (j.contains("output")) spec.output = j["output"].get<std::string>();
  if (j.contains("format")) spec.format = j["format"].get<std::string>();
  return spec;
}

JobSpec JobSpec::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("io", "cannot open spec file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

ParameterSet JobSpec::parameter_set() const {
  return ParameterSet::create(alpha, beta);
}

void JobSpec::validate() const {
  if (n < 2) throw ValidationError("schema", "n must be at least 2");
  if (static_cast<int>(alpha.size()) != n) {
    throw ValidationError("schema", "alpha must list n entries");
  }
  if (static_cast<int>(beta.size()) != n - 1) {
    throw ValidationError("schema", "beta must list n-1 entries");
  }
  if (!(tolerance > 0.0 && tolerance <= 1e-2)) {
    throw ValidationError("schema", "tolerance must lie in (0, 1e-2]");
  }
  if (truncation < n + 2) {
    throw ValidationError("schema", "truncation must be at least n+2");
  }
  if (format != "json" && format != "csv") {
    throw ValidationError("schema", "format must be \"json\" or \"csv\"");
  }
  if (asymptotic_m_max < 64) {
    throw ValidationError("schema", "asymptotic_m_max must be at least 64");
  }
  if (!normalization.canonical) {
    if (static_cast<int>(normalization.table.size()) != n) {
      throw ValidationError("schema", "d-table must have n rows");
    }
    for (int i = 1; i <= n; ++i) {
      const int count = (i <= n - 1) ? n - i : 1;
      const CVec& row = normalization.table[static_cast<std::size_t>(i - 1)];
      if (static_cast<int>(row.size()) != count) {
        throw ValidationError("schema", "d-table row " + std::to_string(i) +
                                            " must list " + std::to_string(count) +
                                            " coefficients");
      }
      if (std::abs(row[0]) == 0.0) {
        throw ValidationError("schema", "d-table row " + std::to_string(i) +
                                            " has zero leading coefficient");
      }
    }
  }

  ParameterSet p;
  try {
    p = parameter_set();
  } catch (const Error& e) {
    throw ValidationError("schema", e.what());
  }
  try {
    p.require_nonresonant();
  } catch (const AssumptionViolated& e) {
    throw ValidationError("assumption",
                          std::string("non-resonance assumption violated: ") + e.what());
  }
  const bool needs_hypothesis =
      std::any_of(methods.begin(), methods.end(), [](Method m) {
        return m == Method::theorem || m == Method::column_shift ||
               m == Method::asymptotic;
      });
  if (needs_hypothesis && p.beta_n.real() >= -static_cast<double>(n) + 2.0) {
    throw ValidationError("theorem_hypothesis",
                          "theorem hypothesis violated: Re beta_n < -n+2");
  }
}

std::string error_document(const std::string& code, const std::string& message) {
  return "{\"error\":{\"code\":" + jstr(code) + ",\"message\":" + jstr(message) +
         "}}\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open output file: " + tmp);
    out << content;
    if (!out) throw Error("short write to: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw Error("cannot rename " + tmp + " to " + path);
  }
}

namespace {

struct MethodResult {
  Method method;
  Eigen::MatrixXcd C;
  Eigen::MatrixXd error;
};

std::string spec_echo_json(const JobSpec& spec) {
  std::string s = "{";
  s += "\"n\":" + std::to_string(spec.n);
  s += ",\"alpha\":" + fcvec(spec.alpha);
  s += ",\"beta\":" + fcvec(spec.beta);
  s += ",\"normalization\":";
  if (spec.normalization.canonical) {
    s += "\"canonical\"";
  } else {
    s += "[";
    for (std::size_t i = 0; i < spec.normalization.table.size(); ++i) {
      if (i) s += ",";
      s += fcvec(spec.normalization.table[i]);
    }
    s += "]";
  }
  s += ",\"methods\":[";
  bool first = true;
  for (Method m : {Method::theorem, Method::column_shift, Method::oracle,
                   Method::asymptotic}) {
    if (std::find(spec.methods.begin(), spec.methods.end(), m) == spec.methods.end())
      continue;
    if (!first) s += ",";
    s += jstr(method_name(m));
    first = false;
  }
  s += "]";
  s += ",\"truncation\":" + std::to_string(spec.truncation);
  s += ",\"tolerance\":" + fd(spec.tolerance);
  s += ",\"asymptotic_m_max\":" + std::to_string(spec.asymptotic_m_max);
  if (!spec.output.empty()) s += ",\"output\":" + jstr(spec.output);
  s += ",\"format\":" + jstr(spec.format);
  s += "}";
  return s;
}

std::string estimate_json(const AsymptoticEstimate& e) {
  std::string s = "{";
  s += "\"target\":" + jstr(e.target);
  s += ",\"value\":" + fc(e.value);
  s += ",\"m_used\":" + std::to_string(e.m_used);
  s += ",\"k_used\":" + std::to_string(e.k_used);
  s += ",\"rate_exponent\":" + fd(e.rate_exponent);
  s += ",\"predicted_rate\":" + fd(e.predicted_rate);
  s += "}";
  return s;
}

bool wants(const JobSpec& spec, Method m) {
  return std::find(spec.methods.begin(), spec.methods.end(), m) != spec.methods.end();
}

}  // namespace

JobOutcome run_job(const JobSpec& spec) {
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    return JobOutcome{2, false, error_document(e.code, e.what())};
  }

  try {
    const ParameterSet p = spec.parameter_set();
    const int n = p.n;
    const int M = std::max(spec.truncation, 64);
    const auto basis0 = local_basis_at_zero(p, M);
    const auto basis1 = local_basis_at_one(p, M, spec.normalization);
    const DMatrix D = build_D(basis1);

    UnitSeriesOptions uopt;
    uopt.tol = spec.tolerance;
    uopt.max_terms = spec.max_terms;

    // Exponent tables straight from the scheme, in basis order.
    CVec exp0{Complex(0.0)};
    for (const Complex& b : p.beta) exp0.push_back(1.0 - b);
    CVec exp1;
    for (int i = 0; i < n - 1; ++i) exp1.push_back(Complex(static_cast<double>(i)));
    exp1.push_back(-p.beta_n);

    // Integer numerator parameters or integer alpha-beta differences make
    // the equation reducible; the closed forms still hold, so only warn.
    std::vector<std::string> warnings;
    for (int i = 0; i < n; ++i) {
      if (integer_distance(p.alpha[static_cast<std::size_t>(i)]) < kIntegerTolerance) {
        warnings.push_back("equation is reducible: alpha_" + std::to_string(i + 1) +
                           " is an integer");
      }
      for (int j = 0; j < n - 1; ++j) {
        if (integer_distance(p.alpha[static_cast<std::size_t>(i)] -
                             p.beta[static_cast<std::size_t>(j)]) < kIntegerTolerance) {
          warnings.push_back("equation is reducible: alpha_" + std::to_string(i + 1) +
                             " - beta_" + std::to_string(j + 1) + " is an integer");
        }
      }
    }

    Eigen::MatrixXcd P;
    Eigen::MatrixXd Perr;
    std::vector<MethodResult> results;

    if (wants(spec, Method::theorem)) {
      P = build_P(p, uopt, &Perr);
      const ConnectionMatrix cm = connection_matrix(p, basis1, uopt);
      results.push_back({Method::theorem, cm.entries, cm.error_estimate});
    }
    if (wants(spec, Method::column_shift)) {
      Eigen::MatrixXcd C(n, n);
      Eigen::MatrixXd err = Eigen::MatrixXd::Zero(n, n);
      std::vector<double> e1;
      const CVec col1 = first_column(p, basis1, uopt, &e1);
      for (int i = 0; i < n; ++i) {
        C(i, 0) = col1[static_cast<std::size_t>(i)];
        err(i, 0) = e1[static_cast<std::size_t>(i)];
      }
      for (int i = 1; i <= n - 1; ++i) {
        std::vector<double> ec;
        const CVec col = column_via_shift(p, basis1, i, uopt, &ec);
        for (int r = 0; r < n; ++r) {
          C(r, i) = col[static_cast<std::size_t>(r)];
          err(r, i) = ec[static_cast<std::size_t>(r)];
        }
      }
      results.push_back({Method::column_shift, C, err});
    }

    CVec samples;
    if (spec.seeded) {
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> dist(0.35, 0.65);
      while (static_cast<int>(samples.size()) < n) {
        const double x = dist(rng);
        bool ok = true;
        for (const Complex& s : samples) {
          if (std::abs(s.real() - x) < 0.3 / (4.0 * n)) ok = false;
        }
        if (ok) samples.push_back(Complex(x, 0.0));
      }
    } else {
      samples = chebyshev_points(n);
    }

    double oracle_condition = 0.0;
    if (wants(spec, Method::oracle)) {
      const OracleResult oracle =
          oracle_connection_coefficients(p, basis0, basis1, samples);
      oracle_condition = oracle.condition_number;
      // first-order linear-solve error model: condition number times the
      // basis evaluation tails and roundoff
      const double scale = oracle.condition_number * 1e-14;
      Eigen::MatrixXd err(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          err(i, j) = scale * std::max(1.0, std::abs(oracle.C(i, j)));
        }
      }
      results.push_back({Method::oracle, oracle.C, err});
    }

    std::string asym_json;
    if (wants(spec, Method::asymptotic)) {
      const std::int64_t m = spec.asymptotic_m_max;
      CoefficientStream stream(p);
      Eigen::MatrixXcd C(n, n);
      Eigen::MatrixXd err = Eigen::MatrixXd::Zero(n, n);

      auto fill_column = [&](int col, const CVec& at_m, const CVec& at_half) {
        for (int r = 0; r < n; ++r) {
          C(r, col) = at_m[static_cast<std::size_t>(r)];
          err(r, col) = std::abs(at_m[static_cast<std::size_t>(r)] -
                                 at_half[static_cast<std::size_t>(r)]);
        }
      };
      fill_column(0, recover_first_column(p, basis1, stream, m),
                  recover_first_column(p, basis1, stream, m / 2));
      for (int i = 1; i <= n - 1; ++i) {
        const ParameterSet q = shift_parameters(p, i);
        const auto sbasis = local_basis_at_one(q, q.n + 2);
        CoefficientStream sstream(q);
        const CVec rec = recover_first_column(q, sbasis, sstream, m);
        const CVec rec_half = recover_first_column(q, sbasis, sstream, m / 2);
        fill_column(i, map_shifted_first_column(p, basis1, i, rec, sbasis),
                    map_shifted_first_column(p, basis1, i, rec_half, sbasis));
      }
      results.push_back({Method::asymptotic, C, err});

      asym_json = "{";
      asym_json += "\"m_max\":" + std::to_string(m);
      asym_json += ",\"cn\":" + estimate_json(estimate_cn(p, basis1, stream, m));
      asym_json += ",\"step2\":[";
      for (int i = 1; i <= n - 1; ++i) {
        if (i > 1) asym_json += ",";
        asym_json += estimate_json(estimate_step2(p, basis1, stream, i, m));
      }
      asym_json += "],\"first_column\":" + fcvec(recover_first_column(p, basis1, stream, m));
      asym_json += "}";
    }

    // Verify against the most accurate requested method.
    const Eigen::MatrixXcd* best = nullptr;
    for (Method m : {Method::theorem, Method::column_shift, Method::oracle,
                     Method::asymptotic}) {
      for (const MethodResult& r : results) {
        if (r.method == m && !best) best = &r.C;
      }
    }
    VerificationReport report;
    if (best) {
      report = run_verification(p, basis0, basis1, *best, VerifyOptions{}, &samples);
      if (oracle_condition > 0.0) report.condition_number = oracle_condition;
    }

    // ---- render ----------------------------------------------------------
    std::string doc;
    if (spec.format == "json") {
      doc = "{";
      doc += "\"schema\":\"hyperconnect-result-v1\"";
      doc += ",\"spec\":" + spec_echo_json(spec);
      if (spec.seeded) doc += ",\"seed\":" + std::to_string(spec.seed);
      doc += ",\"beta_n\":" + fc(p.beta_n);
      doc += ",\"nonresonance_margin\":" + fd(p.nonresonance_margin());
      doc += ",\"exponents_at_zero\":" + fcvec(exp0);
      doc += ",\"exponents_at_one\":" + fcvec(exp1);
      doc += ",\"orientation\":\"Y0 = Y1 * C\",\"order\":\"row-major\"";
      doc += ",\"warnings\":[";
      for (std::size_t i = 0; i < warnings.size(); ++i) {
        if (i) doc += ",";
        doc += jstr(warnings[i]);
      }
      doc += "]";
      doc += ",\"D\":" + fmat(D.entries);
      if (wants(spec, Method::theorem)) {
        doc += ",\"P\":" + fmat(P);
        doc += ",\"P_error\":" + fmat_real(Perr);
      }
      doc += ",\"connection\":{";
      for (std::size_t i = 0; i < results.size(); ++i) {
        if (i) doc += ",";
        doc += jstr(method_name(results[i].method)) + ":{";
        doc += "\"rows\":" + fmat(results[i].C);
        doc += ",\"error\":" + fmat_real(results[i].error);
        doc += "}";
      }
      doc += "}";
      if (!asym_json.empty()) doc += ",\"asymptotic\":" + asym_json;
      doc += ",\"verification\":{";
      doc += "\"sample_points\":" + fcvec(samples);
      doc += ",\"max_overlap_residual\":" + fd(report.max_overlap_residual);
      doc += ",\"oracle_column_delta\":[";
      for (std::size_t i = 0; i < report.oracle_column_delta.size(); ++i) {
        if (i) doc += ",";
        doc += fd(report.oracle_column_delta[i]);
      }
      doc += "],\"ode_residual_decay\":[";
      for (std::size_t i = 0; i < report.ode_residual_decay.size(); ++i) {
        if (i) doc += ",";
        doc += "[" + std::to_string(report.ode_residual_decay[i].first) + "," +
               fd(report.ode_residual_decay[i].second) + "]";
      }
      doc += "],\"condition_number\":" + fd(report.condition_number);
      doc += ",\"details\":[";
      for (std::size_t i = 0; i < report.details.size(); ++i) {
        if (i) doc += ",";
        doc += jstr(report.details[i]);
      }
      doc += "],\"pass\":" + std::string(report.pass ? "true" : "false");
      doc += "}";
      doc += ",\"pass\":" + std::string(report.pass ? "true" : "false");
      doc += "}\n";
    } else {
      // Long-format CSV rows for spreadsheet plotting.
      std::string s = "section,i,j,re,im,err\n";
      auto emit_matrix = [&](const std::string& name, const Eigen::MatrixXcd& m,
                             const Eigen::MatrixXd* e) {
        for (int i = 0; i < m.rows(); ++i) {
          for (int j = 0; j < m.cols(); ++j) {
            s += name + "," + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                 "," + fd(m(i, j).real()) + "," + fd(m(i, j).imag()) + "," +
                 (e ? fd((*e)(i, j)) : std::string("0")) + "\n";
          }
        }
      };
      for (std::size_t k = 0; k < exp0.size(); ++k) {
        s += "exponent_at_zero," + std::to_string(k + 1) + ",0," +
             fd(exp0[k].real()) + "," + fd(exp0[k].imag()) + ",0\n";
      }
      for (std::size_t k = 0; k < exp1.size(); ++k) {
        s += "exponent_at_one," + std::to_string(k + 1) + ",0," +
             fd(exp1[k].real()) + "," + fd(exp1[k].imag()) + ",0\n";
      }
      emit_matrix("D", D.entries, nullptr);
      if (wants(spec, Method::theorem)) emit_matrix("P", P, &Perr);
      for (const MethodResult& r : results) {
        emit_matrix("C_" + method_name(r.method), r.C, &r.error);
      }
      for (const auto& [order, res] : report.ode_residual_decay) {
        s += "ode_residual_decay," + std::to_string(order) + ",0," + fd(res) +
             ",0,0\n";
      }
      for (std::size_t j = 0; j < report.oracle_column_delta.size(); ++j) {
        s += "oracle_column_delta,0," + std::to_string(j + 1) + "," +
             fd(report.oracle_column_delta[j]) + ",0,0\n";
      }
      for (std::size_t w = 0; w < warnings.size(); ++w) {
        s += "warning," + std::to_string(w + 1) + ",0,0,0,0\n";
      }
      s += "max_overlap_residual,0,0," + fd(report.max_overlap_residual) + ",0,0\n";
      s += "verification_pass,0,0," + std::string(report.pass ? "1" : "0") +
           ",0,0\n";
      doc = s;
    }

    return JobOutcome{report.pass ? 0 : 1, report.pass, doc};
  } catch (const NoConvergence& e) {
    return JobOutcome{3, false, error_document("no_convergence", e.what())};
  } catch (const DivergentAtOne& e) {
    return JobOutcome{3, false, error_document("divergent_at_one", e.what())};
  } catch (const PoleError& e) {
    return JobOutcome{3, false, error_document("pole", e.what())};
  } catch (const AssumptionViolated& e) {
    return JobOutcome{3, false, error_document("assumption", e.what())};
  } catch (const ResonanceInconsistency& e) {
    return JobOutcome{3, false, error_document("resonance_inconsistency", e.what())};
  } catch (const Error& e) {
    return JobOutcome{3, false, error_document("error", e.what())};
  }
}

}  // namespace hyperconnect
