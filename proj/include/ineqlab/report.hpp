#pragma once

// Command implementations behind the ineqlab CLI and their report documents.
// Each command returns a ReportDocument plus the process exit code:
//   0  every check passed
//   1  a proved inequality was violated (an implementation bug)
//   2  invalid invocation

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ineqlab/bounds.hpp"
#include "ineqlab/lemmas.hpp"
#include "ineqlab/search.hpp"
#include "ineqlab/sequence.hpp"

namespace ineqlab::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.3.0";

enum class Format { Text, Json, Csv };

inline Format parse_format(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw std::invalid_argument("unknown format: " + s);
}

/// Rounds to 15 significant digits; non-finite values pass through.
inline double round15(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

inline std::string format15(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

struct ResultRecord {
  std::string name;
  double value = 0.0;
  std::optional<double> reference;
  std::optional<bool> pass;
  Json payload = Json::object();
};

struct ReportDocument {
  std::string command;
  std::vector<std::string> invocation;
  std::string timestamp;
  Json params = Json::object();
  std::vector<ResultRecord> results;
  bool pass = true;
};

struct CommandResult {
  ReportDocument doc;
  int exit_code = 0;
};

/// UTC ISO-8601 time; honors SOURCE_DATE_EPOCH for reproducible builds of reports.
inline std::string current_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline void round_numbers(Json& j) {
  if (j.is_number_float()) {
    j = round15(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& child : j) round_numbers(child);
  }
}

}  // namespace detail

inline Json bound_to_json(const BoundValue& b) {
  Json j;
  j["rule"] = std::string(rule_name(b.rule));
  j["value"] = b.value;
  Json detail = Json::object();
  for (const auto& [k, v] : b.detail) detail[k] = v;
  j["detail"] = std::move(detail);
  Json children = Json::array();
  for (const auto& c : b.children) children.push_back(bound_to_json(c));
  j["children"] = std::move(children);
  return j;
}

inline Json to_json(const ReportDocument& doc) {
  Json j;
  j["version"] = kToolVersion;
  j["command"] = doc.command;
  j["invocation"] = doc.invocation;
  j["timestamp"] = doc.timestamp;
  j["params"] = doc.params;
  Json results = Json::array();
  for (const auto& r : doc.results) {
    Json rec;
    rec["name"] = r.name;
    rec["value"] = r.value;
    rec["reference"] = r.reference ? Json(*r.reference) : Json(nullptr);
    rec["pass"] = r.pass ? Json(*r.pass) : Json(nullptr);
    for (const auto& [k, v] : r.payload.items()) rec[k] = v;
    results.push_back(std::move(rec));
  }
  j["results"] = std::move(results);
  j["status"] = doc.pass ? "pass" : "fail";
  detail::round_numbers(j);
  return j;
}

inline std::string serialize(const ReportDocument& doc, Format fmt) {
  std::ostringstream os;
  switch (fmt) {
    case Format::Json:
      os << to_json(doc).dump(2) << '\n';
      break;
    case Format::Csv:
      os << "name,value,reference,pass\n";
      for (const auto& r : doc.results) {
        os << '"' << r.name << "\"," << format15(r.value) << ','
           << (r.reference ? format15(*r.reference) : "") << ','
           << (r.pass ? (*r.pass ? "true" : "false") : "") << '\n';
      }
      break;
    case Format::Text: {
      os << "ineqlab " << kToolVersion << "  " << doc.command << '\n';
      std::size_t width = 4;
      for (const auto& r : doc.results) width = std::max(width, r.name.size());
      for (const auto& r : doc.results) {
        os << "  " << r.name << std::string(width - r.name.size() + 2, ' ') << format15(r.value);
        if (r.reference) os << "  (ref " << format15(*r.reference) << ")";
        if (r.pass) os << (*r.pass ? "  PASS" : "  FAIL");
        os << '\n';
      }
      os << "status: " << (doc.pass ? "pass" : "fail") << '\n';
      break;
    }
  }
  return os.str();
}

inline CommandResult finalize(ReportDocument doc, int violation_exit = 1) {
  for (const auto& r : doc.results) {
    if (r.pass && !*r.pass) doc.pass = false;
  }
  const int code = doc.pass ? 0 : violation_exit;
  return {std::move(doc), code};
}

inline Json params_json(const ParamTriple& pr) { return Json{{"p", pr.p}, {"q", pr.q}, {"r", pr.r}}; }

inline std::string triple_label(const std::string& name, const ParamTriple& pr) {
  return name + "(" + format15(pr.p) + "," + format15(pr.q) + "," + format15(pr.r) + ")";
}

inline constexpr double kDominanceTolerance = 1e-9;

/// Every rule applicable at one triple, the winning bound last.
inline std::vector<ResultRecord> bound_records(BoundEngine& engine, const ParamTriple& pr) {
  std::vector<ResultRecord> out;
  const auto bennett = bennett_bound(pr);
  out.push_back({"bennett", bennett.value, std::nullopt, std::nullopt, {{"derivation", bound_to_json(bennett)}}});
  if (pr.r >= 1.0 && !(pr.p == 1.0 && pr.r == 1.0)) {
    const auto c = engine.composite_bound(pr);
    out.push_back({"composite", c.value, bennett.value, c.value <= bennett.value + kDominanceTolerance,
                   {{"derivation", bound_to_json(c)}}});
  }
  if (pr.r == 1.0) {
    const auto k = engine.k_r1_bound(pr.p, pr.q);
    out.push_back({"k_r1", k.value, std::nullopt, std::nullopt, {{"derivation", bound_to_json(k)}}});
    const auto t = three_term_bound(pr.p, pr.q);
    out.push_back({"three_term", t.value, std::nullopt, std::nullopt, {{"derivation", bound_to_json(t)}}});
  }
  if (pr.r <= 1.0) {
    try {
      const auto s = engine.reduction_small_r(pr);
      out.push_back({"reduction_small_r", s.value, std::nullopt, std::nullopt, {{"derivation", bound_to_json(s)}}});
    } catch (const DomainError&) {
    }
  }
  const auto best = engine.best_bound(pr);
  out.push_back({"best", best.value, bennett.value, best.value >= 1.0 && best.value <= bennett.value,
                 {{"derivation", bound_to_json(best)}}});
  return out;
}

inline CommandResult cmd_bound(const ParamTriple& pr, std::vector<std::string> invocation = {}) {
  ReportDocument doc;
  doc.command = "bound";
  doc.invocation = std::move(invocation);
  doc.timestamp = current_timestamp();
  const auto valid = ParamTriple::make(pr.p, pr.q, pr.r);
  doc.params = params_json(valid);
  BoundEngine engine;
  doc.results = bound_records(engine, valid);
  return finalize(std::move(doc));
}

/// Cartesian sweep; invalid combinations are skipped and counted.
inline CommandResult cmd_bound_grid(const std::vector<double>& ps, const std::vector<double>& qs,
                                    const std::vector<double>& rs, std::vector<std::string> invocation = {}) {
  ReportDocument doc;
  doc.command = "bound";
  doc.invocation = std::move(invocation);
  doc.timestamp = current_timestamp();
  doc.params = Json{{"p", ps}, {"q", qs}, {"r", rs}, {"grid", true}};
  BoundEngine engine;
  std::size_t skipped = 0;
  for (double p : ps) {
    for (double q : qs) {
      for (double r : rs) {
        if (!ParamTriple::violation(p, q, r).empty()) {
          ++skipped;
          continue;
        }
        const ParamTriple pr{p, q, r};
        const auto bennett = bennett_bound(pr);
        const auto best = engine.best_bound(pr);
        Json payload{{"p", p}, {"q", q}, {"r", r}, {"derivation", bound_to_json(best)}};
        if (r >= 1.0 && !(p == 1.0 && r == 1.0)) payload["composite"] = engine.composite_bound(pr).value;
        doc.results.push_back({triple_label("best", pr), best.value, bennett.value,
                               best.value <= bennett.value + kDominanceTolerance, std::move(payload)});
      }
    }
  }
  doc.params["skipped"] = skipped;
  return finalize(std::move(doc));
}

inline constexpr double kSandwichTolerance = 1e-6;

inline CommandResult cmd_search(const ParamTriple& pr, const SearchConfig& cfg,
                                std::vector<std::string> invocation = {}) {
  ReportDocument doc;
  doc.command = "search";
  doc.invocation = std::move(invocation);
  doc.timestamp = current_timestamp();
  const auto valid = ParamTriple::make(pr.p, pr.q, pr.r);
  doc.params = params_json(valid);
  doc.params["n"] = cfg.n;
  doc.params["restarts"] = cfg.restarts;
  doc.params["max_iters"] = cfg.max_iters;
  doc.params["seed"] = cfg.seed;
  doc.params["tol"] = cfg.tol;

  const auto outcome = search_lower_bound(valid, cfg);
  const auto bound = best_bound(valid);
  std::size_t converged = 0;
  for (bool c : outcome.converged) converged += c ? 1 : 0;

  const bool sandwich = outcome.best_ratio >= 1.0 && outcome.best_ratio <= bound.value + kSandwichTolerance;
  doc.results.push_back({"best_ratio", outcome.best_ratio, bound.value, sandwich,
                         Json{{"witness", outcome.best_sequence.values()},
                              {"n", outcome.n},
                              {"best_restart", outcome.best_restart},
                              {"restarts_run", outcome.restarts_run},
                              {"restarts_converged", converged},
                              {"evaluations", outcome.evaluations}}});
  doc.results.push_back({"best_bound", bound.value, std::nullopt, std::nullopt,
                         Json{{"derivation", bound_to_json(bound)}}});
  doc.results.push_back({"gap", bound.value - outcome.best_ratio, std::nullopt, std::nullopt, Json::object()});
  return finalize(std::move(doc));
}

inline Json witness_json(const Witness& w) {
  Json j{{"a", w.a}};
  if (!w.x.empty()) j["x"] = w.x;
  for (const auto& [k, v] : w.scalars) j[k] = v;
  return j;
}

inline CommandResult cmd_verify(Suite suite, std::size_t trials, std::uint64_t seed, unsigned threads = 0,
                                std::vector<std::string> invocation = {}) {
  ReportDocument doc;
  doc.command = "verify";
  doc.invocation = std::move(invocation);
  doc.timestamp = current_timestamp();
  doc.params = Json{{"suite", std::string(suite_name(suite))}, {"trials", trials}, {"seed", seed}};
  const auto s = run_suite(suite, trials, seed, threads);
  doc.results.push_back({"violations", static_cast<double>(s.violations), 0.0, s.violations == 0,
                         Json{{"trials", s.trials}}});
  Json worst{{"trial", s.worst_trial},
             {"lhs", s.worst.lhs},
             {"rhs", s.worst.rhs},
             {"holds", s.worst.holds},
             {"witness", witness_json(s.worst.witness)}};
  doc.results.push_back({"worst_slack", s.worst_slack, std::nullopt, std::nullopt, std::move(worst)});
  if (suite == Suite::Duality) {
    doc.results.push_back({"max_rel_discrepancy", s.max_rel_discrepancy, kDualityTolerance,
                           s.max_rel_discrepancy <= kDualityTolerance, Json::object()});
  }
  return finalize(std::move(doc));
}

/// Fixed table of headline constants; no randomized content.
inline CommandResult cmd_reproduce(std::vector<std::string> invocation = {}) {
  ReportDocument doc;
  doc.command = "reproduce";
  doc.invocation = std::move(invocation);
  doc.timestamp = current_timestamp();
  BoundEngine engine;
  auto rel_ok = [](double got, double want, double tol) { return relative_difference(got, want) <= tol; };

  const double b122 = bennett_bound({1, 2, 2}).value;
  doc.results.push_back({"bennett(1,2,2)", b122, 4.0, b122 == 4.0});

  const double c122 = engine.composite_bound({1, 2, 2}).value;
  doc.results.push_back({"composite(1,2,2)", c122, std::sqrt(6.0),
                         rel_ok(c122, std::sqrt(6.0), 1e-9) && c122 <= std::sqrt(6.0) + 1e-12});

  const double t66 = three_term_bound(6, 6).value;
  doc.results.push_back({"three_term(6,6)", t66, 4.2, std::abs(t66 - 4.2) <= 1e-12});

  const double cd = c_delta(6, 6, 23.0 / 24.0);
  doc.results.push_back({"c_delta(6,6,23/24)", cd, 4.2, cd < 4.2});

  const auto dm = minimize_c_delta(6, 6);
  doc.results.push_back({"minimize_c_delta(6,6)", dm.c_star, 4.2,
                         dm.c_star < 4.2 && dm.delta_star > dm.interval.lo && dm.delta_star < dm.interval.hi,
                         Json{{"delta_star", dm.delta_star}}});

  for (double q : {1.0, 2.0, 5.0}) {
    const double k = engine.k_r1_bound(1.0, q).value;
    doc.results.push_back({"k_r1(1," + format15(q) + ")", k, 1.0, k == 1.0});
  }

  const double t21 = three_term_bound(2, 1).value;
  doc.results.push_back({"three_term(2,1)", t21, std::cbrt(2.0), std::abs(t21 - std::cbrt(2.0)) <= 1e-12});
  return finalize(std::move(doc));
}

}  // namespace ineqlab::report
