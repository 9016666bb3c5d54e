// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "ineqlab/ineqlab.hpp"

namespace {

using namespace ineqlab;

struct Criterion {
  int id;
  std::string title;
  std::function<bool(std::string&)> check;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

unsigned threads() {
  const char* env = std::getenv("INEQLAB_THREADS");
  return env ? static_cast<unsigned>(std::strtoul(env, nullptr, 10)) : 0;
}

const double kSqrt6 = std::sqrt(6.0);
const double kCbrt2 = std::cbrt(2.0);

bool suite_clean(Suite s, std::size_t trials, std::uint64_t seed, std::string& note) {
  const auto r = run_suite(s, trials, seed, threads());
  note += std::string(suite_name(s)) + ": " + std::to_string(r.violations) + "/" + std::to_string(r.trials) +
          " violations" + fmt(", worst rel slack %.3e; ", r.worst_slack);
  return r.violations == 0 && r.trials == trials;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "Bennett bound at (1,2,2) equals 4 exactly",
       [](std::string& note) {
         const double v = bennett_bound({1, 2, 2}).value;
         note = fmt("value %.17g", v);
         return v == 4.0;
       }},
      {2, "composite bound at (1,2,2) is sqrt(6) within 1e-9 relative and <= sqrt(6)+1e-12",
       [](std::string& note) {
         const double v = composite_bound({1, 2, 2}).value;
         note = fmt("value %.17g, rel err %.3e", v, relative_difference(v, kSqrt6));
         return relative_difference(v, kSqrt6) <= 1e-9 && v <= kSqrt6 + 1e-12;
       }},
      {3, "three-term bound (6,6) = 4.2; C(6,6,23/24) < 4.2; delta-minimum < 4.2 at interior delta",
       [](std::string& note) {
         const double t = three_term_bound(6, 6).value;
         const double c = c_delta(6, 6, 23.0 / 24.0);
         const auto m = minimize_c_delta(6, 6);
         note = fmt("three-term %.17g, C(23/24) %.15g, ", t, c) +
                fmt("c* %.15g at delta* %.12g in (%.12g, 1)", m.c_star, m.delta_star, m.interval.lo);
         return std::abs(t - 4.2) <= 1e-12 && c < 4.2 && m.c_star < 4.2 && m.delta_star > m.interval.lo &&
                m.delta_star < m.interval.hi;
       }},
      {4, "K(1,q,1) bound is exactly 1 and search stays within [1, 1+1e-6]",
       [](std::string& note) {
         bool ok = true;
         for (double q : {0.5, 1.0, 2.0, 5.0, 10.0}) {
           const double k = k_r1_bound(1, q).value;
           SearchConfig cfg;
           cfg.seed = 7;
           cfg.threads = threads();
           const double found = search_lower_bound({1, q, 1}, cfg).best_ratio;
           note += fmt("q=%g: bound %.17g, search %.17g; ", q, k, found);
           ok = ok && k == 1.0 && found >= 1.0 && found <= 1.0 + 1e-6;
         }
         return ok;
       }},
      {5, "three-term bound (2,1) = 2^(1/3) within 1e-12 (middle term) and covers the interchanged form",
       [](std::string& note) {
         const auto b = three_term_bound(2, 1);
         note = fmt("value %.17g, winning term %g", b.value, b.detail.at("winning_term"));
         // The interchanged form is the (2,1,1) instance, so its constant is this bound.
         const double best211 = best_bound({2, 1, 1}).value;
         note += fmt(", best bound (2,1,1) %.17g", best211);
         return std::abs(b.value - kCbrt2) <= 1e-12 && b.detail.at("winning_term") == 2 &&
                best211 <= kCbrt2 + 1e-12;
       }},
      {6, "composite bound <= Bennett bound + 1e-9 on the full reference grid",
       [](std::string& note) {
         BoundEngine engine;
         std::size_t checked = 0;
         double worst = -INFINITY;
         for (const auto& pr : reference_grid()) {
           if (pr.p == 1.0 && pr.r == 1.0) continue;
           const double diff = engine.composite_bound(pr).value - bennett_bound(pr).value;
           worst = std::max(worst, diff);
           ++checked;
         }
         note = fmt("%g triples, max(composite - bennett) = %.3e", static_cast<double>(checked), worst);
         return checked > 0 && worst <= 1e-9;
       }},
      {7, "dominance fuzz: 10^4 random instances satisfy ratio <= best bound",
       [](std::string& note) { return suite_clean(Suite::Eq2Dominance, 10000, 1, note); }},
      {8, "lemma suites copson, copson-dual, tail, tail-finite at 10^4 trials: zero violations",
       [](std::string& note) {
         bool ok = true;
         for (Suite s : {Suite::Copson, Suite::CopsonDual, Suite::Tail, Suite::TailFinite}) {
           ok = suite_clean(s, 10000, 1, note) && ok;
         }
         return ok;
       }},
      {9, "duality identity on 10^3 random instances within 1e-12 relative",
       [](std::string& note) {
         const auto r = run_suite(Suite::Duality, 1000, 1, threads());
         note = fmt("max rel discrepancy %.3e", r.max_rel_discrepancy);
         return r.violations == 0 && r.max_rel_discrepancy <= 1e-12;
       }},
      {10, "endpoint identities of C(p,q,delta) within 1e-10 relative on the (p,q) grid",
       [](std::string& note) {
         double worst = 0.0;
         for (double p : {1.5, 2.0, 6.0, 10.0}) {
           for (double q : {0.5, 1.0, 3.0, 6.0}) {
             const double lo = DeltaInterval::for_params(p, q).lo;
             const double third = (1 + (p - 1) * q / (p + q)) * (1 + p / (q * (p - 1)));
             worst = std::max(worst, relative_difference(c_delta(p, q, lo), std::pow(p, lo)));
             worst = std::max(worst, relative_difference(c_delta(p, q, 1.0), third));
           }
         }
         note = fmt("max rel error %.3e", worst);
         return worst <= 1e-10;
       }},
      {11, "interchanged (2,1,1) form <= 2^(1/3) and prefix-power (3,2,1) form on 10^3 random sequences",
       [](std::string& note) {
         const bool a = suite_clean(Suite::Eq3, 1000, 1, note);
         const bool b = suite_clean(Suite::Eq4, 1000, 1, note);
         return a && b;
       }},
  };

  int failures = 0;
  const auto start = std::chrono::steady_clock::now();
  for (auto& c : criteria) {
    std::string note;
    bool ok = false;
    try {
      ok = c.check(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    std::printf("[%s] AC%-2d %s\n        %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), note.c_str());
    if (!ok) ++failures;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures, criteria.size(),
              secs);
  return failures == 0 ? 0 : 1;
}
