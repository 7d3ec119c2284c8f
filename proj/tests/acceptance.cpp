// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "densops/verify.hpp"

using namespace densops;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::vector<std::string> suites;
  int trials;
};

constexpr double kTimeLimitSeconds = 60.0;

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "adjoint algebra", {"adjoint-involution", "adjoint-antihomomorphism"}, 50},
      {2, "scalar-product duality", {"scalar-product-duality"}, 50},
      {3, "canonical form self-adjoint", {"canonical-self-adjoint"}, 25},
      {4, "uniqueness round trip", {"theorem-uniqueness"}, 25},
      {5, "example cross-check", {"example-crosscheck"}, 10},
      {6, "Lie structure", {"lie-structure"}, 25},
      {7, "Kaluza-Klein extraction", {"kk-extraction"}, 25},
      {8, "projective suite", {"projective"}, 25},
      {9, "covariance suite", {"covariance"}, 25},
      {10, "integrator self-consistency", {"integrator-consistency"}, 50},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    bool ok = true;
    std::string detail;
    for (const auto& name : c.suites) {
      RandomSuiteConfig cfg;
      cfg.seed = 42;
      cfg.trials = c.trials;
      const auto start = std::chrono::steady_clock::now();
      try {
        const SuiteReport r = run_suite(name, cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char buf[160];
        std::snprintf(buf, sizeof buf, " %s[trials=%d residual=%.1e failures=%zu %.2fs]", name.c_str(), r.trials,
                      r.max_residual, r.failures.size(), secs);
        detail += buf;
        if (!r.passed() || secs > kTimeLimitSeconds) ok = false;
        if (!r.passed()) std::fputs(to_text(r).c_str(), stderr);
      } catch (const std::exception& e) {
        detail += " " + name + "[error: " + e.what() + "]";
        ok = false;
      }
    }
    if (!ok) ++failed;
    std::printf("%s criterion %d: %s:%s\n", ok ? "PASS" : "FAIL", c.id, c.title, detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
