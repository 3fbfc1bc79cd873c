// One line per acceptance criterion. Criteria 1-11 come from the first verify_all run with its
// wall times checked against the budgets; criterion 12 reruns verify_all and compares the text.

#include <cstdio>
#include <string>
#include <vector>

#include "qfoundry/verify.hpp"

namespace {

// Seconds; 0 means no budget.
constexpr double kBudget[qfoundry::verify::kCheckCount + 1] = {0, 1, 1, 0, 30, 10, 60, 1, 5, 0, 0, 120, 0};

}  // namespace

int main() {
  using namespace qfoundry::verify;
  std::vector<double> seconds(kCheckCount + 1, 0.0);
  const Report first = verify_all({}, [&](const Check& c, double s) { seconds[static_cast<std::size_t>(c.id)] = s; });
  const Report second = verify_all();

  int failed = 0;
  for (const Check& c : first.checks) {
    const double budget = kBudget[c.id];
    const double t = seconds[static_cast<std::size_t>(c.id)];
    bool pass = c.pass && (budget == 0 || t < budget);
    std::string note = c.measured;
    if (c.id == kCheckCount) {
      const bool same = first.text() == second.text();
      pass = pass && same;
      note += same ? "; verify_all reports byte-identical" : "; verify_all reports differ";
    }
    if (budget > 0 && t >= budget) note += "; over budget";
    std::printf("%s criterion %2d %-18s %8.3f s  %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), t,
                note.c_str());
    failed += pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", kCheckCount - failed, kCheckCount);
  return failed == 0 ? 0 : 1;
}
