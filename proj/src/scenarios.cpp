#include "qfoundry/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <tuple>

#include "qfoundry/errors.hpp"
#include "qfoundry/exec.hpp"
#include "qfoundry/fock.hpp"
#include "qfoundry/hvmodels.hpp"
#include "qfoundry/inequalities.hpp"
#include "qfoundry/popper.hpp"

namespace qfoundry::cli {
namespace {

using report::Column;
using report::Value;
using Row = std::vector<Value>;

constexpr double kDeg = std::numbers::pi / 180.0;

const std::vector<ScenarioSpec> kSpecs = {
    {"lhv-table", "local hidden-variable instruction sets and the 1/3 bound", {}},
    {"polarization-qm",
     "Born-rule same-outcome probability for polarizers at a relative angle",
     {{"theta", "120", "relative polarizer angle on the sphere (deg)", true}}},
    {"chsh",
     "optimized CHSH value for cos(g)|01> - sin(g)|10>",
     {{"gamma", "45", "state angle g (deg); 45 is the singlet", true},
      {"grid-step", "10", "coarse grid step (deg)"},
      {"starts", "12", "refinement starts"}}},
    {"leggett",
     "Leggett inequality scan or crypto-nonlocal model averages",
     {{"mode", "scan", "scan | model"},
      {"phi", "18.8", "analyzer angle (deg)", true},
      {"u", "1,0,2", "source polarization of photon A (model)"},
      {"v", "0,0,1", "source polarization of photon B (model)"},
      {"a", "1,0,0", "analyzer A (model)"},
      {"b", "1,2,0", "analyzer B (model)"},
      {"samples", "1000000", "Monte Carlo samples (model); 0 for analytic only"}}},
    {"kcbs",
     "pentagram contextuality sum",
     {{"theta-offset", "0", "perturbation of the pentagram opening angle (deg)", true}}},
    {"hardy", "single-particle Hardy probabilities", {{"gamma", "22.5", "state angle (deg)", true}}},
    {"hom",
     "two-photon interference of |1,1> at a polarizing or plain beam splitter",
     {{"device", "pbs", "pbs | bs"}, {"angle", "45", "device angle (deg)", true}}},
    {"noon",
     "N00N state amplitudes; N = 1 also entangles two atoms",
     {{"n", "2", "photon number"}, {"n-max", "6", "Fock truncation"}}},
    {"popper",
     "conditional uncertainties of particle 2 after a slit on particle 1",
     {{"sigma-plus", "2", "center-of-mass spread", true},
      {"sigma-minus", "0.25", "relative spread", true},
      {"width", "0.5", "slit width", true},
      {"center", "0", "slit center"},
      {"profile", "gaussian", "gaussian | hard"},
      {"pps", "32", "grid points per smallest length scale"}}},
    {"tlm",
     "TLM correlator inequality",
     {{"source", "singlet-optimal", "singlet-optimal | pr-box | custom | random"},
      {"c00", "0", "custom correlator"},
      {"c01", "0", "custom correlator"},
      {"c10", "0", "custom correlator"},
      {"c11", "0", "custom correlator"},
      {"trials", "10000", "random quantum records"}}},
};

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ValidationError("parameter '" + key + "': " + what);
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) bad(key, "expected a number, got '" + text + "'");
  return v;
}

std::int64_t parse_integer(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) bad(key, "expected an integer, got '" + text + "'");
  return v;
}

class Params {
 public:
  Params(const ScenarioSpec& spec, const std::map<std::string, std::string>& given) {
    for (const auto& [key, value] : given) {
      const bool known = std::any_of(spec.params.begin(), spec.params.end(),
                                     [&](const ParamSpec& p) { return p.key == key; });
      if (!known) bad(key, "unknown for scenario " + spec.name);
    }
    for (const auto& p : spec.params) {
      const auto it = given.find(p.key);
      values_.emplace_back(p.key, it == given.end() ? p.default_value : it->second);
    }
  }

  const std::string& text(const std::string& key) const {
    for (const auto& [k, v] : values_)
      if (k == key) return v;
    bad(key, "not defined");
  }
  void set(const std::string& key, double value) {
    for (auto& [k, v] : values_)
      if (k == key) v = report::format_double(value);
  }

  double number(const std::string& key) const { return parse_number(key, text(key)); }
  std::int64_t integer(const std::string& key, std::int64_t lo, std::int64_t hi) const {
    const std::int64_t v = parse_integer(key, text(key));
    if (v < lo || v > hi) bad(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }
  double positive(const std::string& key) const {
    const double v = number(key);
    if (!(v > 0.0)) bad(key, "must be positive");
    return v;
  }
  const std::string& choice(const std::string& key, std::initializer_list<const char*> options) const {
    const std::string& v = text(key);
    std::string list;
    for (const char* o : options) {
      if (v == o) return v;
      list += list.empty() ? o : std::string(" | ") + o;
    }
    bad(key, "expected " + list + ", got '" + v + "'");
  }
  qcore::MeasurementSetting direction(const std::string& key) const {
    std::array<double, 3> c{};
    std::string_view rest = text(key);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto comma = rest.find(',');
      if ((i < 2) == (comma == std::string_view::npos)) bad(key, "expected three comma-separated components");
      c[i] = parse_number(key, std::string(rest.substr(0, comma)));
      rest = i < 2 ? rest.substr(comma + 1) : std::string_view();
    }
    const qcore::Vec3 v(c[0], c[1], c[2]);
    if (!(v.norm() > 0.0)) bad(key, "direction must be nonzero");
    return qcore::MeasurementSetting::normalized(v);
  }

  report::Fields fields() const {
    report::Fields f;
    for (const auto& [k, v] : values_) f.emplace_back(k, v);
    return f;
  }

 private:
  std::vector<std::pair<std::string, std::string>> values_;
};

// Re-throws library validation errors with the parameter that fed them.
template <class F>
auto with_key(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("parameter '", 0) == 0) throw;
    bad(key, what);
  }
}

std::string vec_text(const qcore::Vec3& v) {
  return report::format_double(v.x()) + " " + report::format_double(v.y()) + " " + report::format_double(v.z());
}

struct Scenario {
  std::vector<Column> columns;
  // Rows for one parameter point.
  std::function<std::vector<Row>(const Params&, report::Fields& summary)> rows;
};

// Evaluates every scan value; rows and the first failure are taken in grid order.
std::vector<Row> scan_points(const Scenario& s, const Params& base, const Scan& scan, report::Fields& summary) {
  const std::vector<double> values = scan.values();
  std::vector<std::vector<Row>> out(values.size());
  std::vector<std::exception_ptr> errors(values.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(values.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      Params p = base;
      p.set(scan.key, values[k]);
      report::Fields ignored;
      out[k] = s.rows(p, ignored);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Row> rows;
  for (auto& r : out) rows.insert(rows.end(), r.begin(), r.end());
  summary.emplace_back("points", static_cast<std::int64_t>(values.size()));
  return rows;
}

// ---------------------------------------------------------------------------

Scenario lhv_table() {
  return {{{"row", "hv::LocalHVTable::kRows"},
           {"setting_1", "hv::LocalHVTable::kRows"},
           {"setting_2", "hv::LocalHVTable::kRows"},
           {"setting_3", "hv::LocalHVTable::kRows"},
           {"same_count", "hv::LocalHVTable::same_count"},
           {"p_same", "hv::lhv_same_probability"}},
          [](const Params&, report::Fields& summary) {
            std::vector<Row> rows;
            for (std::size_t r = 0; r < hv::LocalHVTable::kRowCount; ++r) {
              const auto& row = hv::LocalHVTable::kRows[r];
              auto sign = [](bool pass) { return std::string(pass ? "+" : "-"); };
              rows.push_back({static_cast<std::int64_t>(r + 1), sign(row[0]), sign(row[1]), sign(row[2]),
                              static_cast<std::int64_t>(hv::LocalHVTable::same_count(r)),
                              hv::lhv_same_probability(hv::LocalHVTable::vertex(r))});
            }
            const hv::Fraction m = hv::lhv_minimum_same_probability();
            summary.emplace_back("minimum_p_same", std::to_string(m.numerator) + "/" + std::to_string(m.denominator));
            summary.emplace_back("minimum_p_same_value", m.value());
            return rows;
          }};
}

Scenario polarization_qm() {
  return {{{"theta", "parameter (deg)"},
           {"p_same", "ineq::qm_same_polarization_probability"},
           {"p_both_pass", "ineq::qm_same_polarization_probability"},
           {"cos2", "ineq::qm_same_polarization_probability"},
           {"lhv_bound", "hv::lhv_minimum_same_probability"},
           {"margin", "lhv_bound - p_same"}},
          [](const Params& p, report::Fields&) {
            const double theta = p.number("theta");
            const auto q = with_key("theta", [&] { return ineq::qm_same_polarization_probability(theta * kDeg); });
            const double bound = hv::lhv_minimum_same_probability().value();
            return std::vector<Row>{{theta, q.p_same, q.p_both_pass, q.cos2, bound, bound - q.p_same}};
          }};
}

qcore::StateVector chsh_state(double gamma) {
  qcore::CVector amps = qcore::CVector::Zero(4);
  amps(1) = std::cos(gamma);
  amps(2) = -std::sin(gamma);
  return qcore::StateVector::normalized({2, 2}, amps);
}

Scenario chsh() {
  return {{{"gamma", "parameter (deg)"},
           {"s_max", "ineq::chsh_optimize"},
           {"closed_form", "2 sqrt(1 + sin^2 2g)"},
           {"tsirelson", "2 sqrt 2"},
           {"a0", "ineq::chsh_optimize"},
           {"a1", "ineq::chsh_optimize"},
           {"b0", "ineq::chsh_optimize"},
           {"b1", "ineq::chsh_optimize"}},
          [](const Params& p, report::Fields& summary) {
            const double gamma = p.number("gamma");
            ineq::ChshOptions opt;
            opt.grid_step = p.positive("grid-step") * kDeg;
            opt.starts = static_cast<std::size_t>(p.integer("starts", 1, 1000));
            const auto r = with_key("grid-step", [&] { return ineq::chsh_optimize(chsh_state(gamma * kDeg), opt); });
            summary.emplace_back("grid_points", static_cast<std::int64_t>(r.grid_points));
            const double s2 = std::sin(2.0 * gamma * kDeg);
            return std::vector<Row>{{gamma, r.s_max, 2.0 * std::sqrt(1.0 + s2 * s2), 2.0 * std::sqrt(2.0),
                                     vec_text(r.settings.a[0].direction()), vec_text(r.settings.a[1].direction()),
                                     vec_text(r.settings.b[0].direction()), vec_text(r.settings.b[1].direction())}};
          }};
}

Scenario leggett_scan() {
  return {{{"phi", "parameter (deg)"},
           {"S_QM", "ineq::leggett_quantum_value"},
           {"bound", "ineq::leggett_bound"},
           {"violation", "S_QM - bound"}},
          [](const Params& p, report::Fields&) {
            const double phi = p.number("phi");
            const auto scan = with_key("phi", [&] { return ineq::leggett_violation_scan({phi * kDeg}, Exec::Serial); });
            const auto& r = scan.rows.front();
            return std::vector<Row>{{phi, r.s_qm, r.bound, r.violation}};
          }};
}

Scenario leggett_model() {
  return {{{"method", "hv::leggett_expectations"},
           {"samples", "hv::leggett_expectations"},
           {"mean_a", "hv::leggett_expectations"},
           {"mean_b", "hv::leggett_expectations"},
           {"mean_ab", "hv::leggett_expectations"},
           {"stderr_a", "hv::leggett_expectations"},
           {"stderr_b", "hv::leggett_expectations"},
           {"stderr_ab", "hv::leggett_expectations"},
           {"expected_a", "u.a"},
           {"expected_b", "v.b"},
           {"expected_ab", "-a.b"}},
          nullptr};
}

Scenario kcbs() {
  return {{{"theta_offset", "parameter (deg)"},
           {"adjacent_overlap", "ineq::kcbs_adjacent_overlap"},
           {"value", "ineq::kcbs_value"},
           {"expected", "5 - 4 sqrt 5"},
           {"classical_minimum", "ineq::kcbs_classical_minimum"}},
          [](const Params& p, report::Fields&) {
            const double offset = p.number("theta-offset");
            const auto cfg = ineq::kcbs_build_pentagram(offset * kDeg);
            const double value = with_key("theta-offset", [&] { return ineq::kcbs_value(cfg); });
            return std::vector<Row>{{offset, ineq::kcbs_adjacent_overlap(cfg), value, 5.0 - 4.0 * std::sqrt(5.0),
                                     static_cast<std::int64_t>(ineq::kcbs_classical_minimum())}};
          }};
}

Scenario hardy() {
  return {{{"gamma", "parameter (deg)"},
           {"p1", "ineq::hardy_probabilities"},
           {"p2", "ineq::hardy_probabilities"},
           {"p3", "ineq::hardy_probabilities"},
           {"p4", "ineq::hardy_probabilities"},
           {"p4_closed_form", "ineq::hardy_p4_closed_form"},
           {"separable", "ineq::hardy_probabilities"}},
          [](const Params& p, report::Fields&) {
            const double gamma = p.number("gamma");
            const auto cfg = with_key("gamma", [&] { return ineq::hardy_configuration(gamma * kDeg); });
            const auto h = ineq::hardy_probabilities(cfg);
            return std::vector<Row>{{gamma, h.p1, h.p2, h.p3, h.p4, h.p4_closed_form, h.separable}};
          }};
}

Scenario hom() {
  return {{{"angle", "parameter (deg)"},
           {"amp_20", "fock::apply_rotation"},
           {"amp_11", "fock::apply_rotation"},
           {"amp_02", "fock::apply_rotation"},
           {"coincidence", "fock::coincidence_probability"}},
          [](const Params& p, report::Fields&) {
            const double angle = p.number("angle");
            const bool pbs = p.choice("device", {"pbs", "bs"}) == "pbs";
            const auto rot = pbs ? fock::ModeRotation::pbs(angle * kDeg) : fock::ModeRotation::beam_splitter(angle * kDeg);
            const fock::ModeLabels in = pbs ? fock::ModeLabels{"H", "V"} : fock::ModeLabels{"a", "b"};
            const fock::ModeLabels out = pbs ? fock::ModeLabels{"A", "D"} : fock::ModeLabels{"c", "d"};
            const auto s = fock::apply_rotation(fock::FockState::number(1, 1, fock::kDefaultNMax, in), rot, out);
            // Amplitudes stay real for real rotation matrices.
            return std::vector<Row>{{angle, s.amplitude(2, 0).real(), s.amplitude(1, 1).real(),
                                     s.amplitude(0, 2).real(), fock::coincidence_probability(s)}};
          }};
}

Scenario noon() {
  return {{{"n_a", "fock::noon"}, {"n_b", "fock::noon"}, {"amplitude", "fock::noon"}},
          [](const Params& p, report::Fields& summary) {
            const auto n_max = p.integer("n-max", 1, 40);
            const auto n = p.integer("n", 1, n_max);
            const auto s = fock::noon(static_cast<int>(n), static_cast<int>(n_max));
            std::vector<Row> rows;
            for (const auto& [occ, amp] : s.terms())
              rows.push_back({static_cast<std::int64_t>(occ.first), static_cast<std::int64_t>(occ.second), amp.real()});
            if (n == 1) {
              const auto atoms = fock::photon_atoms_entangle(s);
              const auto rho = qcore::partial_trace(qcore::DensityMatrix::from_state(atoms), 0);
              summary.emplace_back("atom_entropy_bits", qcore::entropy_bits(rho));
            }
            return rows;
          }};
}

// Slit scans reuse the unconditioned spreads, which depend only on the state and grid.
class UnconditionedCache {
 public:
  popper::Uncertainties get(const popper::GaussianPairState& state, const popper::GridSpec& grid) {
    const Key key{state.sigma_plus, state.sigma_minus, grid.points_per_scale};
    {
      std::lock_guard lock(mutex_);
      if (const auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const auto u = popper::unconditioned_uncertainties(state, grid);
    std::lock_guard lock(mutex_);
    values_.emplace(key, u);
    return u;
  }

 private:
  using Key = std::tuple<double, double, int>;
  std::mutex mutex_;
  std::map<Key, popper::Uncertainties> values_;
};

Scenario popper_scenario() {
  return {{{"sigma_plus", "parameter"},
           {"sigma_minus", "parameter"},
           {"width", "parameter"},
           {"profile", "parameter"},
           {"dx", "popper::conditional_uncertainties"},
           {"dp", "popper::conditional_uncertainties"},
           {"product", "popper::conditional_uncertainties"},
           {"product_over_bound", "product / 0.5"},
           {"dx_unconditioned", "popper::unconditioned_uncertainties"},
           {"dp_unconditioned", "popper::unconditioned_uncertainties"},
           {"product_unconditioned", "popper::unconditioned_uncertainties"},
           {"points", "popper::conditional_uncertainties"},
           {"norm_drift", "popper::conditional_uncertainties"}},
          [cache = std::make_shared<UnconditionedCache>()](const Params& p, report::Fields&) {
            const popper::GaussianPairState state{p.positive("sigma-plus"), p.positive("sigma-minus")};
            const std::string& profile = p.choice("profile", {"gaussian", "hard"});
            const popper::SlitCondition slit{p.number("center"), p.positive("width"),
                                             profile == "hard" ? popper::SlitProfile::Hard
                                                               : popper::SlitProfile::Gaussian};
            const popper::GridSpec grid{static_cast<int>(p.integer("pps", 16, 4096)), 8.0};
            const auto c = with_key("pps", [&] { return popper::conditional_uncertainties(state, slit, grid); });
            const auto u = with_key("pps", [&] { return cache->get(state, grid); });
            return std::vector<Row>{{state.sigma_plus, state.sigma_minus, slit.width, profile, c.dx, c.dp, c.product,
                                     c.product / 0.5, u.dx, u.dp, u.product, static_cast<std::int64_t>(c.points),
                                     c.norm_drift}};
          }};
}

Scenario tlm(bool random) {
  std::vector<Column> cols{{"record", "source"}};
  if (!random)
    for (const char* c : {"c00", "c01", "c10", "c11"}) cols.push_back({c, "ineq::CorrelationRecord"});
  cols.push_back({"chsh", random ? "ineq::random_quantum_trials" : "ineq::chsh_value"});
  for (const char* c : {"lhs", "rhs", "satisfied"}) cols.push_back({c, "ineq::tlm_check"});
  return {cols, nullptr};
}

Row tlm_row(const std::string& name, const ineq::CorrelationRecord& r) {
  const auto t = ineq::tlm_check(r);
  return {name, r.c[0][0], r.c[0][1], r.c[1][0], r.c[1][1], ineq::chsh_value(r), t.lhs, t.rhs, t.satisfied};
}

ineq::CorrelationRecord singlet_optimal_record() {
  const double h = 1.0 / std::sqrt(2.0);
  using qcore::MeasurementSetting;
  using qcore::Vec3;
  return ineq::quantum_record(qcore::singlet(), {MeasurementSetting(Vec3(1, 0, 0)), MeasurementSetting(Vec3(0, 0, 1))},
                              {MeasurementSetting(Vec3(-h, 0, -h)), MeasurementSetting(Vec3(-h, 0, h))});
}

std::vector<Row> tlm_rows(const Params& p, std::uint64_t seed, report::Fields& summary) {
  const std::string& source = p.choice("source", {"singlet-optimal", "pr-box", "custom", "random"});
  if (source == "singlet-optimal") return {tlm_row(source, singlet_optimal_record())};
  if (source == "pr-box") return {tlm_row(source, ineq::CorrelationRecord::pr_box())};
  if (source == "custom") {
    std::array<std::array<double, 2>, 2> c{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const std::string key = "c" + std::to_string(i) + std::to_string(j);
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = p.number(key);
      }
    const auto r = with_key("c00", [&] { return ineq::CorrelationRecord::from(c); });
    return {tlm_row(source, r)};
  }
  const auto trials = static_cast<std::size_t>(p.integer("trials", 1, 100000000));
  const auto outcomes = ineq::random_quantum_trials(trials, seed, Exec::Parallel);
  std::vector<Row> rows;
  rows.reserve(outcomes.size());
  std::int64_t violations = 0;
  double worst = -1e300, chsh_max = 0.0;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const auto& o = outcomes[k];
    rows.push_back({"trial " + std::to_string(k), o.chsh_max, o.tlm.lhs, o.tlm.rhs, o.tlm.satisfied});
    violations += o.tlm.satisfied ? 0 : 1;
    worst = std::max(worst, o.tlm.lhs - o.tlm.rhs);
    chsh_max = std::max(chsh_max, o.chsh_max);
  }
  summary.emplace_back("violations", violations);
  summary.emplace_back("max_lhs_minus_rhs", worst);
  summary.emplace_back("max_chsh", chsh_max);
  return rows;
}

std::vector<Row> leggett_model_rows(const Params& p, std::uint64_t seed, report::Fields& summary) {
  const hv::LeggettModelParams m{p.direction("u"), p.direction("v"), p.direction("a"), p.direction("b")};
  const auto samples = p.integer("samples", 0, std::int64_t{1} << 40);
  auto row = [&](const std::string& method, const hv::Expectations& e) {
    return Row{method, static_cast<std::int64_t>(e.samples), e.mean_a, e.mean_b, e.mean_ab, e.stderr_a,
               e.stderr_b, e.stderr_ab, m.u.dot(m.a), m.v.dot(m.b), -m.a.dot(m.b)};
  };
  std::vector<Row> rows;
  try {
    rows.push_back(row("analytic", hv::leggett_expectations(m, hv::Analytic{})));
    if (samples > 0)
      rows.push_back(row("monte-carlo",
                         hv::leggett_expectations(m, hv::MonteCarlo{static_cast<std::uint64_t>(samples), seed})));
  } catch (const ModelInconsistent& e) {
    throw ModelInconsistent(std::string("parameters 'u', 'v', 'a', 'b': ") + e.what());
  }
  const auto th = hv::leggett_thresholds(m);
  summary.emplace_back("lambda_a", th.lambda_a);
  summary.emplace_back("x1", th.x1);
  summary.emplace_back("x2", th.x2);
  return rows;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

const std::vector<ScenarioSpec>& scenario_specs() { return kSpecs; }

const ScenarioSpec& scenario_spec(const std::string& name) {
  for (const auto& s : kSpecs)
    if (s.name == name) return s;
  throw ValidationError("unknown scenario '" + name + "'");
}

Scan Scan::parse(const std::string& key, const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
    bad(key, "scan range must be lo:hi:step, got '" + text + "'");
  const std::string scan_key = "scan-" + key;
  Scan s{key, parse_number(scan_key, text.substr(0, c1)), parse_number(scan_key, text.substr(c1 + 1, c2 - c1 - 1)),
         parse_number(scan_key, text.substr(c2 + 1))};
  if (!(s.step > 0.0)) bad(scan_key, "step must be positive");
  if (s.hi < s.lo) bad(scan_key, "hi must not be below lo");
  if ((s.hi - s.lo) / s.step > 1e7) bad(scan_key, "more than 10^7 points");
  return s;
}

std::vector<double> Scan::values() const {
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + static_cast<double>(i) * step;
  return v;
}

Evaluation evaluate(const ScenarioConfig& config) {
  const ScenarioSpec& spec = scenario_spec(config.scenario);
  const Params params(spec, config.params);
  if (config.scan) {
    const auto it = std::find_if(spec.params.begin(), spec.params.end(),
                                 [&](const ParamSpec& p) { return p.key == config.scan->key; });
    if (it == spec.params.end() || !it->scannable)
      bad("scan-" + config.scan->key, "not a scannable parameter of " + spec.name);
    if (config.params.count(config.scan->key))
      bad(config.scan->key, "given both as a value and as a scan");
  }
  set_jobs(config.jobs);

  Evaluation ev;
  ev.meta.scenario = spec.name;
  ev.meta.seed = config.seed;
  ev.meta.params = params.fields();
  if (config.scan) {
    for (auto& [k, v] : ev.meta.params)
      if (k == config.scan->key) v = std::string("scan");
    ev.meta.grid = {{"parameter", config.scan->key},
                    {"lo", config.scan->lo},
                    {"hi", config.scan->hi},
                    {"step", config.scan->step}};
  }

  Scenario s;
  std::vector<Row> rows;
  report::Fields& summary = ev.meta.summary;
  const std::string& name = spec.name;
  if (name == "lhv-table") s = lhv_table();
  else if (name == "polarization-qm") s = polarization_qm();
  else if (name == "chsh") s = chsh();
  else if (name == "kcbs") s = kcbs();
  else if (name == "hardy") s = hardy();
  else if (name == "hom") s = hom();
  else if (name == "noon") s = noon();
  else if (name == "popper") s = popper_scenario();
  else if (name == "tlm") {
    s = tlm(params.text("source") == "random");
    rows = tlm_rows(params, config.seed, summary);
  } else if (name == "leggett") {
    if (params.choice("mode", {"scan", "model"}) == "model") {
      if (config.scan) bad("scan-phi", "only available in scan mode");
      s = leggett_model();
      rows = leggett_model_rows(params, config.seed, summary);
    } else if (config.scan) {
      // Dedicated path: the library scan kernel is already parallel over phi.
      s = leggett_scan();
      std::vector<double> phis = config.scan->values();
      for (double& phi : phis) phi *= kDeg;
      const auto scan = with_key("scan-phi", [&] { return ineq::leggett_violation_scan(phis, Exec::Parallel); });
      for (const auto& r : scan.rows) rows.push_back({r.phi / kDeg, r.s_qm, r.bound, r.violation});
      const auto& best = scan.rows[scan.argmax];
      summary.emplace_back("points", static_cast<std::int64_t>(scan.rows.size()));
      summary.emplace_back("argmax_phi", best.phi / kDeg);
      summary.emplace_back("max_violation", best.violation);
      summary.emplace_back("stationary_phi", ineq::leggett_gap_root() / kDeg);
      s.rows = nullptr;
    } else {
      s = leggett_scan();
    }
  }

  if (s.rows) rows = config.scan ? scan_points(s, params, *config.scan, summary) : s.rows(params, summary);
  ev.table.columns = s.columns;
  for (auto& r : rows) ev.table.add_row(std::move(r));
  return ev;
}

int run(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
  Evaluation ev;
  try {
    ev = evaluate(config);
  } catch (const ModelInconsistent& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResolutionError& e) {
    err << "error: parameter 'pps': " << e.what() << '\n';
    return 2;
  } catch (const TruncationOverflow& e) {
    err << "error: parameter 'n-max': " << e.what() << '\n';
    return 2;
  }

  const std::string body =
      config.format == Format::Json ? report::to_json(ev.table, ev.meta) : report::to_csv(ev.table);
  try {
    if (config.output.empty()) {
      out << body;
    } else {
      write_file(config.output, body);
      if (config.format == Format::Csv) write_file(config.output + ".meta.json", report::meta_json(ev.table, ev.meta));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qfoundry::cli
