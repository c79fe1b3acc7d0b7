#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaplab/density.hpp"
#include "gaplab/gap_process.hpp"
#include "gaplab/matrix_sampler.hpp"
#include "gaplab/region.hpp"

namespace gaplab {

// Raised for malformed or inconsistent experiment configurations.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Equilibrium density tabulated on a uniform grid over [lo, hi]; linear
// interpolation between nodes.
struct TabulatedDensity {
  double lo = 0.0, hi = 0.0;
  std::vector<double> values;

  bool operator==(const TabulatedDensity&) const = default;

  DensityFn to_density() const {
    if (values.size() < 2 || !(lo < hi)) throw config_error("psi table needs >= 2 values on lo < hi");
    auto table = *this;
    auto f = [table](double x) {
      const double u = (x - table.lo) / (table.hi - table.lo) * (table.values.size() - 1);
      const auto i = std::min(static_cast<std::size_t>(u), table.values.size() - 2);
      const double w = u - i;
      return (1.0 - w) * table.values[i] + w * table.values[i + 1];
    };
    return DensityFn::user_supplied(f, lo, hi, "tabulated");
  }
};

struct CountSpec {
  std::string id;
  std::vector<std::pair<double, double>> lengths;  // point-process units
  Region region;

  bool operator==(const CountSpec& o) const {
    return id == o.id && lengths == o.lengths && region_equal(region, o.region);
  }

  static bool region_equal(const Region& a, const Region& b) {
    return a.kind == b.kind && a.lo == b.lo && a.hi == b.hi && a.im_lo == b.im_lo && a.im_hi == b.im_hi &&
           a.center == b.center && a.radius == b.radius;
  }
};

struct ExperimentConfig {
  EnsembleSpec ensemble;
  std::optional<double> beta;  // Wishart: m = round(beta n) when m is absent
  std::optional<TabulatedDensity> psi;  // UUE with a non-quadratic potential
  std::int64_t trials = 0;
  std::uint64_t master_seed = 0;
  int k = 1;
  std::optional<std::pair<double, double>> window;  // (a_eps, b_eps)
  std::optional<Region> region;  // base region for complex-plane gaps
  GinibreConstant ginibre_constant = GinibreConstant::Quarter;
  std::vector<CountSpec> counts;
  int parallelism = 1;
  std::string output_dir;

  bool operator==(const ExperimentConfig& o) const {
    const bool regions_match = region.has_value() == o.region.has_value() &&
                               (!region || CountSpec::region_equal(*region, *o.region));
    return ensemble == o.ensemble && beta == o.beta && psi == o.psi && trials == o.trials &&
           master_seed == o.master_seed && k == o.k && window == o.window && regions_match &&
           ginibre_constant == o.ginibre_constant && counts == o.counts && parallelism == o.parallelism &&
           output_dir == o.output_dir;
  }

  bool is_complex_plane() const {
    return ensemble.kind == EnsembleKind::Ginibre || ensemble.kind == EnsembleKind::IidDisk;
  }

  // Limiting density of a real-line ensemble.
  DensityFn density() const {
    switch (ensemble.kind) {
      case EnsembleKind::Wishart:
        return DensityFn::marchenko_pastur(static_cast<double>(ensemble.m) / ensemble.n);
      case EnsembleKind::GUE:
        return DensityFn::semicircle(0.5);
      case EnsembleKind::UUE: {
        if (psi) return psi->to_density();
        const auto& c = ensemble.potential;
        std::vector<double> trimmed = c;
        while (!trimmed.empty() && trimmed.back() == 0.0) trimmed.pop_back();
        if (trimmed.size() == 3) return DensityFn::semicircle(trimmed[2]);
        throw config_error("UUE with a non-quadratic potential needs a 'psi' table");
      }
      default:
        throw config_error("density: not a real-line ensemble");
    }
  }

  // Gap window: (a + a_eps, b - b_eps) for real-line ensembles, the
  // configured region (default: everything) for complex-plane ones.
  Region gap_window() const {
    if (is_complex_plane()) return region.value_or(Region::everything());
    const auto [ea, eb] = window.value_or(std::pair{0.05, 0.05});
    return bulk_window(density(), ea, eb);
  }

  Scaling gap_scaling() const {
    const int n = ensemble.n;
    switch (ensemble.kind) {
      case EnsembleKind::Ginibre: return ginibre_scaling(n, ginibre_constant);
      case EnsembleKind::IidDisk: return {std::sqrt(0.5), 1.0, static_cast<double>(n)};
      default: {
        const auto w = gap_window();
        return real_line_scaling(n, density(), w.lo, w.hi);
      }
    }
  }

  // Units in which count lengths are given.
  Scaling point_process_scaling() const {
    const double n = ensemble.n;
    switch (ensemble.kind) {
      case EnsembleKind::Ginibre: return {1.0, 0.75, n};
      case EnsembleKind::IidDisk: return {1.0, 1.0, n};
      default: return {1.0, 4.0 / 3.0, n};
    }
  }

  void validate() const {
    try {
      ensemble.validate();
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
    if (trials < 0) throw config_error("trials must be nonnegative");
    if (k < 1) throw config_error("k must be at least 1");
    if (parallelism < 1) throw config_error("parallelism must be at least 1");
    if (window && is_complex_plane()) throw config_error("'window' applies to real-line ensembles; use 'region'");
    if (region && !is_complex_plane()) throw config_error("'region' applies to complex-plane ensembles; use 'window'");
    try {
      (void)gap_window();
      (void)gap_scaling();
    } catch (const config_error&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
    for (const auto& c : counts) {
      if (c.id.empty()) throw config_error("count regions need an id");
      try {
        LengthSet check(c.lengths);
      } catch (const std::invalid_argument& e) {
        throw config_error("count '" + c.id + "': " + e.what());
      }
    }
  }
};

// ---------------------------------------------------------------------------
// JSON mapping.

inline nlohmann::json region_to_json(const Region& r) {
  switch (r.kind) {
    case Region::Kind::Everything: return {{"kind", "everything"}};
    case Region::Kind::RealInterval: return {{"kind", "interval"}, {"lo", r.lo}, {"hi", r.hi}};
    case Region::Kind::Disk:
      return {{"kind", "disk"}, {"center", {r.center.real(), r.center.imag()}}, {"radius", r.radius}};
    case Region::Kind::Rect: return {{"kind", "rect"}, {"re", {r.lo, r.hi}}, {"im", {r.im_lo, r.im_hi}}};
  }
  return {};
}

inline Region region_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "everything") return Region::everything();
  if (kind == "interval") return Region::interval(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (kind == "disk") {
    const auto c = j.value("center", std::vector<double>{0.0, 0.0});
    if (c.size() != 2) throw config_error("disk center must be [re, im]");
    return Region::disk({c[0], c[1]}, j.at("radius").get<double>());
  }
  if (kind == "rect") {
    const auto re = j.at("re").get<std::vector<double>>(), im = j.at("im").get<std::vector<double>>();
    if (re.size() != 2 || im.size() != 2) throw config_error("rect needs re: [lo, hi] and im: [lo, hi]");
    return Region::rect(re[0], re[1], im[0], im[1]);
  }
  throw config_error("unknown region kind '" + kind + "'");
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json e = {{"kind", to_string(c.ensemble.kind)}, {"n", c.ensemble.n}};
  if (c.ensemble.kind == EnsembleKind::Wishart) e["m"] = c.ensemble.m;
  if (c.beta) e["beta"] = *c.beta;
  if (c.ensemble.kind == EnsembleKind::UUE) {
    e["potential"] = c.ensemble.potential;
    e["mcmc"] = {{"step_scale", c.ensemble.mcmc.step_scale},
                 {"burn_in", c.ensemble.mcmc.burn_in},
                 {"thinning", c.ensemble.mcmc.thinning}};
  }
  if (c.psi) e["psi"] = {{"lo", c.psi->lo}, {"hi", c.psi->hi}, {"values", c.psi->values}};
  nlohmann::json j = {{"ensemble", e},
                      {"trials", c.trials},
                      {"master_seed", c.master_seed},
                      {"k", c.k},
                      {"scaling", {{"ginibre_constant", to_string(c.ginibre_constant)}}},
                      {"parallelism", c.parallelism}};
  if (c.window) j["window"] = {{"a_eps", c.window->first}, {"b_eps", c.window->second}};
  if (c.region) j["region"] = region_to_json(*c.region);
  if (!c.counts.empty()) {
    j["counts"] = nlohmann::json::array();
    for (const auto& cs : c.counts) {
      nlohmann::json lens = nlohmann::json::array();
      for (auto [lo, hi] : cs.lengths) lens.push_back({lo, hi});
      j["counts"].push_back({{"id", cs.id}, {"lengths", lens}, {"region", region_to_json(cs.region)}});
    }
  }
  if (!c.output_dir.empty()) j["output_dir"] = c.output_dir;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig c;
    const auto& e = j.at("ensemble");
    c.ensemble.kind = ensemble_kind_from_string(e.at("kind").get<std::string>());
    c.ensemble.n = e.at("n").get<int>();
    if (e.contains("beta")) c.beta = e.at("beta").get<double>();
    if (c.ensemble.kind == EnsembleKind::Wishart) {
      if (e.contains("m"))
        c.ensemble.m = e.at("m").get<int>();
      else if (c.beta)
        c.ensemble.m = static_cast<int>(std::lround(*c.beta * c.ensemble.n));
      else
        throw config_error("Wishart ensemble needs 'm' or 'beta'");
    }
    if (e.contains("potential")) c.ensemble.potential = e.at("potential").get<std::vector<double>>();
    if (e.contains("mcmc")) {
      const auto& m = e.at("mcmc");
      c.ensemble.mcmc.step_scale = m.value("step_scale", 0.0);
      c.ensemble.mcmc.burn_in = m.value("burn_in", 2000);
      c.ensemble.mcmc.thinning = m.value("thinning", 50);
    }
    if (e.contains("psi")) {
      const auto& p = e.at("psi");
      c.psi = TabulatedDensity{p.at("lo").get<double>(), p.at("hi").get<double>(),
                               p.at("values").get<std::vector<double>>()};
    }
    c.trials = j.value("trials", std::int64_t{0});
    c.master_seed = j.value("master_seed", std::uint64_t{0});
    c.k = j.value("k", 1);
    if (j.contains("window"))
      c.window = std::pair{j.at("window").value("a_eps", 0.05), j.at("window").value("b_eps", 0.05)};
    if (j.contains("region")) c.region = region_from_json(j.at("region"));
    if (j.contains("scaling"))
      c.ginibre_constant = ginibre_constant_from_string(j.at("scaling").value("ginibre_constant", "quarter"));
    c.parallelism = j.value("parallelism", 1);
    if (j.contains("counts")) {
      for (const auto& cj : j.at("counts")) {
        CountSpec cs;
        cs.id = cj.at("id").get<std::string>();
        for (const auto& l : cj.at("lengths")) {
          const auto v = l.get<std::vector<double>>();
          if (v.size() != 2) throw config_error("count lengths must be [lo, hi] pairs");
          cs.lengths.emplace_back(v[0], v[1]);
        }
        cs.region = cj.contains("region") ? region_from_json(cj.at("region")) : Region::everything();
        c.counts.push_back(std::move(cs));
      }
    }
    c.output_dir = j.value("output_dir", std::string{});
    c.validate();
    return c;
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(std::string("invalid config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

}  // namespace gaplab
