#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gaplab/config.hpp"
#include "gaplab/correlation_oracle.hpp"
#include "gaplab/eigensolver.hpp"
#include "gaplab/errors.hpp"
#include "gaplab/gap_process.hpp"
#include "gaplab/kernel_engine.hpp"
#include "gaplab/limit_laws.hpp"
#include "gaplab/matrix_sampler.hpp"
#include "gaplab/rng.hpp"
#include "gaplab/stats_tests.hpp"

namespace gaplab {

inline constexpr int kSchemaVersion = 1;

struct TrialResult {
  std::int64_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<double> t;  // k smallest raw gaps
  std::vector<double> tau;  // rescaled
  std::vector<std::complex<double>> bases;
  std::vector<std::int64_t> counts;  // aligned with config.counts
  std::optional<double> acceptance_rate;
  bool acceptance_warning = false;
};

struct ExperimentRun {
  ExperimentConfig config;
  std::vector<TrialResult> trials;  // ordered by trial index
  std::vector<TestReport> summary;
  std::int64_t failed = 0;
  bool valid = true;
  double wall_clock_seconds = 0.0;
};

inline IntensityEnsemble intensity_ensemble(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::Ginibre: return IntensityEnsemble::Ginibre;
    case EnsembleKind::IidDisk: return IntensityEnsemble::IidDisk;
    case EnsembleKind::Wishart: return IntensityEnsemble::Wishart;
    default: return IntensityEnsemble::UUE;
  }
}

// Limiting Poisson mean of a configured count region.
inline double count_intensity(const ExperimentConfig& c, const CountSpec& cs) {
  IntensityQuery q;
  q.ensemble = intensity_ensemble(c.ensemble.kind);
  q.lengths = LengthSet(cs.lengths);
  q.region = cs.region;
  if (c.ensemble.kind == EnsembleKind::Wishart) q.beta = static_cast<double>(c.ensemble.m) / c.ensemble.n;
  if (!c.is_complex_plane()) {
    q.psi = c.density();
    q.eps0 = 0.0;
  }
  return poisson_intensity(q);
}

// Limiting CDF of the ℓ-th rescaled gap.
inline std::function<double(double)> gap_target_cdf(const ExperimentConfig& c, int ell) {
  if (c.ensemble.kind == EnsembleKind::IidDisk)
    return [ell](double x) { return x <= 0.0 ? 0.0 : regularized_gamma_p(static_cast<double>(ell), x * x); };
  const LimitLaw law(c.ensemble.kind == EnsembleKind::Ginibre ? 4 : 3, ell);
  return [law](double x) { return law.cdf(x); };
}

inline std::string gap_target_description(const ExperimentConfig& c, int ell) {
  const int q = c.ensemble.kind == EnsembleKind::Ginibre ? 4 : c.ensemble.kind == EnsembleKind::IidDisk ? 2 : 3;
  return fmt::format("P({}, x^{})", ell, q);
}

inline TrialResult run_trial(const ExperimentConfig& c, std::int64_t index, const Region& window,
                             const Scaling& scaling, const Scaling& pp_scaling) {
  TrialResult r;
  r.index = index;
  r.seed = split_seed(c.master_seed, static_cast<std::uint64_t>(index));
  try {
    const auto s = sample(c.ensemble, r.seed);
    r.acceptance_rate = s.acceptance_rate;
    r.acceptance_warning = s.acceptance_warning;
    const Spectrum spec = spectrum_of(s);
    const GapMode mode = c.is_complex_plane() ? GapMode::UnorderedPair : GapMode::Consecutive;
    const auto st = rescale_gaps(k_smallest_gaps(spec, static_cast<std::size_t>(c.k), mode, window), scaling);
    r.t = st.raw;
    r.tau = st.scaled;
    for (const auto& rec : st.records) r.bases.push_back(rec.base);
    if (!c.counts.empty()) {
      const auto records = c.is_complex_plane() ? successor_gaps(spec) : consecutive_gaps(spec);
      for (const auto& cs : c.counts)
        r.counts.push_back(static_cast<std::int64_t>(count_in_region(records, LengthSet(cs.lengths), cs.region, pp_scaling)));
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    r.t.clear();
    r.tau.clear();
    r.bases.clear();
    r.counts.clear();
  }
  return r;
}

inline std::vector<TestReport> summarize(const ExperimentConfig& c, const std::vector<TrialResult>& trials) {
  std::vector<TestReport> out;
  for (int ell = 1; ell <= c.k; ++ell) {
    std::vector<double> v;
    for (const auto& t : trials)
      if (t.ok) v.push_back(t.tau[ell - 1]);
    if (v.size() < 50) continue;
    auto rep = ks_test(SampleSet::from_unsorted(std::move(v)), gap_target_cdf(c, ell), gap_target_description(c, ell));
    rep.name = fmt::format("ks_tau{}", ell);
    out.push_back(std::move(rep));
  }
  if (c.ensemble.kind == EnsembleKind::Ginibre) {
    // Same data under the other normalization constant.
    const auto other = c.ginibre_constant == GinibreConstant::Quarter ? GinibreConstant::PiQuarter : GinibreConstant::Quarter;
    const double ratio = ginibre_scaling(c.ensemble.n, other).c / ginibre_scaling(c.ensemble.n, c.ginibre_constant).c;
    std::vector<double> v;
    for (const auto& t : trials)
      if (t.ok) v.push_back(t.tau[0] * ratio);
    if (v.size() >= 50) {
      auto rep = ks_test(SampleSet::from_unsorted(std::move(v)), gap_target_cdf(c, 1), gap_target_description(c, 1));
      rep.name = "ks_tau1_" + to_string(other);
      out.push_back(std::move(rep));
    }
  }
  for (std::size_t i = 0; i < c.counts.size(); ++i) {
    std::vector<std::int64_t> counts;
    for (const auto& t : trials)
      if (t.ok) counts.push_back(t.counts[i]);
    if (counts.empty()) continue;
    const double mu = count_intensity(c, c.counts[i]);
    auto fm = factorial_moment_test(counts, mu, 3);
    fm.name = "factorial_moments_" + c.counts[i].id;
    out.push_back(std::move(fm));
    if (counts.size() >= 100) {
      auto disp = poisson_dispersion_test(counts);
      disp.name = "dispersion_" + c.counts[i].id;
      out.push_back(std::move(disp));
    }
  }
  return out;
}

// sample -> eigenvalues -> gaps -> rescale for every trial, in parallel over
// a fixed worker pool. Results are stored by trial index, so the output does
// not depend on scheduling.
inline ExperimentRun run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentRun run;
  run.config = config;
  run.trials.resize(static_cast<std::size_t>(config.trials));
  const Region window = config.gap_window();
  const Scaling scaling = config.gap_scaling();
  const Scaling pp = config.point_process_scaling();
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t i = next++; i < config.trials; i = next++)
      run.trials[static_cast<std::size_t>(i)] = run_trial(config, i, window, scaling, pp);
  };
  const int workers = static_cast<int>(std::min<std::int64_t>(config.parallelism, std::max<std::int64_t>(config.trials, 1)));
  if (workers <= 1) {
    worker();
  } else {
    pin_blas_threads();
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& t : run.trials)
    if (!t.ok) ++run.failed;
  run.valid = run.failed * 100 <= config.trials;
  run.summary = summarize(config, run.trials);
  run.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

// ---------------------------------------------------------------------------
// Persistence.

inline nlohmann::json report_to_json(const TestReport& r) {
  nlohmann::json j = {{"name", r.name}, {"statistic", r.statistic}, {"sample_size", r.sample_size}, {"target", r.target}};
  j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
  j["pass"] = r.pass ? nlohmann::json(*r.pass) : nlohmann::json(nullptr);
  if (!r.moments.empty()) {
    j["moments"] = nlohmann::json::array();
    for (const auto& m : r.moments)
      j["moments"].push_back({{"k", m.k},
                              {"mean", m.mean},
                              {"standard_error", m.standard_error},
                              {"target", m.target},
                              {"within", m.within}});
  }
  return j;
}

namespace detail {

inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline std::string gaps_csv(const ExperimentRun& run) {
  std::string s = "trial,seed,ell,t_raw,tau_scaled,base_re,base_im\n";
  for (const auto& t : run.trials) {
    if (!t.ok) continue;
    for (std::size_t l = 0; l < t.t.size(); ++l)
      s += fmt::format("{},{},{},{},{},{},{}\n", t.index, t.seed, l + 1, t.t[l], t.tau[l], t.bases[l].real(),
                       t.bases[l].imag());
  }
  return s;
}

inline std::string counts_csv(const ExperimentRun& run) {
  std::string s = "trial,region_id,count\n";
  for (const auto& t : run.trials) {
    if (!t.ok) continue;
    for (std::size_t i = 0; i < t.counts.size(); ++i)
      s += fmt::format("{},{},{}\n", t.index, run.config.counts[i].id, t.counts[i]);
  }
  return s;
}

inline nlohmann::json run_to_json(const ExperimentRun& run) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_to_json(run.config);
  j["trials"] = run.config.trials;
  j["failed_trials"] = run.failed;
  j["valid"] = run.valid;
  const auto sc = run.config.gap_scaling();
  j["scaling"] = {{"c", sc.c}, {"gamma", sc.gamma}, {"n", sc.n}};
  j["summary"] = nlohmann::json::array();
  for (const auto& r : run.summary) j["summary"].push_back(report_to_json(r));
  j["failures"] = nlohmann::json::array();
  std::int64_t warnings = 0;
  for (const auto& t : run.trials) {
    if (!t.ok) j["failures"].push_back({{"trial", t.index}, {"seed", t.seed}, {"error", t.error}});
    if (t.acceptance_warning) ++warnings;
  }
  if (run.config.ensemble.kind == EnsembleKind::UUE) j["mcmc_acceptance_warnings"] = warnings;
  j["wall_clock_seconds"] = run.wall_clock_seconds;
  j["complete"] = true;
  return j;
}

// Writes gaps.csv and counts.csv, then run.json last; run.json carries the
// "complete" marker, so a directory without it is a partial run.
inline void write_run(const ExperimentRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / "run.json");
  detail::write_atomically(dir / "gaps.csv", gaps_csv(run));
  detail::write_atomically(dir / "counts.csv", counts_csv(run));
  detail::write_atomically(dir / "run.json", run_to_json(run).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Deterministic kernel verification.

struct Verdict {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

inline nlohmann::json verdict_to_json(const Verdict& v) {
  return {{"name", v.name}, {"value", v.value}, {"threshold", v.threshold}, {"pass", v.pass}, {"detail", v.detail}};
}

// Remainder bounds on the fixed grid: the first regime must hold outright,
// the second and third through constants fitted at the smallest n and
// required not to grow with n.
inline std::vector<Verdict> verify_remainder_regimes(const std::vector<int>& ns = {50, 100, 200}) {
  std::vector<Verdict> out;
  bool regime1 = true;
  double worst1 = -INFINITY;
  std::vector<RemainderConstants> fits;
  for (int n : ns) {
    const auto grid = remainder_grid(n);
    for (auto z : grid)
      for (const auto& c : check_remainder_regimes(z, n).checks)
        if (c.regime == 1) {
          regime1 = regime1 && c.satisfied;
          worst1 = std::max(worst1, c.log_actual - c.log_bound);
        }
    fits.push_back(fit_remainder_constants(n, grid));
  }
  out.push_back({"remainder_regime1", worst1, 0.0, regime1, "max log(|R| / bound) over grid and n"});
  bool mono2 = true, mono3 = true;
  std::string d2, d3;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    d2 += fmt::format("{}n={}: C2={:.6g}", i ? ", " : "", ns[i], fits[i].c2);
    d3 += fmt::format("{}n={}: C3={:.6g}", i ? ", " : "", ns[i], fits[i].c3);
    if (i > 0) {
      mono2 = mono2 && fits[i].c2 <= fits[i - 1].c2 * (1.0 + 1e-12);
      mono3 = mono3 && fits[i].c3 <= fits[i - 1].c3 * (1.0 + 1e-12);
    }
  }
  // Frozen constants from the smallest n must cover every larger n.
  bool frozen = true;
  for (std::size_t i = 1; i < ns.size(); ++i)
    for (auto z : remainder_grid(ns[i]))
      for (const auto& c : check_remainder_regimes(z, ns[i], fits[0]).checks)
        if (c.regime != 1) frozen = frozen && c.satisfied;
  out.push_back({"remainder_regime2_constant_nonincreasing", fits.back().c2, fits.front().c2, mono2, d2});
  out.push_back({"remainder_regime3_constant_nonincreasing", fits.back().c3, fits.front().c3, mono3, d3});
  out.push_back({"remainder_frozen_constants_hold", 0.0, 0.0, frozen, "constants fitted at the smallest n"});
  return out;
}

// Christoffel-Darboux closed form against m Σ_{j<n} ψ_j(mx) ψ_j(my).
inline Verdict verify_christoffel_darboux(int n_max = 20) {
  double worst = 0.0;
  std::string where;
  for (int n = 1; n <= n_max; ++n) {
    for (int extra : {0, 5, n}) {
      const int m = n + extra;
      const auto mp = DensityFn::marchenko_pastur(static_cast<double>(m) / n);
      const double lo = std::max(mp.lower(), 0.02), hi = mp.upper();
      std::vector<double> pts;
      for (int i = 0; i < 7; ++i) pts.push_back(lo + (hi - lo) * (i + 0.5) / 7.0);
      for (double x : pts)
        for (double y : pts) {
          double direct = 0.0;
          for (int j = 0; j < n; ++j)
            direct += laguerre_wave_pair(j, m - n, m * x).curr * laguerre_wave_pair(j, m - n, m * y).curr;
          direct *= m;
          const double cd = wishart_kernel(x, y, m, n);
          const double err = std::abs(cd - direct) / std::abs(direct);
          if (err > worst) {
            worst = err;
            where = fmt::format("n={} m={} x={:.4g} y={:.4g}", n, m, x, y);
          }
        }
    }
  }
  return {"christoffel_darboux_identity", worst, 1e-10, worst < 1e-10, "max relative error at " + where};
}

inline std::vector<Verdict> verify_kernels() {
  std::vector<Verdict> out = verify_remainder_regimes();
  out.push_back(verify_christoffel_darboux());
  {
    const double r = rho_k({CorrelationEnsemble::Ginibre, {0.5}, 100}) / 100.0;
    out.push_back({"ginibre_density_inside", std::abs(r - 1.0 / std::numbers::pi), 1e-3,
                   std::abs(r - 1.0 / std::numbers::pi) <= 1e-3, "|rho1/n - 1/pi| at |z|=0.5, n=100"});
    const double o = rho_k({CorrelationEnsemble::Ginibre, {1.5}, 100}) / 100.0;
    out.push_back({"ginibre_density_outside", o, 1e-6, o < 1e-6, "rho1/n at |z|=1.5, n=100"});
  }
  {
    const int n = 500;
    const auto p = pair_determinant_limit(0.0, std::pow(n, -4.0 / 3.0), n, {CorrelationEnsemble::GUE});
    out.push_back({"pair_determinant_gue", p.ratio, 0.05, std::abs(p.ratio - 1.0) <= 0.05, "n=500, x=0, u=n^(-4/3)"});
  }
  {
    const int n = 400;
    const auto p = pair_determinant_limit(1.5, std::pow(n, -4.0 / 3.0), n, {CorrelationEnsemble::Wishart, 2 * n});
    out.push_back({"pair_determinant_wishart", p.ratio, 0.10, std::abs(p.ratio - 1.0) <= 0.10,
                   "beta=2, n=400, x=1.5, u=n^(-4/3)"});
  }
  for (double beta : {1.0, 2.0, 4.0}) {
    const double mass = DensityFn::marchenko_pastur(beta).total_mass();
    out.push_back({fmt::format("density_mass_mp_beta{}", beta), std::abs(mass - 1.0), 1e-6, std::abs(mass - 1.0) < 1e-6,
                   "|integral - 1|"});
  }
  {
    const double mass = DensityFn::semicircle().total_mass();
    out.push_back({"density_mass_semicircle", std::abs(mass - 1.0), 1e-6, std::abs(mass - 1.0) < 1e-6, "|integral - 1|"});
  }
  {
    const double d = gue_kernel(0.0, 0.0, 200) / 200.0 * std::numbers::pi;
    out.push_back({"gue_one_point_density", std::abs(d - 1.0), 0.02, std::abs(d - 1.0) <= 0.02, "K(0,0)/n vs 1/pi, n=200"});
    const auto mp = DensityFn::marchenko_pastur(2.0);
    const double w = wishart_kernel(1.5, 1.5, 400, 200) / 200.0 / mp(1.5);
    out.push_back({"wishart_one_point_density", std::abs(w - 1.0), 0.02, std::abs(w - 1.0) <= 0.02,
                   "K(x,x)/n vs g(x), beta=2, n=200, x=1.5"});
  }
  {
    auto err = [](int n) {
      const double x = 1.5, g = DensityFn::marchenko_pastur(2.0)(x);
      return wishart_kernel_asymptotic(x, x + 0.5 / (n * g), 2 * n, n).relative_error;
    };
    const double e25 = err(25), e100 = err(100);
    out.push_back({"wishart_asymptotic_error_decreases", e100, e25, e100 < e25,
                   fmt::format("relative error n=25: {:.3g}, n=100: {:.3g}", e25, e100)});
  }
  return out;
}

inline void write_verification(const std::vector<Verdict>& v, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["verdicts"] = nlohmann::json::array();
  bool all = true;
  for (const auto& x : v) {
    j["verdicts"].push_back(verdict_to_json(x));
    all = all && x.pass;
  }
  j["all_pass"] = all;
  detail::write_atomically(dir / "verify.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Reports over finished runs.

struct LoadedRun {
  std::filesystem::path dir;
  ExperimentConfig config;
  nlohmann::json meta;
  std::map<int, std::vector<double>> tau;  // ell -> samples
  std::map<std::string, std::vector<std::int64_t>> counts;
};

class report_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Returns nullopt for a run without the completion marker.
inline std::optional<LoadedRun> load_run(const std::filesystem::path& dir) {
  const auto meta_path = dir / "run.json";
  if (!std::filesystem::exists(meta_path)) return std::nullopt;
  std::ifstream in(meta_path);
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!meta.value("complete", false)) return std::nullopt;
  const int version = meta.value("schema_version", -1);
  if (version != kSchemaVersion)
    throw report_error(fmt::format("{}: schema_version {} does not match supported version {}", dir.string(), version,
                                   kSchemaVersion));
  LoadedRun run;
  run.dir = dir;
  run.meta = meta;
  run.config = config_from_json(meta.at("config"));
  std::ifstream g(dir / "gaps.csv");
  std::string line;
  std::getline(g, line);
  while (std::getline(g, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> f;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw report_error(dir.string() + ": malformed gaps.csv row");
    run.tau[std::stoi(f[2])].push_back(std::stod(f[4]));
  }
  std::ifstream c(dir / "counts.csv");
  std::getline(c, line);
  while (std::getline(c, line)) {
    std::stringstream ss(line);
    std::string trial, id, count;
    std::getline(ss, trial, ',');
    std::getline(ss, id, ',');
    std::getline(ss, count, ',');
    run.counts[id].push_back(std::stoll(count));
  }
  return run;
}

// Grouping key: everything in the config that changes the target law.
inline std::string ensemble_key(const ExperimentConfig& c) {
  std::string k = fmt::format("{}_n{}", to_string(c.ensemble.kind), c.ensemble.n);
  if (c.ensemble.kind == EnsembleKind::Wishart) k += fmt::format("_m{}", c.ensemble.m);
  if (c.ensemble.kind == EnsembleKind::Ginibre) k += "_" + to_string(c.ginibre_constant);
  return k;
}

struct ReportResult {
  std::vector<std::string> groups;
  std::vector<std::filesystem::path> skipped;  // incomplete runs
  std::map<std::string, std::size_t> merged_samples;  // group -> τ1 sample size
};

// Merges complete runs by ensemble and writes summary.csv plus one histogram
// CSV per group and gap order, each with the limiting CDF alongside.
inline ReportResult report(const std::vector<std::filesystem::path>& dirs, const std::filesystem::path& out_dir,
                           int bins = 40) {
  ReportResult res;
  std::map<std::string, std::vector<LoadedRun>> groups;
  for (const auto& d : dirs) {
    auto r = load_run(d);
    if (!r) {
      res.skipped.push_back(d);
      continue;
    }
    groups[ensemble_key(r->config)].push_back(std::move(*r));
  }
  std::filesystem::create_directories(out_dir);
  std::string summary = "group,ensemble,n,runs,ell,samples,ks_statistic,ks_p_value,target\n";
  std::string count_summary = "group,region_id,samples,mean,mu,var_over_mean\n";
  for (auto& [key, runs] : groups) {
    res.groups.push_back(key);
    const auto& cfg = runs.front().config;
    std::map<int, std::vector<double>> tau;
    std::map<std::string, std::vector<std::int64_t>> counts;
    for (const auto& r : runs) {
      for (const auto& [ell, v] : r.tau) tau[ell].insert(tau[ell].end(), v.begin(), v.end());
      for (const auto& [id, v] : r.counts) counts[id].insert(counts[id].end(), v.begin(), v.end());
    }
    res.merged_samples[key] = tau.count(1) ? tau[1].size() : 0;
    for (auto& [ell, v] : tau) {
      std::sort(v.begin(), v.end());
      const auto cdf = gap_target_cdf(cfg, ell);
      std::string ks_stat = "", ks_p = "";
      if (v.size() >= 50) {
        const auto rep = ks_test(SampleSet{v, {}, key}, cdf);
        ks_stat = fmt::format("{}", rep.statistic);
        ks_p = fmt::format("{}", *rep.p_value);
      }
      summary += fmt::format("{},{},{},{},{},{},{},{},{}\n", key, to_string(cfg.ensemble.kind), cfg.ensemble.n, runs.size(),
                             ell, v.size(), ks_stat, ks_p, gap_target_description(cfg, ell));
      std::string hist = "bin_lo,bin_hi,count,empirical_cdf,target_cdf\n";
      const double top = v.empty() ? 1.0 : v.back() * (1.0 + 1e-12);
      std::size_t idx = 0;
      for (int b = 0; b < bins; ++b) {
        const double lo = top * b / bins, hi = top * (b + 1) / bins;
        std::size_t cnt = 0;
        while (idx < v.size() && v[idx] < hi) {
          ++idx;
          ++cnt;
        }
        const double emp = v.empty() ? 0.0 : static_cast<double>(idx) / v.size();
        hist += fmt::format("{},{},{},{},{}\n", lo, hi, cnt, emp, cdf(hi));
      }
      detail::write_atomically(out_dir / fmt::format("hist_{}_tau{}.csv", key, ell), hist);
    }
    for (const auto& [id, v] : counts) {
      double mean = 0.0, var = 0.0;
      for (auto x : v) mean += x;
      mean /= std::max<std::size_t>(v.size(), 1);
      for (auto x : v) var += (x - mean) * (x - mean);
      var /= std::max<std::size_t>(v.size() - 1, 1);
      double mu = NAN;
      for (const auto& cs : cfg.counts)
        if (cs.id == id) mu = count_intensity(cfg, cs);
      count_summary += fmt::format("{},{},{},{},{},{}\n", key, id, v.size(), mean, mu, mean > 0 ? var / mean : 0.0);
    }
  }
  detail::write_atomically(out_dir / "summary.csv", summary);
  detail::write_atomically(out_dir / "counts_summary.csv", count_summary);
  return res;
}

}  // namespace gaplab
