#include "bosestab/cli/tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>
#include <tuple>

#include "bosestab/bootstrap.hpp"
#include "bosestab/definetti.hpp"
#include "bosestab/error.hpp"
#include "bosestab/evolve.hpp"
#include "bosestab/gn.hpp"
#include "bosestab/lanczos.hpp"
#include "bosestab/localization.hpp"
#include "bosestab/plane_wave.hpp"
#include "bosestab/trend.hpp"
#include "bosestab/validation.hpp"

namespace bosestab::cli {

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

namespace {

Record make_record(const std::string& task, const std::string& point, std::uint64_t seed) {
  Record r;
  r.task = task;
  r.point = point;
  r.seed = seed;
  return r;
}

template <class F>
void guarded(Record& r, F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    r.status = "error";
    r.error_kind = "validation";
    r.outputs["error"] = e.what();
  } catch (const std::exception& e) {
    r.status = "error";
    r.error_kind = "numerical";
    r.outputs["error"] = e.what();
  }
}

Json config_json(const RunConfig& c) {
  Json j = Json::object();
  for (const auto& [k, v] : c.canonical()) j[k] = v;
  return j;
}

Report make_report(const RunConfig& c) {
  Report r;
  r.task = to_string(c.task);
  r.config_hash = c.hash();
  r.config = config_json(c);
  r.seed = c.seed;
  r.threads = c.threads;
  return r;
}

std::string point_name(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string s;
  for (const auto& [k, v] : kv) s += (s.empty() ? "" : ",") + std::string(k) + "=" + v;
  return s;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }
double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

void require_physics(const RunConfig& c, const Grid2D& g, int max_N, double max_beta) {
  for (double a : c.attraction)
    require_valid(validate_config(c.V, c.A, interaction_for(c, a), g, {max_N, max_beta}));
}

ModeBasis scan_basis(const RunConfig& c, const Grid2D& g, int d) {
  const ModeSelection sel = c.lambda > 0.0 ? ModeSelection::up_to(c.lambda) : ModeSelection::modes(d);
  return build_mode_basis(c.V, c.A, g, sel);
}

double spread(const std::vector<double>& v) {
  double lo = INFINITY, hi = 0.0;
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return v.empty() ? 1.0 : (lo > 0.0 ? hi / lo : INFINITY);
}

// ---------------------------------------------------------------- gn

Report run_gn(const RunConfig& c) {
  Report r = make_report(c);
  const Grid2D g = make_grid(c.n, c.L);
  Record rec = make_record("gn", "grid", c.seed);
  rec.inputs = {{"n", c.n}, {"L", c.L}, {"tolerance", c.tol_gn}};
  Table t{"a_star", {"method", "a_star", "residual", "iterations"}, {}};
  double gap = INFINITY, gauss = NAN, grid_value = NAN;
  guarded(rec, [&] {
    const GnComparison cmp = compare_a_star(g, c.tol_gn);
    gap = cmp.relative_gap;
    grid_value = cmp.grid.a_star;
    gauss = gn_quotient(oscillator_gaussian(g));
    for (const GnResult* m : {&cmp.grid, &cmp.shooting})
      t.rows.push_back({to_string(m->method), m->a_star, m->residual, m->iterations});
    rec.outputs = {{"a_star_grid", cmp.grid.a_star},
                   {"a_star_shooting", cmp.shooting.a_star},
                   {"relative_gap", gap},
                   {"gaussian_quotient", gauss}};
  });
  r.records.push_back(rec);
  r.tables.push_back(t);
  r.verdicts.push_back({"methods agree", gap <= 1e-3, "relative gap " + num(gap) + " (need <= 1e-3)"});
  r.verdicts.push_back({"gaussian upper bound", grid_value <= gauss * (1 + 1e-12),
                        "a* " + num(grid_value) + " <= Gaussian quotient " + num(gauss)});
  return r;
}

// ---------------------------------------------------------------- nls

Report run_nls(const RunConfig& c) {
  Report r = make_report(c);
  const Grid2D g = make_grid(c.n, c.L);
  const bool hartree = c.nls_coupling == "hartree";
  if (hartree) require_physics(c, g, max_of(c.N), max_of(c.beta));
  struct P {
    double a, beta;
    int N;
  };
  std::vector<P> pts;
  for (double a : c.attraction) {
    if (hartree) {
      for (double b : c.beta)
        for (int N : c.N) pts.push_back({a, b, N});
    } else {
      pts.push_back({a, NAN, 0});
    }
  }
  std::vector<Record> recs(pts.size());
  std::vector<std::string> status(pts.size());
  std::vector<double> energy(pts.size(), NAN), resid(pts.size(), NAN);
  std::vector<int> iters(pts.size(), 0);
  const double astar = reference_a_star();
  parallel_for(static_cast<int>(pts.size()), c.threads, [&](int i) {
    const P& p = pts[i];
    Record& rec = recs[i];
    rec.task = "nls";
    rec.seed = c.seed;
    rec.point = hartree ? point_name({{"g", num(p.a)}, {"beta", num(p.beta)}, {"N", std::to_string(p.N)}})
                        : point_name({{"g", num(p.a)}});
    rec.inputs = {{"attraction", p.a}, {"coupling", c.nls_coupling}};
    guarded(rec, [&] {
      NlsProblem pr;
      pr.grid = g;
      pr.V = c.V;
      pr.A = c.A;
      pr.tolerance = c.tol_nls;
      const InteractionSpec w = interaction_for(c, p.a);
      if (hartree) {
        pr.coupling = HartreeCoupling{w, p.N, p.beta};
        rec.inputs["N"] = p.N;
        rec.inputs["beta"] = p.beta;
      } else {
        pr.coupling = DeltaCoupling{-p.a * astar};
        rec.inputs["b"] = -p.a * astar;
      }
      const NlsResult res = minimize_nls(pr, oscillator_gaussian(g), c.seed);
      status[i] = to_string(res.status);
      energy[i] = res.energy;
      resid[i] = res.residual;
      iters[i] = res.iterations;
      rec.outputs = {{"energy", res.energy},
                     {"residual", res.residual},
                     {"iterations", res.iterations},
                     {"status", status[i]},
                     {"width", res.width}};
    });
  });
  Table t{"nls", {"g", "coupling", "N", "beta", "energy", "residual", "iterations", "status"}, {}};
  for (size_t i = 0; i < pts.size(); ++i) {
    t.rows.push_back({pts[i].a, c.nls_coupling, hartree ? Json(pts[i].N) : Json(nullptr),
                      hartree ? Json(pts[i].beta) : Json(nullptr), energy[i], resid[i], iters[i],
                      recs[i].status == "ok" ? status[i] : "error"});
    if (!hartree && recs[i].status == "ok" && pts[i].a != 1.0) {
      const std::string want = pts[i].a < 1.0 ? "converged" : "collapse-detected";
      r.verdicts.push_back({"dichotomy at g=" + num(pts[i].a), status[i] == want,
                            "status " + status[i] + ", expected " + want});
    }
  }
  r.records = std::move(recs);
  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------- ed / stability-scan

struct EdPoint {
  double a, beta;
  int d, N;
};

struct EdOutcome {
  double E = NAN, e_N = NAN, residual = NAN, identity = NAN, condensate = NAN;
  std::string status = "error";
};

Report run_ed(const RunConfig& c) {
  Report r = make_report(c);
  const bool scan = c.task == Task::stability_scan;
  const Grid2D g = make_grid(c.n, c.L);
  require_physics(c, g, max_of(c.N), max_of(c.beta));
  const ModeBasis full = scan_basis(c, g, max_of(c.d));
  const std::vector<int> dims = c.lambda > 0.0 ? std::vector<int>{full.size()} : c.d;

  std::vector<EdPoint> pts;
  for (double a : c.attraction)
    for (double b : c.beta)
      for (int d : dims)
        for (int N : c.N) pts.push_back({a, b, d, N});
  std::vector<Record> recs(pts.size());
  std::vector<EdOutcome> out(pts.size());
  LanczosOptions lo;
  lo.tolerance = c.tol_lanczos;
  lo.seed = c.seed;
  parallel_for(static_cast<int>(pts.size()), c.threads, [&](int i) {
    const EdPoint& p = pts[i];
    Record& rec = recs[i];
    rec.task = r.task;
    rec.seed = c.seed;
    rec.point = point_name(
        {{"g", num(p.a)}, {"beta", num(p.beta)}, {"d", std::to_string(p.d)}, {"N", std::to_string(p.N)}});
    rec.inputs = {{"N", p.N}, {"beta", p.beta}, {"attraction", p.a}, {"d", p.d}};
    guarded(rec, [&] {
      const ModeBasis basis = full.leading(p.d);
      const InteractionSpec w = interaction_for(c, p.a);
      const TwoBodyTensor W = two_body_elements(basis, w, p.N, p.beta);
      const FockBasis fock(p.N, p.d);
      const FockHamiltonian H(fock, basis.energies, W);
      const ManyBodyResult res = ground_state(H, lo);
      const Rdm g2 = rdm(res, fock, 2);
      EdOutcome& o = out[i];
      o.E = res.E;
      o.e_N = res.e_N;
      o.residual = res.residual;
      o.identity = energy_identity_check(res, g2, basis, W);
      o.condensate = best_condensate(basis.energies, W).energy;
      o.status = res.converged ? (res.degenerate ? "degenerate" : "converged") : "not-converged";
      rec.outputs = {{"E", o.E},
                     {"e_N", o.e_N},
                     {"residual", o.residual},
                     {"dim", fock.size()},
                     {"matvecs", res.matvecs},
                     {"gap", res.gap},
                     {"energy_identity_residual", o.identity},
                     {"condensate_energy", o.condensate},
                     {"splits_level", basis.splits_level},
                     {"status", o.status}};
      if (!res.converged) {
        rec.status = "error";
        rec.error_kind = "numerical";
      }
    });
  });

  Table t{scan ? "stability" : "ed", {"N", "beta", "g", "d", "E", "e_N", "residual", "status"}, {}};
  double worst_identity = 0.0, worst_bound = -INFINITY;
  for (size_t i = 0; i < pts.size(); ++i) {
    const EdOutcome& o = out[i];
    t.rows.push_back({pts[i].N, pts[i].beta, pts[i].a, pts[i].d, o.E, o.e_N, o.residual,
                      recs[i].status == "ok" ? o.status : "error"});
    if (recs[i].status == "ok") {
      worst_identity = std::max(worst_identity, o.identity);
      worst_bound = std::max(worst_bound, o.e_N - o.condensate);
    }
  }
  r.tables.push_back(std::move(t));
  r.verdicts.push_back({"energy identity", worst_identity <= 1e-10,
                        "max |e_N - tr(H2 gamma2)/2| = " + num(worst_identity) + " (need <= 1e-10)"});
  r.verdicts.push_back({"variational upper bound", worst_bound <= 1e-10,
                        "max e_N - condensate energy = " + num(worst_bound)});

  // Trend per (g, beta, d) over the N axis.
  std::map<double, NlsResult> reference;
  if (scan) {
    std::vector<double> as = c.attraction;
    std::vector<NlsResult> res(as.size());
    parallel_for(static_cast<int>(as.size()), c.threads, [&](int i) {
      NlsProblem pr;
      pr.grid = g;
      pr.V = c.V;
      pr.A = c.A;
      pr.tolerance = c.tol_nls;
      pr.coupling = DeltaCoupling{interaction_for(c, as[i]).integral()};
      res[i] = minimize_nls(pr, oscillator_gaussian(g), c.seed);
    });
    for (size_t i = 0; i < as.size(); ++i) reference[as[i]] = std::move(res[i]);
  }
  Table v{"verdicts", {"g", "beta", "d", "verdict", "decrement_exponent", "min_e_N", "E_nls", "nls_status"}, {}};
  const size_t per = c.N.size();
  for (size_t s = 0; s < pts.size(); s += per) {
    std::vector<double> e;
    bool ok = true;
    for (size_t i = s; i < s + per; ++i) {
      ok = ok && recs[i].status == "ok";
      e.push_back(out[i].e_N);
    }
    const EdPoint& p = pts[s];
    const std::string tag = "g=" + num(p.a) + ",beta=" + num(p.beta) + ",d=" + std::to_string(p.d);
    if (!ok) {
      v.rows.push_back({p.a, p.beta, p.d, "error", nullptr, nullptr, nullptr, nullptr});
      continue;
    }
    const TrendVerdict tv = classify_trend(c.N, e);
    Json enls = nullptr, nstat = nullptr;
    if (scan) {
      const NlsResult& nr = reference.at(p.a);
      enls = nr.energy;
      nstat = to_string(nr.status);
    }
    v.rows.push_back({p.a, p.beta, p.d, tv.verdict, tv.decrement_exponent, tv.witness, enls, nstat});
    if (p.a < 1.0) {
      r.verdicts.push_back({"stable trend " + tag, tv.verdict != "unbounded trend", "verdict " + tv.verdict});
    } else if (scan && p.a > 1.0) {
      r.verdicts.push_back(
          {"unstable trend " + tag, tv.verdict == "unbounded trend", "verdict " + tv.verdict + ", expected unbounded trend"});
    }
  }
  r.tables.push_back(std::move(v));
  r.records = std::move(recs);
  return r;
}

// ---------------------------------------------------------------- lemmas

Report run_lemmas(const RunConfig& c) {
  Report r = make_report(c);
  const Grid2D g = make_grid(c.n, c.L);
  require_physics(c, g, max_of(c.N), max_of(c.beta));
  require_physics(c, g, max_of(c.definetti_N), c.beta.front());
  const double a = c.attraction.front();
  const InteractionSpec w = interaction_for(c, a);
  LanczosOptions lo;
  lo.tolerance = c.tol_lanczos;
  lo.seed = c.seed;

  // Plane waves.
  const int nl = static_cast<int>(c.plane_wave_lambda.size());
  std::vector<Record> pw_rec(nl);
  std::vector<PlaneWaveSweep> sweeps(nl);
  parallel_for(nl, c.threads, [&](int i) {
    Record& rec = pw_rec[i];
    rec.task = "lemmas";
    rec.seed = c.seed;
    rec.point = point_name({{"plane_wave_lambda", num(c.plane_wave_lambda[i])}});
    rec.inputs = {{"lambda", c.plane_wave_lambda[i]}, {"k_min", c.k_min}, {"k_max", c.k_max}};
    guarded(rec, [&] {
      const ModeBasis b = build_mode_basis(c.V, c.A, g, ModeSelection::up_to(c.plane_wave_lambda[i]));
      sweeps[i] = plane_wave_sweep(b, c.k_min, c.k_max, c.k_points);
      sweeps[i].lambda = c.plane_wave_lambda[i];
      rec.outputs = {{"d", sweeps[i].d},
                     {"lambda_adjusted", b.cutoff},
                     {"fitted_C", sweeps[i].fitted_C},
                     {"max_norm", sweeps[i].max_norm},
                     {"envelope_holds", sweeps[i].envelope_holds}};
    });
  });
  Table pw{"plane_wave", {"lambda", "d", "k", "cos_norm", "sin_norm"}, {}};
  Table pwf{"plane_wave_fit", {"lambda", "d", "fitted_C", "max_norm", "envelope_holds"}, {}};
  std::vector<double> Cs;
  bool below_one = true, envelope = true;
  for (int i = 0; i < nl; ++i) {
    if (pw_rec[i].status != "ok") continue;
    const auto& s = sweeps[i];
    for (const auto& p : s.samples) pw.rows.push_back({s.lambda, s.d, p.k, p.cos_norm, p.sin_norm});
    pwf.rows.push_back({s.lambda, s.d, s.fitted_C, s.max_norm, s.envelope_holds});
    Cs.push_back(s.fitted_C);
    below_one = below_one && s.max_norm <= 1.0 + 1e-12;
    envelope = envelope && s.envelope_holds;
  }
  r.verdicts.push_back({"plane-wave norm <= 1", below_one && !Cs.empty(), ""});
  r.verdicts.push_back({"plane-wave envelope", envelope && !Cs.empty(), "norm <= C Lambda^{1/2}/|k| with the fitted C"});
  r.verdicts.push_back({"plane-wave C stable", spread(Cs) <= 2.0, "max/min fitted C = " + num(spread(Cs)) + " (need <= 2)"});
  const double C_pw = Cs.empty() ? NAN : max_of(Cs);

  // Localization and moments on nested projectors.
  const ModeBasis big = build_mode_basis(c.V, c.A, g, ModeSelection::modes(c.d_big));
  struct LP {
    double beta;
    int N;
  };
  std::vector<LP> lps;
  for (double b : c.beta)
    for (int N : c.N) lps.push_back({b, N});
  std::vector<Record> loc_rec(lps.size());
  std::vector<std::vector<LocalizationReport>> locs(lps.size());
  std::vector<MomentReport> moms(lps.size());
  std::vector<double> bridge(lps.size(), NAN);
  parallel_for(static_cast<int>(lps.size()), c.threads, [&](int i) {
    Record& rec = loc_rec[i];
    rec.task = "lemmas";
    rec.seed = c.seed;
    rec.point = point_name({{"localization_beta", num(lps[i].beta)}, {"N", std::to_string(lps[i].N)}});
    rec.inputs = {{"beta", lps[i].beta}, {"N", lps[i].N}, {"d_big", c.d_big}, {"delta", c.delta}, {"eps", c.eps}};
    guarded(rec, [&] {
      const TwoBodyTensor W = two_body_elements(big, w, lps[i].N, lps[i].beta);
      const FockBasis fock(lps[i].N, c.d_big);
      const FockHamiltonian H(fock, big.energies, W);
      const ManyBodyResult res = ground_state(H, lo);
      const Rdm g2 = rdm(res, fock, 2);
      bridge[i] = energy_identity_check(res, g2, big, W);
      Json ls = Json::array();
      for (int ds : c.d_small) {
        locs[i].push_back(localization_defect(g2, big, W, ds, c.delta));
        const auto& L = locs[i].back();
        ls.push_back({{"d_small", ds}, {"lhs", L.lhs}, {"C_delta", L.fitted_C}, {"lambda", L.lambda}});
      }
      const ManyBodyResult pert = ground_state(H.with_eps(c.eps), lo);
      moms[i] = moment_report(pert, rdm(pert, fock, 1), rdm(pert, fock, 2), big, c.eps);
      rec.outputs = {{"e_N", res.e_N},
                     {"bridge_residual", bridge[i]},
                     {"localization", ls},
                     {"e_N_eps", moms[i].e_eps},
                     {"moment_C", moms[i].fitted_C}};
    });
  });
  Table loc{"localization",
            {"beta", "N", "d_small", "d_big", "lambda", "lhs", "first_moment", "second_moment", "C_delta", "pass"},
            {}};
  Table mom{"moments", {"beta", "N", "eps", "e_N_eps", "first_moment", "second_moment", "C"}, {}};
  std::vector<double> Cd, Cm;
  std::map<int, std::vector<double>> Cd_by;
  double worst_bridge = 0.0;
  bool loc_ok = !lps.empty();
  for (size_t i = 0; i < lps.size(); ++i) {
    if (loc_rec[i].status != "ok") {
      loc_ok = false;
      continue;
    }
    for (const auto& L : locs[i]) {
      loc.rows.push_back({lps[i].beta, lps[i].N, L.d_small, L.d_big, L.lambda, L.lhs, L.first_moment,
                          L.second_moment, L.fitted_C, L.pass});
      if (L.fitted_C > 0.0) Cd.push_back(L.fitted_C);
      Cd_by[L.d_small].push_back(L.fitted_C);
    }
    const auto& M = moms[i];
    mom.rows.push_back({lps[i].beta, lps[i].N, M.eps, M.e_eps, M.first_moment, M.second_moment, M.fitted_C});
    Cm.push_back(M.fitted_C);
    worst_bridge = std::max(worst_bridge, bridge[i]);
  }
  std::string per;
  for (const auto& [ds, v] : Cd_by) per += " d_small=" + std::to_string(ds) + ": " + num(spread(v));
  r.verdicts.push_back({"localization C_delta stable", loc_ok && spread(Cd) <= 5.0,
                        "max/min over sweep = " + num(spread(Cd)) + " (need <= 5);" + per});
  r.verdicts.push_back({"moment C stable", loc_ok && spread(Cm) <= 5.0,
                        "max/min over sweep = " + num(spread(Cm)) + " (need <= 5)"});
  r.verdicts.push_back({"pair energy bridge", loc_ok && worst_bridge <= 1e-10, "max residual " + num(worst_bridge)});

  // de Finetti at fixed d on the N axis.
  const ModeBasis small = big.leading(std::min(c.definetti_d, big.size()));
  const int nN = static_cast<int>(c.definetti_N.size());
  std::vector<Record> df_rec(nN + 1);
  std::vector<DeFinettiFit> fits(nN + 1);
  DeFinettiOptions dopt;
  dopt.n_atoms = c.n_atoms;
  dopt.restarts = c.restarts;
  dopt.seed = c.seed;
  parallel_for(nN + 1, c.threads, [&](int i) {
    Record& rec = df_rec[i];
    rec.task = "lemmas";
    rec.seed = c.seed;
    const int N = i < nN ? c.definetti_N[i] : c.definetti_N.front();
    rec.point = point_name({{i < nN ? "definetti_N" : "definetti_condensate_N", std::to_string(N)}});
    rec.inputs = {{"N", N}, {"d", small.size()}, {"beta", c.beta.front()}, {"n_atoms", c.n_atoms}};
    guarded(rec, [&] {
      const FockBasis fock(N, small.size());
      Rdm g2;
      if (i < nN) {
        const TwoBodyTensor W = two_body_elements(small, w, N, c.beta.front());
        const ManyBodyResult res = ground_state(FockHamiltonian(fock, small.energies, W), lo);
        g2 = rdm(res, fock, 2);
      } else {
        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(small.size());
        u[0] = 1.0;
        g2 = two_body_rdm(product_state(u, fock), fock);
      }
      fits[i] = fit_definetti(g2, N, dopt);
      rec.outputs = {{"error", fits[i].error},
                     {"reference", fits[i].reference},
                     {"iterations", fits[i].iterations},
                     {"best_restart", fits[i].best_restart}};
    });
  });
  Table df{"definetti", {"N", "d", "error", "reference", "ratio", "iterations", "best_restart"}, {}};
  bool df_ok = true, nonincreasing = true, below = true;
  double C_df = NAN;
  for (int i = 0; i < nN; ++i) {
    if (df_rec[i].status != "ok") {
      df_ok = false;
      continue;
    }
    const auto& f = fits[i];
    const double ratio = f.error / f.reference;
    df.rows.push_back({c.definetti_N[i], small.size(), f.error, f.reference, ratio, f.iterations, f.best_restart});
    if (std::isnan(C_df)) C_df = ratio;
    below = below && ratio <= C_df * (1 + 1e-12);
    if (i > 0 && df_rec[i - 1].status == "ok") nonincreasing = nonincreasing && f.error <= fits[i - 1].error + 1e-8;
  }
  r.verdicts.push_back({"de Finetti error non-increasing in N", df_ok && nonincreasing, ""});
  r.verdicts.push_back({"de Finetti error below C sqrt(log d / N)", df_ok && below,
                        "C fitted at the smallest N: " + num(C_df)});
  const bool exact = df_rec[nN].status == "ok" && fits[nN].error <= 1e-8;
  r.verdicts.push_back({"de Finetti exact on condensates", exact, "error " + num(fits[nN].error)});

  // Tail bound and Fourier reconstruction.
  Table tail{"tail_bound", {"N", "beta", "lambda", "C", "inner", "middle", "outer", "total", "log_reference"}, {}};
  Table four{"fourier", {"N", "beta", "samples", "max_error"}, {}};
  Record trec = make_record("lemmas", "tail_and_fourier", c.seed);
  guarded(trec, [&] {
    const double lam = c.plane_wave_lambda.front();
    for (double b : c.beta)
      for (int N : c.N) {
        if (std::isfinite(C_pw)) {
          const TailBound tb = interaction_tail_bound(w, N, b, lam, C_pw);
          tail.rows.push_back({N, b, lam, C_pw, tb.inner, tb.middle, tb.outer, tb.total, tb.log_reference});
        }
        four.rows.push_back({N, b, c.fourier_samples, fourier_decomposition_check(w, N, b, g, c.fourier_samples, c.seed)});
      }
  });
  r.records = std::move(pw_rec);
  for (auto* v : {&loc_rec, &df_rec})
    for (auto& x : *v) r.records.push_back(std::move(x));
  r.records.push_back(std::move(trec));
  for (auto* t : {&pw, &pwf, &loc, &mom, &df, &tail, &four}) r.tables.push_back(std::move(*t));
  return r;
}

// ---------------------------------------------------------------- dynamics

Report run_dynamics(const RunConfig& c) {
  Report r = make_report(c);
  const Grid2D g = make_grid(c.n, c.L);
  require_physics(c, g, max_of(c.N), max_of(c.beta));
  const int d = c.d.front();
  const double beta = c.beta.front();
  const ModeBasis basis = build_mode_basis(c.V, c.A, g, ModeSelection::modes(d));
  const InteractionSpec w = interaction_for(c, c.attraction.front());
  Eigen::VectorXcd coef = Eigen::VectorXcd::Zero(d);
  for (int i = 0; i < std::min<int>(d, c.initial.size()); ++i) coef[i] = c.initial[i];
  if (coef.norm() == 0.0) throw ValidationError("[dynamics] initial coefficients vanish");
  coef.normalize();
  Field u0(g);
  u0.values = (basis.phi * coef).array();

  Record nrec = make_record("dynamics", "nls", c.seed);
  NlsTrajectory traj;
  const int every = static_cast<int>(std::lround(c.record_interval / c.dt));
  if (std::abs(every * c.dt - c.record_interval) > 1e-12 * c.record_interval)
    throw ValidationError("[dynamics] record_interval must be a multiple of dt");
  nrec.inputs = {{"b", w.integral()}, {"dt", c.dt}, {"T", c.T}};
  guarded(nrec, [&] {
    NlsProblem pr;
    pr.grid = g;
    pr.V = c.V;
    pr.coupling = DeltaCoupling{w.integral()};
    traj = propagate_nls(u0, pr, c.T, c.dt, {every});
    nrec.outputs = {{"max_norm_drift", traj.max_norm_drift},
                    {"max_energy_drift", traj.max_energy_drift},
                    {"status", traj.status}};
  });
  r.records.push_back(nrec);
  const bool nls_ok = nrec.status == "ok";

  const int nN = static_cast<int>(c.N.size());
  std::vector<Record> recs(nN);
  std::vector<ManyBodyTrajectory> mb(nN);
  parallel_for(nls_ok ? nN : 0, c.threads, [&](int i) {
    Record& rec = recs[i];
    rec.task = "dynamics";
    rec.seed = c.seed;
    rec.point = point_name({{"N", std::to_string(c.N[i])}});
    rec.inputs = {{"N", c.N[i]}, {"beta", beta}, {"d", d}};
    guarded(rec, [&] {
      const FockBasis fock(c.N[i], d);
      const FockHamiltonian H(fock, basis.energies, two_body_elements(basis, w, c.N[i], beta));
      mb[i] = evolve(product_state(coef, fock), H, c.T, c.record_interval, {}, &basis, &traj);
      rec.outputs = {{"max_norm_drift", mb[i].max_norm_drift},
                     {"max_energy_drift", mb[i].max_energy_drift},
                     {"final_trace_distance", mb[i].trace_distance.back()},
                     {"substeps", mb[i].substeps},
                     {"rejected", mb[i].rejected}};
    });
  });
  Table td{"trace_distance", {"N", "t", "trace_distance", "energy"}, {}};
  Table dr{"drift", {"evolution", "N", "max_norm_drift", "max_energy_drift"}, {}};
  if (nls_ok) dr.rows.push_back({"nls", nullptr, traj.max_norm_drift, traj.max_energy_drift});
  double worst = nls_ok ? std::max(traj.max_norm_drift, traj.max_energy_drift) : INFINITY;
  bool decreasing = nls_ok, all_ok = nls_ok;
  for (int i = 0; i < nN; ++i) {
    if (!nls_ok || recs[i].status != "ok") {
      all_ok = false;
      continue;
    }
    for (size_t k = 0; k < mb[i].times.size(); ++k)
      td.rows.push_back({c.N[i], mb[i].times[k], mb[i].trace_distance[k], mb[i].energies[k]});
    dr.rows.push_back({"many-body", c.N[i], mb[i].max_norm_drift, mb[i].max_energy_drift});
    worst = std::max({worst, mb[i].max_norm_drift, mb[i].max_energy_drift});
    if (i > 0 && recs[i - 1].status == "ok")
      decreasing = decreasing && mb[i].trace_distance.back() < mb[i - 1].trace_distance.back();
  }
  if (nls_ok)
    for (auto& x : recs) r.records.push_back(std::move(x));
  r.tables.push_back(std::move(td));
  r.tables.push_back(std::move(dr));
  r.verdicts.push_back({"conservation", all_ok && worst <= 1e-8, "max drift " + num(worst) + " (need <= 1e-8)"});
  r.verdicts.push_back({"trace distance decreasing in N", all_ok && decreasing, "at t = " + num(c.T)});
  return r;
}

// ---------------------------------------------------------------- bootstrap

Report run_bootstrap_task(const RunConfig& c) {
  Report r = make_report(c);
  Table tr{"trajectory", {"beta", "step", "alpha", "a", "b", "delta", "lambda_exponent", "gain", "log_factor"}, {}};
  Table su{"summary", {"beta", "steps", "final_alpha", "moment_estimate_valid"}, {}};
  for (double b : c.beta) {
    Record rec = make_record("bootstrap", point_name({{"beta", num(b)}}), c.seed);
    rec.inputs = {{"beta", b}, {"eps0", c.eps0}};
    guarded(rec, [&] {
      const BootstrapRun run = run_bootstrap(b, c.eps0);
      tr.rows.push_back({b, 0, run.alphas.front(), nullptr, nullptr, nullptr, nullptr, nullptr, nullptr});
      bool positive = true;
      for (int k = 0; k < run.step_count; ++k) {
        const auto& s = run.steps[k];
        tr.rows.push_back({b, k + 1, s.alpha, s.a_exp, s.b_exp, s.delta, s.lambda_exp, s.gain, s.log_factor});
        positive = positive && s.gain > 0.0;
      }
      su.rows.push_back({b, run.step_count, run.alphas.back(), run.moment_estimate_valid});
      rec.outputs = {{"steps", run.step_count}, {"final_alpha", run.alphas.back()}};
      r.verdicts.push_back({"terminates at beta=" + num(b), run.alphas.back() == 0.0 && positive,
                            std::to_string(run.step_count) + " steps"});
    });
    r.records.push_back(std::move(rec));
  }
  r.tables.push_back(std::move(tr));
  r.tables.push_back(std::move(su));
  return r;
}

}  // namespace

Report run_task(const RunConfig& c) {
  validate_run_config(c);
  switch (c.task) {
    case Task::gn: return run_gn(c);
    case Task::nls: return run_nls(c);
    case Task::ed:
    case Task::stability_scan: return run_ed(c);
    case Task::lemmas: return run_lemmas(c);
    case Task::dynamics: return run_dynamics(c);
    case Task::bootstrap: return run_bootstrap_task(c);
  }
  throw ValidationError("unknown task");
}

}  // namespace bosestab::cli
