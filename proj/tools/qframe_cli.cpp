// qframe: build frames, represent states and measurements, compare the
// probability calculi, quantify negativity, and run the no-positive-dual
// witness. Check-style commands encode their verdict in the exit status:
//   0  success / verdict true
//   1  verdict false
//   2  usage error (bad arguments, malformed JSON, mismatched dimensions)
//   3  numerical failure (singular frame, blown tolerance)

#include "qframe/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace qframe;

namespace {

struct Tolerances {
  double hermiticity = tol::hermiticity;
  double psd = tol::psd;
  double trace = tol::trace;
  double duality = tol::duality;
  double covariance = tol::covariance;
  double purity = tol::purity;
};

Tolerances apply_overrides(const std::map<std::string, double>& overrides) {
  Tolerances t;
  for (const auto& [name, value] : overrides) {
    if (name == "hermiticity") {
      t.hermiticity = value;
    } else if (name == "psd") {
      t.psd = value;
    } else if (name == "trace") {
      t.trace = value;
    } else if (name == "duality") {
      t.duality = value;
    } else if (name == "covariance") {
      t.covariance = value;
    } else if (name == "purity") {
      t.purity = value;
    } else {
      throw ValidationError("unknown tolerance \"" + name + "\"");
    }
  }
  return t;
}

Frame load_frame(const std::string& path) {
  return frame_from_json(load_json_file(path));
}

DensityOp load_state(const std::string& path, const Tolerances& t) {
  return validate_state(HermitianOp(operator_from_json(load_json_file(path)),
                                    t.hermiticity),
                        t.psd, t.trace);
}

Povm load_povm(const std::string& path) {
  return povm_from_json(load_json_file(path));
}

std::vector<fs::path> json_files_in(const std::string& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) {
    throw ValidationError("not a directory: " + dir);
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void emit(const fs::path& path, const json& j) {
  write_json_file(path, j);
  std::cout << "wrote " << path.string() << "\n";
}

struct ProbTable {
  std::vector<double> trace, deformed, total;
  std::vector<bool> valid;  // within [0,1] up to tolerance; values stay unclamped
  double max_deviation = 0.0;
};

// All three Born-rule routes on the same inputs; the deviation is the worst
// pairwise gap over outcomes.
ProbTable probability_table(const DensityOp& rho, const Povm& m,
                            const Frame& f, const Frame& e, double duality_tol) {
  ProbTable t;
  auto pair = make_dual_pair(f, e, duality_tol);
  const Kernel2 theta = theta_kernel(pair.dual);
  const QuasiDensity qd = rep_state(pair.frame, rho);
  const CondQuasiProb via_f = rep_effects(pair.frame, m, Via::frame_F);
  const CondQuasiProb via_e = rep_effects(pair.dual, m, Via::dual_E);
  for (int k = 0; k < m.outcomes(); ++k) {
    t.trace.push_back(born_rule(rho, m, k));
    t.deformed.push_back(deformed_prob(qd, via_f, pair, theta, k));
    t.total.push_back(total_prob(qd, via_e, pair, k));
    const double a = t.trace.back(), b = t.deformed.back(), c = t.total.back();
    t.max_deviation = std::max({t.max_deviation, std::abs(a - b),
                                std::abs(a - c), std::abs(b - c)});
    bool ok = true;
    for (double p : {a, b, c}) ok = ok && p >= -1e-10 && p <= 1.0 + 1e-10;
    t.valid.push_back(ok);
  }
  return t;
}

int run(int argc, char** argv) {
  CLI::App app{"frame representations of finite-dimensional quantum mechanics"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON configuration file");

  // frame build/duals/check --------------------------------------------------
  auto* frame_cmd = app.add_subcommand("frame", "build and inspect frames");
  frame_cmd->require_subcommand(1);

  auto* build = frame_cmd->add_subcommand("build", "construct a frame");
  std::string build_kind, build_convention = "raw", build_out;
  int build_dim = 0, build_n = 0;
  std::uint64_t build_seed = 0;
  bool build_positive = false;
  build->add_option("--kind", build_kind, "wootters|leonhardt|random")->required();
  build->add_option("--dim", build_dim, "Hilbert space dimension")->required();
  build->add_option("--n", build_n, "element count (random frames)");
  auto* build_seed_opt = build->add_option("--seed", build_seed, "random seed");
  build->add_flag("--positive", build_positive, "draw positive elements");
  build->add_option("--convention", build_convention,
                    "raw|state_normalized|standard");
  build->add_option("-o,--out", build_out, "output frame file");

  auto* duals = frame_cmd->add_subcommand("duals", "compute a dual frame");
  std::string duals_frame, duals_out;
  bool duals_paper = false;
  duals->add_option("--frame", duals_frame, "input frame file")->required();
  duals->add_flag("--paper", duals_paper,
                  "closed-form dual with a fitted global scalar");
  duals->add_option("-o,--out", duals_out, "output frame file");

  auto* check = frame_cmd->add_subcommand("check", "bounds, duality, covariance");
  std::string check_frame, check_dual;
  check->add_option("--frame", check_frame, "input frame file")->required();
  check->add_option("--dual", check_dual, "dual frame file to verify");

  // rep state/povm -----------------------------------------------------------
  auto* rep_cmd = app.add_subcommand("rep", "represent states and POVMs");
  rep_cmd->require_subcommand(1);

  auto* rep_state_cmd = rep_cmd->add_subcommand("state", "quasi-probability density");
  std::string rs_frame, rs_state, rs_out, rs_format = "json";
  rep_state_cmd->add_option("--frame", rs_frame, "frame file")->required();
  rep_state_cmd->add_option("--state", rs_state, "density operator file")->required();
  rep_state_cmd->add_option("-o,--out", rs_out, "output file");
  rep_state_cmd->add_option("--format", rs_format, "json|csv");

  auto* rep_povm_cmd = rep_cmd->add_subcommand("povm", "conditional quasi-probabilities");
  std::string rp_frame, rp_dual, rp_povm, rp_out;
  rep_povm_cmd->add_option("--frame", rp_frame, "represent through the frame");
  rep_povm_cmd->add_option("--dual", rp_dual, "represent through the dual");
  rep_povm_cmd->add_option("--povm", rp_povm, "POVM file")->required();
  rep_povm_cmd->add_option("-o,--out", rp_out, "output file");

  // prob -----------------------------------------------------------------------
  auto* prob_cmd = app.add_subcommand("prob", "per-outcome probability table");
  std::string prob_mode = "trace", prob_state, prob_povm, prob_frame, prob_dual;
  prob_cmd->add_option("--mode", prob_mode, "trace|deformed|total")
      ->check(CLI::IsMember({"trace", "deformed", "total"}));
  prob_cmd->add_option("--state", prob_state, "density operator file")->required();
  prob_cmd->add_option("--povm", prob_povm, "POVM file")->required();
  prob_cmd->add_option("--frame", prob_frame, "frame file");
  prob_cmd->add_option("--dual", prob_dual, "dual frame file");

  // negativity -----------------------------------------------------------------
  auto* neg_cmd = app.add_subcommand("negativity",
                                     "negativity report for a representation");
  std::string neg_rep, neg_frame;
  neg_cmd->add_option("--rep", neg_rep, "representation file")->required();
  neg_cmd->add_option("--frame", neg_frame, "frame file (if not embedded in the rep)");

  // classical-check ------------------------------------------------------------
  auto* cls_cmd = app.add_subcommand("classical-check",
                                     "classical-model check for a fixed pair");
  std::string cls_frame, cls_dual, cls_states, cls_povms;
  cls_cmd->add_option("--frame", cls_frame, "frame file")->required();
  cls_cmd->add_option("--dual", cls_dual, "dual frame file")->required();
  cls_cmd->add_option("--states", cls_states, "directory of state files")->required();
  cls_cmd->add_option("--povms", cls_povms, "directory of POVM files")->required();

  // star -------------------------------------------------------------------------
  auto* star_cmd = app.add_subcommand("star", "star products on representation space");
  std::string star_frame, star_dual, star_a, star_b, star_out;
  star_cmd->add_option("--frame", star_frame, "frame file");
  star_cmd->add_option("--dual", star_dual, "dual frame file");
  star_cmd->add_option("--a", star_a, "left representation file");
  star_cmd->add_option("--b", star_b, "right representation file");
  star_cmd->add_option("-o,--out", star_out, "output file");

  auto* pure_cmd = star_cmd->add_subcommand("check-pure",
                                            "star-idempotence purity check");
  std::string pure_rep, pure_frame, pure_dual;
  pure_cmd->add_option("--rep", pure_rep, "state representation file")->required();
  pure_cmd->add_option("--frame", pure_frame, "frame file")->required();
  pure_cmd->add_option("--dual", pure_dual, "dual frame file")->required();

  // nogo ---------------------------------------------------------------------
  auto* nogo_cmd = app.add_subcommand("nogo", "no-positive-dual witnesses");
  auto* witness_cmd = nogo_cmd->add_subcommand("witness", "batch witness run");
  int witness_dim = 0, witness_seeds = 0;
  std::string witness_out;
  witness_cmd->add_option("--dim", witness_dim, "Hilbert space dimension")->required();
  witness_cmd->add_option("--seeds", witness_seeds, "number of random frames")->required();
  witness_cmd->add_option("-o,--out", witness_out, "output report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse diagnostic
    return code == 0 ? 0 : 2;
  }

  Config config;
  if (!config_path.empty()) {
    config = config_from_json(load_json_file(config_path));
  }
  const Tolerances tols = apply_overrides(config.tolerance_overrides);

  // output path: the -o flag wins, the config's output.path is the fallback
  const auto resolve_out = [&](const std::string& flag_value) -> std::string {
    if (!flag_value.empty()) return flag_value;
    if (config.output_path) return *config.output_path;
    throw ValidationError("no output path: pass -o or set output.path in the config");
  };

  // seed precedence: flag, config, QFRAME_SEED, default
  std::uint64_t seed = 1;
  if (build_seed_opt->count() > 0) {
    seed = build_seed;
  } else if (config.seed) {
    seed = *config.seed;
  } else if (const char* env = std::getenv("QFRAME_SEED")) {
    seed = std::strtoull(env, nullptr, 10);
  }

  if (build->parsed()) {
    Frame f;
    if (build_kind == "wootters") {
      f = wootters_frame(build_dim);
    } else if (build_kind == "leonhardt") {
      f = leonhardt_frame(build_dim);
    } else if (build_kind == "random") {
      const int n = build_n > 0 ? build_n : build_dim * build_dim;
      f = random_frame(build_dim, n, seed, build_positive);
    } else {
      throw ValidationError("unknown frame kind \"" + build_kind + "\"");
    }
    const std::string conv =
        build->count("--convention") ? build_convention
        : (config.convention ? to_string(*config.convention) : build_convention);
    f = renormalize(f, convention_from_string(conv));
    emit(resolve_out(build_out), frame_to_json(f));
    return 0;
  }

  if (duals->parsed()) {
    const Frame f = load_frame(duals_frame);
    if (duals_paper) {
      const auto pd = paper_dual_for(f);
      std::cout << "fitted scale: " << pd.fitted_scale
                << "  duality residual: " << pd.residual << "\n";
      emit(resolve_out(duals_out), frame_to_json(pd.dual));
    } else {
      emit(resolve_out(duals_out), frame_to_json(canonical_dual(f)));
    }
    return 0;
  }

  if (check->parsed()) {
    const Frame f = load_frame(check_frame);
    const auto bounds = frame_bounds(f);
    std::cout << "dim " << f.dim << ", " << f.size() << " elements, kind "
              << to_string(f.kind) << ", convention " << to_string(f.convention)
              << "\n";
    std::cout << "frame bounds: a = " << bounds.lower << ", b = " << bounds.upper
              << "\n";
    bool ok = true;
    const auto canon = is_dual_pair(f, canonical_dual(f), tols.duality);
    std::cout << "canonical duality residual: " << canon.residual
              << (canon.ok ? " (pass)" : " (FAIL)") << "\n";
    ok = ok && canon.ok;
    if (!check_dual.empty()) {
      const Frame e = load_frame(check_dual);
      const auto pair_check = is_dual_pair(f, e, tols.duality);
      std::cout << "duality residual vs " << check_dual << ": "
                << pair_check.residual << (pair_check.ok ? " (pass)" : " (FAIL)")
                << "\n";
      ok = ok && pair_check.ok;
    }
    try {
      const auto cov = covariance_check(f, tols.covariance);
      std::cout << "covariant: " << (cov.covariant ? "yes" : "no")
                << " (residual " << cov.max_residual << ")\n";
    } catch (const DimensionError&) {
      std::cout << "covariant: n/a (labels are not a square lattice)\n";
    }
    std::cout << "positive frame: "
              << (is_positive_frame(f, tols.psd) ? "yes" : "no") << "\n";
    return ok ? 0 : 1;
  }

  if (rep_state_cmd->parsed()) {
    const Frame f = load_frame(rs_frame);
    const DensityOp rho = load_state(rs_state, tols);
    const QuasiDensity qd = rep_state(f, rho);
    const std::string fmt =
        rep_state_cmd->count("--format")
            ? rs_format
            : (config.output_format ? *config.output_format : rs_format);
    const std::string out_path = resolve_out(rs_out);
    if (fmt == "csv") {
      std::ofstream out(out_path);
      if (!out) throw ValidationError("cannot write " + out_path);
      out << rep_to_csv(f, qd.rep);
      std::cout << "wrote " << out_path << "\n";
    } else if (fmt == "json") {
      emit(out_path, rep_to_json(qd.rep, Via::frame_F, f));
    } else {
      throw ValidationError("unknown format \"" + fmt + "\"");
    }
    return 0;
  }

  if (rep_povm_cmd->parsed()) {
    if (rp_frame.empty() == rp_dual.empty()) {
      throw ValidationError("rep povm: give exactly one of --frame or --dual");
    }
    const bool through_dual = !rp_dual.empty();
    const Frame f = load_frame(through_dual ? rp_dual : rp_frame);
    const Povm m = load_povm(rp_povm);
    const CondQuasiProb reps =
        rep_effects(f, m, through_dual ? Via::dual_E : Via::frame_F);
    emit(resolve_out(rp_out), reps_to_json(reps, f));
    return 0;
  }

  if (prob_cmd->parsed()) {
    const DensityOp rho = load_state(prob_state, tols);
    const Povm m = load_povm(prob_povm);
    if (prob_mode != "trace" && (prob_frame.empty() || prob_dual.empty())) {
      throw ValidationError("prob: modes deformed|total need --frame and --dual");
    }
    if (!prob_frame.empty() && !prob_dual.empty()) {
      const Frame f = load_frame(prob_frame);
      const Frame e = load_frame(prob_dual);
      const ProbTable t = probability_table(rho, m, f, e, tols.duality);
      std::cout << "outcome trace deformed total valid\n";
      std::cout.precision(17);
      for (int k = 0; k < m.outcomes(); ++k) {
        std::cout << k << " " << t.trace[k] << " " << t.deformed[k] << " "
                  << t.total[k] << " " << (t.valid[k] ? "yes" : "no") << "\n";
      }
      std::cout << "max pairwise deviation: " << t.max_deviation << "\n";
    } else {
      std::cout << "outcome  trace\n";
      std::cout.precision(17);
      for (int k = 0; k < m.outcomes(); ++k) {
        std::cout << k << " " << born_rule(rho, m, k) << "\n";
      }
    }
    return 0;
  }

  if (neg_cmd->parsed()) {
    const LoadedRep loaded = rep_from_json(load_json_file(neg_rep));
    Frame f;
    if (!neg_frame.empty()) {
      f = load_frame(neg_frame);
    } else if (loaded.frame) {
      f = *loaded.frame;
    } else {
      throw ValidationError(
          "negativity: the rep file has no embedded frame; pass --frame");
    }
    if (loaded.rep.frame_fp != f.fingerprint()) {
      throw ValidationError("negativity: representation does not match the frame");
    }
    const auto report = negativity(loaded.rep, f.weights);
    std::cout << "min value:      " << report.min_value << "\n";
    std::cout << "negative mass:  " << report.negative_mass << "\n";
    std::cout << "negative count: " << report.count_negative << "\n";
    return 0;
  }

  if (cls_cmd->parsed()) {
    const Frame f = load_frame(cls_frame);
    const Frame e = load_frame(cls_dual);
    auto pair = make_dual_pair(f, e, tols.duality);
    std::vector<DensityOp> states;
    for (const auto& p : json_files_in(cls_states)) {
      states.push_back(load_state(p.string(), tols));
    }
    std::vector<Povm> povms;
    for (const auto& p : json_files_in(cls_povms)) {
      povms.push_back(load_povm(p.string()));
    }
    const auto report =
        classicality_check(pair, states, povms, tols.psd, tols.trace);
    std::cout << "classical_for_this_pair: "
              << (report.classical_for_this_pair ? "true" : "false") << "\n";
    std::size_t shown = 0;
    for (const auto& v : report.violations) {
      if (shown++ == 20) {
        std::cout << "... " << report.violations.size() - 20 << " more\n";
        break;
      }
      std::cout << to_string(v.kind) << " object " << v.object;
      if (v.outcome >= 0) std::cout << " outcome " << v.outcome;
      std::cout << " point " << v.point << " value " << v.value << "\n";
    }
    return report.classical_for_this_pair ? 0 : 1;
  }

  if (pure_cmd->parsed()) {
    const Frame f = load_frame(pure_frame);
    const Frame e = load_frame(pure_dual);
    auto pair = make_dual_pair(std::move(f), std::move(e), tols.duality);
    const LoadedRep loaded = rep_from_json(load_json_file(pure_rep));
    if (loaded.rep.frame_fp != pair.frame.fingerprint()) {
      throw ValidationError("check-pure: representation does not match the frame");
    }
    const Kernel3 kernel = star_kernel(pair);
    const bool pure = is_pure_state_rep(loaded.rep, kernel, pair.frame.weights,
                                        tols.purity, tols.trace);
    std::cout << "pure: " << (pure ? "true" : "false") << "\n";
    return pure ? 0 : 1;
  }

  if (star_cmd->parsed()) {
    for (const auto& [name, value] :
         std::map<std::string, std::string>{{"--frame", star_frame},
                                            {"--dual", star_dual},
                                            {"--a", star_a},
                                            {"--b", star_b}}) {
      if (value.empty()) {
        throw ValidationError("star: missing required option " + name);
      }
    }
    const Frame f = load_frame(star_frame);
    const Frame e = load_frame(star_dual);
    auto pair = make_dual_pair(f, e, tols.duality);
    const LoadedRep a = rep_from_json(load_json_file(star_a));
    const LoadedRep b = rep_from_json(load_json_file(star_b));
    for (const LoadedRep* r : {&a, &b}) {
      if (r->rep.frame_fp != pair.frame.fingerprint()) {
        throw ValidationError("star: representation does not match the frame");
      }
      if (r->via != Via::frame_F) {
        throw ValidationError("star: inputs must be represented through the frame");
      }
    }
    const CVec prod =
        pair.frame.size() <= 256
            ? star_product(a.rep, b.rep, star_kernel(pair), pair.frame.weights)
            : star_product_direct(a.rep, b.rep, pair);
    emit(resolve_out(star_out), complex_function_to_json(prod, pair.frame.fingerprint()));
    return 0;
  }

  if (witness_cmd->parsed()) {
    if (witness_dim < 2 || witness_seeds < 1) {
      throw ValidationError("nogo witness: need --dim >= 2 and --seeds >= 1");
    }
    json reports = json::array();
    bool all_witnessed = true;
    for (int s = 0; s < witness_seeds; ++s) {
      const std::uint64_t frame_seed = seed + static_cast<std::uint64_t>(s);
      const int n = witness_dim * witness_dim + (s % 4);
      const Frame f = random_frame(witness_dim, n, frame_seed, /*positive=*/true);
      WitnessReport r = positive_dual_witness(f, tols.psd);
      r.frame_seed = frame_seed;
      all_witnessed = all_witnessed && r.no_positive_dual_witnessed;
      reports.push_back(witness_report_to_json(r));
    }
    std::cout << reports.dump(2) << "\n";
    std::cout << (all_witnessed ? "all" : "NOT all") << " " << witness_seeds
              << " frames witnessed a negative canonical dual\n";
    if (!witness_out.empty()) emit(witness_out, reports);
    return all_witnessed ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const JsonError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotAFrameError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
