// Command-line front end: parameter sweeps, extension tables, tomography demo,
// end-to-end pipeline and raw conic solves. CSV schemas are in SCHEMAS.md.
//
// Exit codes: 0 success, 2 a required pipeline verdict did not PASS, 1 error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wernerq/certify.hpp"
#include "wernerq/extend.hpp"
#include "wernerq/filterops.hpp"
#include "wernerq/serialize.hpp"
#include "wernerq/solver.hpp"
#include "wernerq/states.hpp"
#include "wernerq/steer.hpp"
#include "wernerq/tomo.hpp"

namespace fs = std::filesystem;
using namespace wernerq;

namespace {

constexpr const char* kArtifactVersion = "1.0.0";

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Stable per-task seed: FNV-1a of the name keyed by the parent seed, passed
/// through the splitmix64 finalizer so that neighboring names spread out.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view name) {
  std::uint64_t z = fnv1a(name, fnv1a(std::to_string(parent)));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string hex(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

/// "a:step:b" (inclusive), "x,y,z" or a single value.
std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  try {
    if (s.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
      if (parts.size() != 3 || !(parts[1] > 0) || parts[2] < parts[0])
        throw DomainError("grid must be start:step:stop with step > 0");
      const long n = std::lround((parts[2] - parts[0]) / parts[1]);
      for (long i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[1]);
    } else {
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    }
  } catch (const std::invalid_argument&) {
    throw DomainError("invalid grid: " + s);
  }
  if (out.empty()) throw DomainError("empty grid: " + s);
  return out;
}

/// "a:b" (inclusive range) or "x,y,z".
std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  try {
    const auto colon = s.find(':');
    if (colon != std::string::npos) {
      const int a = std::stoi(s.substr(0, colon)), b = std::stoi(s.substr(colon + 1));
      if (b < a) throw DomainError("invalid range: " + s);
      for (int i = a; i <= b; ++i) out.push_back(i);
    } else {
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    }
  } catch (const std::invalid_argument&) {
    throw DomainError("invalid integer list: " + s);
  }
  if (out.empty()) throw DomainError("empty integer list: " + s);
  return out;
}

std::vector<std::string> parse_words(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

ExtensionFlavor flavor_from_string(const std::string& s) {
  for (ExtensionFlavor f : {ExtensionFlavor::SE, ExtensionFlavor::SQE, ExtensionFlavor::SEB})
    if (s == to_string(f)) return f;
  throw DomainError("unknown flavor: " + s + " (expected SE, SQE or SE_B)");
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw DimensionError("Csv: row width mismatch");
    rows_.push_back(cells);
  }

  void write(const fs::path& path) const {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Everything needed to replay a run; wall times never reach a CSV.
class Manifest {
 public:
  Manifest(std::vector<std::string> args, std::string config_digest, std::uint64_t seed)
      : doc_{{"command_line", args},
             {"config_digest", std::move(config_digest)},
             {"global_seed", seed},
             {"artifact_version", kArtifactVersion},
             {"tasks", json::array()}} {}

  void task(const std::string& name, std::uint64_t seed, double seconds) {
    doc_["tasks"].push_back({{"name", name}, {"seed", seed}, {"wall_time_s", seconds}});
  }

  void write(const fs::path& path) const {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << doc_.dump(2) << '\n';
  }

 private:
  json doc_;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// --- shared options ---------------------------------------------------------------------

struct Common {
  std::uint64_t seed = 0;
  std::string out = "out";
  std::string config;
};

struct SweepArgs {
  std::string task;
  std::string d = "3";
  std::string v = "0:0.05:0.5";
  std::string k = "2,3";
  std::string flavor = "SE";
  std::string side = "B";
  std::string ns = "2,3";
  int restarts = 64;
  int iters = 200;
  std::int64_t shots = 10000;
  int boot = 20;
};

// --- sweep ------------------------------------------------------------------------------------

Csv sweep_task(const SweepArgs& a, std::uint64_t task_seed) {
  const std::vector<double> vs = parse_grid(a.v);
  const std::vector<int> ds = parse_ints(a.d);
  std::uint64_t row_index = 0;
  auto row_seed = [&] { return derive_seed(task_seed, "row" + std::to_string(row_index++)); };

  if (a.task == "ppt") {
    Csv csv({"d", "v", "min_eig", "verdict", "seed"});
    for (int d : ds)
      for (double v : vs) {
        const std::uint64_t s = row_seed();
        const Certificate c = ppt_min_eig(werner(d, v));
        csv.row({std::to_string(d), fmt(v), fmt(c.value), to_string(c.verdict), std::to_string(s)});
      }
    return csv;
  }
  if (a.task == "distill") {
    Csv csv({"d", "v", "value", "verdict", "restarts", "seed"});
    for (int d : ds)
      for (double v : vs) {
        const std::uint64_t s = row_seed();
        const Certificate c = one_distillable(werner(d, v), a.restarts, s);
        csv.row({std::to_string(d), fmt(v), fmt(c.value), to_string(c.verdict),
                 std::to_string(a.restarts), std::to_string(s)});
      }
    return csv;
  }
  if (a.task == "fef") {
    Csv csv({"d", "v", "fef", "fef2_filtered", "threshold", "verdict", "restarts", "seed"});
    for (int d : ds)
      for (double v : vs) {
        const std::uint64_t s = row_seed();
        const Certificate c = fef(werner(d, v), a.restarts, s);
        csv.row({std::to_string(d), fmt(v), fmt(c.value), fmt(fef2_exact(rotated_filtered_state(v, d))),
                 fmt(c.threshold), to_string(c.verdict), std::to_string(a.restarts),
                 std::to_string(s)});
      }
    return csv;
  }
  if (a.task == "chsh") {
    Csv csv({"d", "v", "v_filtered", "chsh_filtered", "chsh_seesaw", "restarts", "seed"});
    for (int d : ds)
      for (double v : vs) {
        const std::uint64_t s = row_seed();
        const DensityMatrix f = rotated_filtered_state(v, d);
        csv.row({std::to_string(d), fmt(v), fmt(filtered_weight(d, v)),
                 fmt(chsh_horodecki(f).value),
                 fmt(seesaw_bell(f, chsh_functional(), a.restarts, s).value),
                 std::to_string(a.restarts), std::to_string(s)});
      }
    return csv;
  }
  if (a.task == "sr") {
    Csv csv({"d", "v", "n_s", "filtered", "sr", "gap", "restarts", "seed"});
    for (int d : ds)
      for (double v : vs)
        for (int ns : parse_ints(a.ns))
          for (int filtered : {0, 1}) {
            const std::uint64_t s = row_seed();
            const DensityMatrix rho = filtered ? rotated_filtered_state(v, d) : werner(d, v);
            const SeesawBound b =
                sr_state_lower_bound(rho, ns, rho.dim_a(), a.restarts, s, Side::A, a.iters);
            csv.row({std::to_string(d), fmt(v), std::to_string(ns), std::to_string(filtered),
                     fmt(b.value), fmt(b.gap), std::to_string(a.restarts), std::to_string(s)});
          }
    return csv;
  }
  if (a.task == "dc") {
    Csv csv({"d", "v", "delta", "delta_filtered", "v_dc", "seed"});
    for (int d : ds) {
      const std::optional<double> vdc = dc_threshold(d);
      for (double v : vs) {
        const std::uint64_t s = row_seed();
        csv.row({std::to_string(d), fmt(v), fmt(werner_delta(d, v)), fmt(filtered_delta(d, v)),
                 vdc ? fmt(*vdc) : "none", std::to_string(s)});
      }
    }
    return csv;
  }
  if (a.task == "extend") {
    Csv csv({"d", "k", "side", "flavor", "v", "t_star", "gap", "status", "seed"});
    for (int d : ds)
      for (int k : parse_ints(a.k))
        for (const std::string& side : parse_words(a.side))
          for (const std::string& fl : parse_words(a.flavor))
            for (double v : vs) {
              const std::uint64_t s = row_seed();
              ExtensionQuery q{werner(d, v), k, side_from_string(side), flavor_from_string(fl), {}};
              const ExtensionResult r = solve_extension(q);
              csv.row({std::to_string(d), std::to_string(k), side, fl, fmt(v), fmt(r.t_star),
                       fmt(r.gap), to_string(r.status), std::to_string(s)});
            }
    return csv;
  }
  if (a.task == "tomo") {
    Csv csv({"d", "v", "shots", "fidelity", "fidelity_mean", "fidelity_std", "boot", "seed"});
    for (int d : ds) {
      if (d != 3) throw DomainError("sweep tomo: the nine-vector frame needs d = 3");
      for (double v : vs) {
        const std::uint64_t s = row_seed();
        const DensityMatrix w = werner(3, v);
        const CountsRecord c = simulate_counts(w, a.shots, s);
        auto fid = [&](const DensityMatrix& r) { return uhlmann_fidelity(r, w); };
        const BootstrapStats b = bootstrap_error(c, fid, a.boot, derive_seed(s, "boot"));
        csv.row({"3", fmt(v), std::to_string(a.shots), fmt(fid(mle_state(c))), fmt(b.mean),
                 fmt(b.stddev), std::to_string(a.boot), std::to_string(s)});
      }
    }
    return csv;
  }
  throw DomainError("unknown task: " + a.task +
                    " (expected ppt, distill, fef, chsh, sr, dc, extend or tomo)");
}

// --- extend-table -----------------------------------------------------------------------------

Csv extend_table(const SweepArgs& a, std::uint64_t task_seed) {
  Csv csv({"d", "k", "side", "flavor", "v", "t_star", "gap", "status", "v_t", "seed"});
  std::uint64_t row_index = 0;
  for (int d : parse_ints(a.d))
    for (int k : parse_ints(a.k))
      for (const std::string& side : parse_words(a.side))
        for (const std::string& fl : parse_words(a.flavor)) {
          const std::uint64_t s = derive_seed(task_seed, "row" + std::to_string(row_index++));
          ExtensionQuery q{werner(d, 0.0), k, side_from_string(side), flavor_from_string(fl), {}};
          const ExtensionResult r = solve_extension(q);
          csv.row({std::to_string(d), std::to_string(k), side, fl, "0", fmt(r.t_star), fmt(r.gap),
                   to_string(r.status), fmt(critical_weight(r.t_star, d)), std::to_string(s)});
        }
  return csv;
}

// --- pipeline ---------------------------------------------------------------------------------

struct PipelineArgs {
  double v = 0.0;
  double depol = 0.02;
  double eps = 0.02;
  std::int64_t shots = 10000;
  int boot = 20;
  int restarts = 16;
  std::string require;
  std::string report;
};

json battery(const DensityMatrix& rho, const CountsRecord& counts, const DensityMatrix& target,
             int restarts, int boot, std::uint64_t seed) {
  json certs = json::array();
  auto add = [&](const Certificate& c, std::function<double(const DensityMatrix&)> f) {
    json j = to_json(c);
    j.erase("witness");
    j["property"] = property(c.kind);
    if (f) {
      const BootstrapStats b = bootstrap_error(counts, f, boot, derive_seed(seed, to_string(c.kind)));
      j["bootstrap"] = {{"mean", b.mean}, {"stddev", b.stddev}, {"resamples", boot}};
    }
    certs.push_back(j);
  };
  add(ppt_min_eig(rho), [](const DensityMatrix& r) { return ppt_min_eig(r).value; });
  add(one_distillable(rho, restarts, seed), nullptr);
  add(gurvits_ball(rho), nullptr);
  add(fef(rho, restarts, seed), nullptr);
  if (rho.dim_a() == 2 && rho.dim_b() == 2)
    add(chsh_horodecki(rho), [](const DensityMatrix& r) { return chsh_horodecki(r).value; });
  add(dense_coding_delta(rho), [](const DensityMatrix& r) { return dense_coding_delta(r).value; });

  const SeesawBound sr = sr_state_lower_bound(rho, 3, rho.dim_a(), 3, seed, Side::A, 40);
  const BootstrapStats fid = bootstrap_error(
      counts, [&](const DensityMatrix& r) { return uhlmann_fidelity(r, target); }, boot,
      derive_seed(seed, "fidelity"));
  return {{"fidelity", uhlmann_fidelity(rho, target)},
          {"fidelity_bootstrap", {{"mean", fid.mean}, {"stddev", fid.stddev}}},
          {"certificates", certs},
          {"steering_robustness", {{"value", sr.value}, {"gap", sr.gap}, {"n_s", 3}, {"restarts", 3}}}};
}

int run_pipeline(const PipelineArgs& a, const Common& common, std::uint64_t task_seed,
                 const std::vector<std::string>& args) {
  // Required names are checked before any work; a missing certificate (chsh
  // on a non-qubit state) counts as unmet.
  const std::vector<std::string> required = a.require.empty() ? std::vector<std::string>{} : parse_words(a.require);
  for (const std::string& name : required) certificate_kind_from_string(name);
  const NoiseSpec noise{a.depol, a.eps, derive_seed(task_seed, "noise")};
  const DensityMatrix ideal = werner(3, a.v);
  const DensityMatrix sur = noisy_surrogate(ideal, noise);
  const CountsRecord counts = simulate_counts(sur, a.shots, derive_seed(task_seed, "counts"));
  const DensityMatrix before = mle_state(counts);

  const FilterResult fr = apply_filter(sur, qubit_projection(3, 1, 2, Side::A),
                                       qubit_projection(3, 1, 2, Side::B));
  const CMatrix rot = filtered_state_rotation();
  const DensityMatrix filtered(hermitian_part(rot * fr.state.matrix() * rot.adjoint()), 2, 2);
  const CountsRecord fcounts =
      simulate_counts(filtered, a.shots, derive_seed(task_seed, "counts_filtered"), qubit_frame());
  const DensityMatrix after = mle_state(fcounts);

  json report = {
      {"schema", "wernerq-pipeline/1"},
      {"artifact_version", kArtifactVersion},
      {"command_line", args},
      {"v", a.v},
      {"noise", {{"depol", noise.depol}, {"coherent_eps", noise.coherent_eps}, {"seed", noise.seed}}},
      {"shots", a.shots},
      {"seed", common.seed},
      {"surrogate_fidelity", uhlmann_fidelity(sur, ideal)},
      {"filter_success_prob", fr.success_prob},
      {"before", battery(before, counts, ideal, a.restarts, a.boot, derive_seed(task_seed, "before"))},
      {"after", battery(after, fcounts, rotated_filtered_state(a.v), a.restarts, a.boot,
                        derive_seed(task_seed, "after"))}};

  int code = 0;
  json unmet = json::array();
  for (const std::string& name : required) {
    bool ok = false;
    for (const json& c : report["after"]["certificates"])
      if (c["name"] == name) ok = c["verdict"] == "PASS";
    if (!ok) unmet.push_back(name);
  }
  report["required"] = required;
  report["unmet"] = unmet;
  if (!unmet.empty()) code = 2;

  if (a.report.empty() || a.report == "-") {
    std::cout << report.dump(2) << '\n';
  } else {
    std::ofstream os(a.report);
    if (!os) throw Error("cannot write " + a.report);
    os << report.dump(2) << '\n';
  }
  return code;
}

// --- config handling ------------------------------------------------------------------------

/// Expands "--config file.json" into flags inserted right after the
/// subcommand, ahead of the user's flags, so that flags win (last value).
std::vector<std::string> expand_config(const std::vector<std::string>& args, std::string& digest) {
  digest = "none";
  std::vector<std::string> out;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
      continue;
    }
    out.push_back(args[i]);
  }
  if (path.empty()) return out;
  std::ifstream is(path);
  if (!is) throw Error("cannot read config " + path);
  const json cfg = json::parse(is);
  if (!cfg.is_object()) throw DomainError("config must be a JSON object");
  digest = hex(fnv1a(cfg.dump()));
  std::vector<std::string> flags;
  for (const auto& [key, val] : cfg.items()) {
    flags.push_back("--" + key);
    flags.push_back(val.is_string() ? val.get<std::string>() : val.dump());
  }
  const std::size_t at = out.size() > 1 ? 2 : out.size();  // after program and subcommand
  out.insert(out.begin() + static_cast<long>(at), flags.begin(), flags.end());
  return out;
}

int run(std::vector<std::string> raw_args);

int run_parsed(const std::vector<std::string>& args, const std::string& digest) {
  CLI::App app{"Werner-state certification toolkit", "wernerq"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "global seed");
    sub->add_option("--out", common.out, "output directory");
  };

  SweepArgs sw;
  CLI::App* sweep = app.add_subcommand("sweep", "grid sweep of one task; writes <out>/<task>.csv");
  add_common(sweep);
  sweep->add_option("--task", sw.task, "ppt, distill, fef, chsh, sr, dc, extend, tomo")->required();
  sweep->add_option("--d", sw.d, "local dimensions, e.g. 3 or 2:16");
  sweep->add_option("--v", sw.v, "weights, start:step:stop or a list");
  sweep->add_option("--k", sw.k, "extension copies (extend)");
  sweep->add_option("--flavor", sw.flavor, "SE, SQE, SE_B (extend)");
  sweep->add_option("--side", sw.side, "A, B (extend)");
  sweep->add_option("--ns", sw.ns, "measurement settings (sr)");
  sweep->add_option("--restarts", sw.restarts, "restarts for heuristic searches");
  sweep->add_option("--iters", sw.iters, "see-saw iterations per restart (sr)");
  sweep->add_option("--shots", sw.shots, "shots per setting (tomo)");
  sweep->add_option("--boot", sw.boot, "bootstrap resamples (tomo)");

  SweepArgs et;
  et.d = "2,3";
  et.flavor = "SE,SQE,SE_B";
  et.side = "A,B";
  CLI::App* etab = app.add_subcommand("extend-table", "t* at v = 0 and critical weights");
  add_common(etab);
  etab->add_option("--d", et.d, "local dimensions");
  etab->add_option("--k", et.k, "extension copies");
  etab->add_option("--flavor", et.flavor, "SE, SQE, SE_B");
  etab->add_option("--side", et.side, "A, B");

  PipelineArgs pl;
  CLI::App* pipe = app.add_subcommand("pipeline", "surrogate -> tomography -> filter -> battery");
  add_common(pipe);
  pipe->add_option("--v", pl.v, "Werner weight");
  pipe->add_option("--depol", pl.depol, "white-noise weight of the surrogate");
  pipe->add_option("--eps", pl.eps, "coherent perturbation size of the surrogate");
  pipe->add_option("--shots", pl.shots, "shots per setting");
  pipe->add_option("--boot", pl.boot, "bootstrap resamples");
  pipe->add_option("--restarts", pl.restarts, "restarts for heuristic searches");
  pipe->add_option("--require", pl.require, "certificate names that must PASS after filtering");
  pipe->add_option("--report", pl.report, "report path, - for stdout");

  double tv = 0.3;
  std::int64_t tshots = 10000;
  int tboot = 20;
  CLI::App* tomo = app.add_subcommand("tomo-demo", "simulate counts and reconstruct W3(v)");
  add_common(tomo);
  tomo->add_option("--v", tv, "Werner weight");
  tomo->add_option("--shots", tshots, "shots per setting");
  tomo->add_option("--boot", tboot, "bootstrap resamples");

  std::string program;
  double stol = 1e-7;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a conic program file");
  solve_cmd->add_option("file", program, "program in the wernerq-conic text format")->required();
  solve_cmd->add_option("--tol", stol, "solver tolerance");

  std::string manifest_path;
  CLI::App* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path, "manifest.json")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (replay->parsed()) {
    std::ifstream is(manifest_path);
    if (!is) throw Error("cannot read " + manifest_path);
    const json m = json::parse(is);
    return run(m.at("command_line").get<std::vector<std::string>>());
  }
  if (solve_cmd->parsed()) {
    std::ifstream is(program);
    if (!is) throw Error("cannot read " + program);
    const ConicProgram prog = ConicProgram::load(is);
    SolverOptions opts;
    opts.tol = stol;
    const ConicSolution sol = solve(prog, opts);
    json out = {{"status", to_string(sol.status)}, {"primal_obj", sol.primal_obj},
                {"dual_obj", sol.dual_obj},       {"gap", sol.gap},
                {"primal_res", sol.primal_res},   {"dual_res", sol.dual_res},
                {"iterations", sol.iterations},   {"x", std::vector<double>(sol.x.begin(), sol.x.end())}};
    std::cout << out.dump(2) << '\n';
    return 0;
  }

  Manifest manifest(args, digest, common.seed);
  const fs::path out_dir(common.out);
  int code = 0;
  if (sweep->parsed() || etab->parsed() || tomo->parsed()) fs::create_directories(out_dir);
  if (sweep->parsed()) {
    const std::uint64_t s = derive_seed(common.seed, sw.task);
    Stopwatch t;
    sweep_task(sw, s).write(out_dir / (sw.task + ".csv"));
    manifest.task(sw.task, s, t.seconds());
  } else if (etab->parsed()) {
    const std::uint64_t s = derive_seed(common.seed, "extend-table");
    Stopwatch t;
    extend_table(et, s).write(out_dir / "extend_table.csv");
    manifest.task("extend-table", s, t.seconds());
  } else if (tomo->parsed()) {
    const std::uint64_t s = derive_seed(common.seed, "tomo-demo");
    Stopwatch t;
    const DensityMatrix w = werner(3, tv);
    const CountsRecord c = simulate_counts(w, tshots, s, qutrit_bases(), "W3(" + fmt(tv) + ")");
    {
      std::ofstream csv(out_dir / "counts.csv");
      write_counts_csv(csv, c);
      std::ofstream side(out_dir / "counts.json");
      side << counts_sidecar(c).dump(2) << '\n';
    }
    const MleResult r = mle_reconstruct(c);
    const DensityMatrix rec = DensityMatrix::normalized(r.matrix, 3, 3);
    const BootstrapStats b = bootstrap_error(
        c, [&](const DensityMatrix& x) { return uhlmann_fidelity(x, w); }, tboot,
        derive_seed(s, "boot"));
    Csv csv({"v", "shots", "iterations", "log_likelihood", "fidelity", "fidelity_std", "boot", "seed"});
    csv.row({fmt(tv), std::to_string(tshots), std::to_string(r.iterations),
             fmt(r.log_likelihood.back()), fmt(uhlmann_fidelity(rec, w)), fmt(b.stddev),
             std::to_string(tboot), std::to_string(s)});
    csv.write(out_dir / "tomo_demo.csv");
    std::ofstream st(out_dir / "reconstruction.json");
    st << to_json(rec).dump() << '\n';
    manifest.task("tomo-demo", s, t.seconds());
  } else if (pipe->parsed()) {
    const std::uint64_t s = derive_seed(common.seed, "pipeline");
    Stopwatch t;
    code = run_pipeline(pl, common, s, args);
    manifest.task("pipeline", s, t.seconds());
    if (!pl.report.empty() && pl.report != "-") {
      const fs::path mp = fs::path(pl.report).parent_path() / "manifest.json";
      manifest.write(mp.empty() ? fs::path("manifest.json") : mp);
    }
    return code;
  }
  manifest.write(out_dir / "manifest.json");
  return code;
}

int run(std::vector<std::string> raw_args) {
  std::string digest;
  const std::vector<std::string> args = expand_config(raw_args, digest);
  return run_parsed(args, digest);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv, argv + argc));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
