#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "contlim/io.hpp"

using namespace contlim;

namespace {

enum Exit { ok = 0, failure = 1, negative = 2, undecided = 3 };

struct RunConfig {
  std::string input;
  std::string preset;
  double gamma = 1.0;
  double spacing = 1.0;
  bool spacing_given = false;
  double length = 1.0;
  Index grid = 64;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  Index alpha = 0;
  Index beta = 0;
  int p_max = 4;
  std::vector<double> t_grid{5.0, 10.0, 20.0, 40.0};
  double conv_tol = 1e-8;
};

std::shared_ptr<spdlog::logger> logger() {
  static auto log = [] {
    auto l = spdlog::stderr_color_mt("contlim");
    l->set_pattern("[%l] %v");
    const char* env = std::getenv("CONTLIM_LOG");
    l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
    return l;
  }();
  return log;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(cfg.out, text);
    logger()->info("wrote {}", cfg.out);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct LoadedInput {
  std::string kind;
  SuperOp channel;
  std::optional<MpsTensor> tensor;
  double spacing = 1.0;
};

LoadedInput load_input(const RunConfig& cfg) {
  if (cfg.input.empty() == cfg.preset.empty()) throw PreconditionError("exactly one of --input and --preset is required");
  LoadedInput in;
  if (!cfg.preset.empty()) {
    const MpsTensor t = presets::by_name(cfg.preset, cfg.gamma, cfg.spacing);
    in.kind = "mps";
    in.tensor = t;
    in.channel = transfer_matrix(t);
    in.spacing = t.spacing;
    return in;
  }
  const AnalyzeInput parsed = analyze_input_from_json(read_json_file(cfg.input));
  if (const auto* t = std::get_if<MpsTensor>(&parsed)) {
    in.kind = "mps";
    in.tensor = *t;
    in.channel = transfer_matrix(*t);
    in.spacing = cfg.spacing_given ? cfg.spacing : t->spacing;
  } else {
    in.kind = "channel";
    in.channel = kraus_to_superop(std::get<KrausChannel>(parsed));
    in.spacing = cfg.spacing;
  }
  logger()->debug("loaded {} input with D = {}", in.kind, in.channel.dim);
  return in;
}

Json spectrum_json(const SuperOp& e) {
  Json out = Json::array();
  for (const Complex& z : sorted_eigenvalues(e.matrix)) out.push_back({z.real(), z.imag()});
  return out;
}

int status_exit(DivisibilityStatus s) {
  switch (s) {
    case DivisibilityStatus::divisible:
    case DivisibilityStatus::markovian:
      return Exit::ok;
    case DivisibilityStatus::not_divisible:
      return Exit::negative;
    case DivisibilityStatus::inconclusive:
      return Exit::undecided;
  }
  return Exit::failure;
}

int cmd_analyze(const RunConfig& cfg) {
  const LoadedInput in = load_input(cfg);
  const std::string format = cfg.format.empty() ? "json" : cfg.format;
  const CptpReport cptp = is_cptp(in.channel, cfg.tol);
  if (!cptp.ok()) {
    std::ostringstream os;
    os << "input is not CPTP (min Choi eigenvalue " << cptp.min_choi_eigenvalue << ", trace violation " << cptp.tp_violation
       << "); normalize the tensor first";
    throw PreconditionError(os.str());
  }
  const DivisibilityVerdict v = analyze(in.channel, in.spacing, cfg.tol, cfg.p_max);
  logger()->info("status {}", to_string(v.status));
  if (format == "text") {
    std::ostringstream os;
    os << "kind: " << in.kind << "\nD: " << in.channel.dim << "\nstatus: " << to_string(v.status) << "\nspectrum:";
    for (const Complex& z : sorted_eigenvalues(in.channel.matrix)) os << " " << format_double(z.real()) << (z.imag() < 0 ? "-" : "+") << format_double(std::abs(z.imag())) << "i";
    os << "\n";
    if (v.coarse) os << "coarse: p = " << v.coarse->power << "\n";
    if (v.completed_by_search) os << "generator: completed by search\n";
    for (const auto& d : v.diagnostics) os << "note: " << d << "\n";
    emit(cfg, os.str());
  } else {
    Json out;
    out["input"] = {{"kind", in.kind}, {"dim", in.channel.dim}, {"spacing", in.spacing}};
    if (!cfg.preset.empty()) out["input"]["preset"] = cfg.preset;
    out["cptp"] = {{"completely_positive", cptp.completely_positive},
                   {"trace_preserving", cptp.trace_preserving},
                   {"min_choi_eigenvalue", cptp.min_choi_eigenvalue},
                   {"tp_violation", cptp.tp_violation}};
    out["spectrum"] = spectrum_json(in.channel);
    out["verdict"] = to_json(v);
    emit(cfg, dump(out));
  }
  return status_exit(v.status);
}

int cmd_gcmps(const RunConfig& cfg) {
  const LoadedInput in = load_input(cfg);
  const DivisibilityVerdict v = is_infinitely_divisible(in.channel, in.spacing, cfg.tol);
  const int code = status_exit(v.status);
  if (code != Exit::ok) {
    std::string msg = std::string("channel is ") + to_string(v.status);
    for (const auto& d : v.diagnostics) msg += "; " + d;
    logger()->error("{}", msg);
    return code;
  }
  const GeneralizedCmps g = from_verdict(v, cfg.tol);
  logger()->info("K = {}, {} jump operator(s)", g.ancilla_dim, g.species());
  emit(cfg, dump(to_json(g)));
  return Exit::ok;
}

GeneralizedCmps load_gcmps(const RunConfig& cfg) {
  if (cfg.input.empty() == cfg.preset.empty()) throw PreconditionError("exactly one of --input and --preset is required");
  if (!cfg.input.empty()) {
    const Json j = read_json_file(cfg.input);
    if (j.is_object() && j.contains("boundary")) return gcmps_from_json(j);
  }
  const LoadedInput in = load_input(cfg);
  const DivisibilityVerdict v = is_infinitely_divisible(in.channel, in.spacing, cfg.tol);
  if (status_exit(v.status) != Exit::ok) throw PreconditionError(std::string("input channel is ") + to_string(v.status));
  return from_verdict(v, cfg.tol);
}

int cmd_correlate(const RunConfig& cfg) {
  if (!(cfg.length > 0.0)) throw PreconditionError("--length must be positive");
  if (cfg.grid < 1) throw PreconditionError("--grid must be at least 1");
  const GeneralizedCmps g = load_gcmps(cfg);
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (cfg.alpha < 0 || cfg.alpha >= std::max<Index>(g.species(), 1) || cfg.beta < 0 || cfg.beta >= std::max<Index>(g.species(), 1))
    throw PreconditionError("--alpha/--beta out of range");

  std::vector<double> xs;
  const double h = cfg.length / static_cast<double>(cfg.grid);
  for (Index i = 0; i < cfg.grid; ++i) xs.push_back((static_cast<double>(i) + 0.5) * h);

  struct Row {
    double x, y;
    Complex value;
  };
  std::vector<Row> rows;
  for (double x : xs)
    for (double y : xs) {
      if (g.species() == 0) {
        rows.push_back({x, y, 0.0});
      } else if (x == y) {
        if (cfg.alpha == cfg.beta) rows.push_back({x, y, density(g, cfg.length, cfg.alpha, x)});
      } else {
        rows.push_back({x, y, correlation(g, cfg.length, cfg.alpha, cfg.beta, x, y)});
      }
    }

  const Json header = {{"K", g.ancilla_dim}, {"D", g.dim},           {"species", g.species()}, {"eta", g.statistics},
                       {"alpha", cfg.alpha}, {"beta", cfg.beta},     {"length", cfg.length},   {"grid", cfg.grid},
                       {"gamma", cfg.gamma}, {"spacing", cfg.spacing}};
  if (format == "json") {
    Json out = {{"header", header}, {"rows", Json::array()}};
    for (const Row& r : rows) out["rows"].push_back({r.x, r.y, r.value.real(), r.value.imag()});
    emit(cfg, dump(out));
  } else {
    std::ostringstream os;
    os << "# " << header.dump() << "\n";
    os << "x,y,re,im\n";
    for (const Row& r : rows)
      os << format_double(r.x) << "," << format_double(r.y) << "," << format_double(r.value.real()) << ","
         << format_double(r.value.imag()) << "\n";
    emit(cfg, os.str());
  }
  return Exit::ok;
}

int cmd_thermo(const RunConfig& cfg) {
  SuperOp p;
  std::optional<ProjectorCanonicalForm> cf;
  if (!cfg.input.empty()) {
    const Json j = read_json_file(cfg.input);
    if (j.is_object() && j.contains("blocks")) {
      cf = canonical_form_from_json(j);
      if (cf->d0 != 0) {
        logger()->error("canonical form has D_0 = {}; the thermodynamic generator needs D_0 = 0", cf->d0);
        return Exit::negative;
      }
      p = build_projector(*cf);
    }
  }
  if (!cf) {
    p = load_input(cfg).channel;
    if (!is_projector_channel(p, std::max(cfg.tol, 1e-8))) throw PreconditionError("input is not a projector quantum channel");
    cf = canonical_form(p, cfg.tol, cfg.seed);
    if (cf->d0 != 0) {
      logger()->error("projector has D_0 = {}; the thermodynamic generator needs D_0 = 0", cf->d0);
      return Exit::negative;
    }
  }
  const Lindblad gen = thermo_liouvillian(*cf);
  const ThermoReport rep = verify_thermo_limit(p, gen, cfg.t_grid, cfg.conv_tol);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "t,d\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i) os << format_double(rep.times[i]) << "," << format_double(rep.distances[i]) << "\n";
    emit(cfg, os.str());
  } else {
    Json table = Json::array();
    for (std::size_t i = 0; i < rep.times.size(); ++i) table.push_back({{"t", rep.times[i]}, {"d", rep.distances[i]}});
    emit(cfg, dump({{"canonical_form", to_json(*cf)}, {"generator", to_json(gen)}, {"table", table}, {"converged", rep.converged}}));
  }
  return rep.converged ? Exit::ok : Exit::undecided;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "input JSON file");
  sub->add_option("--preset", cfg.preset, "built-in tensor")->check(CLI::IsMember(presets::names()));
  sub->add_option("--gamma", cfg.gamma, "bracket rate per site")->capture_default_str();
  sub->add_option_function<double>(
         "--spacing",
         [&cfg](double a) {
           cfg.spacing = a;
           cfg.spacing_given = true;
         },
         "lattice spacing a (default 1, or the tensor's own)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol", cfg.tol, "numerical tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", cfg.seed, "seed for randomized steps")->capture_default_str();
  sub->add_option("--out", cfg.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuum limits of matrix product states"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* analyze_cmd = app.add_subcommand("analyze", "decide infinite divisibility of a transfer matrix");
  add_common(analyze_cmd, cfg);
  analyze_cmd->add_option("--format", cfg.format, "json (default) or text")->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_option("--p-max", cfg.p_max, "largest blocking power for the coarse search")->check(CLI::Range(2, 64))->capture_default_str();

  auto* gcmps_cmd = app.add_subcommand("gcmps", "write the generalised cMPS of a divisible input");
  add_common(gcmps_cmd, cfg);
  gcmps_cmd->add_option("--format", cfg.format, "json")->check(CLI::IsMember({"json"}));

  auto* corr_cmd = app.add_subcommand("correlate", "density and two-point function on a grid");
  add_common(corr_cmd, cfg);
  corr_cmd->add_option("--length", cfg.length, "segment length")->capture_default_str();
  corr_cmd->add_option("--grid", cfg.grid, "grid points")->capture_default_str();
  corr_cmd->add_option("--alpha", cfg.alpha, "first species")->capture_default_str();
  corr_cmd->add_option("--beta", cfg.beta, "second species")->capture_default_str();
  corr_cmd->add_option("--format", cfg.format, "csv (default) or json")->check(CLI::IsMember({"csv", "json"}));

  auto* thermo_cmd = app.add_subcommand("thermo", "thermodynamic generator of a projector channel");
  add_common(thermo_cmd, cfg);
  thermo_cmd->add_option("--t-grid", cfg.t_grid, "increasing times")->delimiter(',')->capture_default_str();
  thermo_cmd->add_option("--conv-tol", cfg.conv_tol, "distance required at the last time")->capture_default_str();
  thermo_cmd->add_option("--format", cfg.format, "json (default) or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Exit::ok : Exit::failure;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(cfg);
    if (gcmps_cmd->parsed()) return cmd_gcmps(cfg);
    if (corr_cmd->parsed()) return cmd_correlate(cfg);
    if (thermo_cmd->parsed()) return cmd_thermo(cfg);
  } catch (const std::exception& e) {
    logger()->error("{}", e.what());
    return Exit::failure;
  }
  return Exit::failure;
}
