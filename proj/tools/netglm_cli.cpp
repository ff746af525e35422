// netglm command-line front end.
//
// Exit codes: 0 success, 1 runtime or numerical failure, 2 bad invocation,
// 3 invalid data or model, 4 estimation did not converge.

#include <dlfcn.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netglm/assessment.hpp"
#include "netglm/csv_io.hpp"
#include "netglm/describe.hpp"
#include "netglm/error.hpp"
#include "netglm/estimator.hpp"
#include "netglm/exact_oracle.hpp"
#include "netglm/fixtures.hpp"
#include "netglm/glm.hpp"
#include "netglm/inference.hpp"
#include "netglm/sampler.hpp"
#include "netglm/state_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netglm;

namespace {

enum Exit { kOk = 0, kRuntime = 1, kUsage = 2, kValidation = 3, kConvergence = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string attrs, edges, neighborhoods;
  std::string formula;
  std::string type_x = "binomial", type_y = "binomial";
  bool fix_x = false, fix_z = false, fix_z_alocal = false;
  bool directed = true;
  std::optional<double> scale_x, scale_y;
  int max_it = 300;
  int burn_in = 100;
  int n_sim = 100;
  std::uint64_t seed = 1;
  int y_proposals = 0;
  std::int64_t z_proposals = 0;
  bool reference_shaped = false;
  std::string kernel = "tnt";
  std::string out = ".";
  int threads = 1;
  bool deterministic = false;
  std::vector<std::string> plugins;

  std::string fit_path;  // fit.json holding theta
  std::string theta;     // comma-separated weights
  bool reuse_samples = false;
  std::string samples_path;
  bool save_states = false;
  std::vector<std::string> stats;
  std::string variant = "conditional";
  std::string profile = "directed_binary";
  int n_units = 100;
};

// Derived streams of the top-level seed, one per consumer.
enum SeedStream : std::uint64_t { kFitSamples = 1, kSimulate = 2, kAssess = 3, kPredict = 4 };

void load_plugins(const Options& o, TermRegistry& registry) {
  for (const auto& path : o.plugins) {
    // Handles stay open: registered term callbacks live in the module.
    void* h = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
    if (!h) throw ValidationError("cannot load plugin " + path + ": " + dlerror());
    auto fn = reinterpret_cast<PluginRegisterFn>(dlsym(h, "netglm_register_terms"));
    if (!fn) throw ValidationError("plugin " + path + " does not export netglm_register_terms");
    fn(registry);
  }
}

PopulationData load_data(const Options& o) {
  if (o.attrs.empty()) throw UsageError("--data-attrs is required");
  if (o.edges.empty()) throw UsageError("--data-edges is required");
  BuildFlags f;
  f.directed = o.directed;
  f.x_family = parse_family(o.type_x);
  f.y_family = parse_family(o.type_y);
  f.fix_x = o.fix_x;
  f.fix_z = o.fix_z;
  f.fix_z_alocal = o.fix_z_alocal;
  f.x_scale = o.scale_x;
  f.y_scale = o.scale_y;
  DataPaths p{o.attrs, o.edges, std::nullopt};
  if (!o.neighborhoods.empty()) p.neighborhoods = o.neighborhoods;
  return load_population(p, f);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + " is not valid JSON: " + e.what());
  }
}

// Without --formula, commands that take --fit reuse the formula stored there.
Model load_model(const Options& o, const PopulationData& data, const TermRegistry& registry) {
  std::string formula = o.formula;
  if (formula.empty() && !o.fit_path.empty()) formula = read_json(o.fit_path).value("formula", "");
  if (formula.empty()) throw UsageError("--formula is required");
  return Model::bind(parse_formula(formula, registry), data, registry);
}

// Weights from --theta or from the theta/labels of a fit.json.
Eigen::VectorXd load_theta(const Options& o, const Model& model) {
  std::vector<double> v;
  if (!o.theta.empty()) {
    std::stringstream ss(o.theta);
    for (std::string tok; std::getline(ss, tok, ',');) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(tok, &used));
        if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw ValidationError("--theta: '" + tok + "' is not a number");
      }
    }
  } else if (!o.fit_path.empty()) {
    json j = read_json(o.fit_path);
    auto labels = j.at("labels").get<std::vector<std::string>>();
    if (labels != model.labels())
      throw ValidationError(o.fit_path + " was fitted with a different model (labels differ from --formula)");
    v = j.at("theta").get<std::vector<double>>();
  } else {
    throw UsageError("weights required: pass --fit <fit.json> or --theta a,b,...");
  }
  if (static_cast<int>(v.size()) != model.dim())
    throw ValidationError("expected " + std::to_string(model.dim()) + " weights, got " + std::to_string(v.size()));
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SamplerConfig sampler_config(const Options& o, const PopulationData& data, SeedStream stream) {
  SamplerConfig c;
  c.n_burn_in = o.burn_in;
  c.n_simulation = o.n_sim;
  c.seed = derive_seed(o.seed, stream);
  if (o.reference_shaped) c = reference_shaped(data, c);
  if (o.y_proposals > 0) c.y_proposals_per_draw = o.y_proposals;
  if (o.z_proposals > 0) c.z_proposals_per_draw = o.z_proposals;
  if (o.kernel == "tnt")
    c.z_kernel = ZKernel::tnt;
  else if (o.kernel == "gibbs")
    c.z_kernel = ZKernel::gibbs;
  else
    throw UsageError("--kernel must be tnt or gibbs");
  return c;
}

std::string out_path(const Options& o, const std::string& name) {
  fs::create_directories(o.out);
  return (fs::path(o.out) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string default_samples(const Options& o) {
  return o.samples_path.empty() ? (fs::path(o.out) / "samples.json").string() : o.samples_path;
}

std::optional<SimulationResult> stored_samples(const Options& o, const PopulationData& data) {
  if (!o.reuse_samples) return std::nullopt;
  return read_samples(default_samples(o), data.n(), data.directed());
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

int cmd_describe(const Options& o) {
  PopulationData data = load_data(o);
  std::cout << describe_text(data);
  State s = data.state();
  for (const auto& name : o.stats)
    for (const auto& [curve, h] : named_distributions(name, data, s)) {
      std::string path = out_path(o, "describe_" + curve + ".csv");
      write_text(path, histogram_csv(h));
      std::cout << "wrote " << path << "\n";
    }
  return kOk;
}

int cmd_fit(const Options& o, const TermRegistry& registry) {
  PopulationData data = load_data(o);
  Model model = load_model(o, data, registry);
  if (o.n_sim < 2) throw UsageError("fit needs --n-sim >= 2 draws for standard errors");
  FitConfig fc;
  fc.max_it = o.max_it;
  FitResult f = fit(model, data, fc);
  write_trace_csv(f, out_path(o, "trace.csv"));

  json j;
  j["formula"] = render_formula(model.spec());
  j["labels"] = f.labels;
  j["theta"] = to_vector(f.theta);
  j["converged"] = f.converged;
  j["iterations"] = f.iterations;
  j["loglik"] = f.loglik;
  j["grad_norm"] = f.grad_norm;
  if (!f.converged) {
    std::ofstream(out_path(o, "fit.json")) << j.dump(2) << "\n";
    throw ConvergenceError("no convergence after " + std::to_string(f.iterations) +
                           " iterations (gradient sup-norm " + std::to_string(f.grad_norm) +
                           "); raise --max-it or simplify the model");
  }

  SamplerConfig sc = sampler_config(o, data, kFitSamples);
  SimulationResult sim = simulate(model, f.theta, data, sc);
  write_samples(out_path(o, "samples.json"), sim, model.labels());
  CovarianceResult cov = mple_covariance(model, data, f.theta, sim.states, o.threads);
  SummaryTable table = summarize(f, cov.covariance);

  std::vector<std::vector<double>> rows;
  for (int r = 0; r < cov.covariance.rows(); ++r) rows.push_back(to_vector(cov.covariance.row(r).transpose()));
  j["covariance"] = rows;
  j["covariance_samples_used"] = cov.used;
  j["covariance_samples_dropped"] = cov.dropped;
  j["sampler_transitions"] = sim.transitions;
  j["summary"] = summary_json(table, !o.deterministic);
  std::ofstream(out_path(o, "fit.json")) << j.dump(2) << "\n";

  std::string text = render_summary(table, !o.deterministic);
  write_text(out_path(o, "summary.txt"), text);
  std::cout << text;
  return kOk;
}

int cmd_simulate(const Options& o, const TermRegistry& registry) {
  PopulationData data = load_data(o);
  Model model = load_model(o, data, registry);
  Eigen::VectorXd theta = load_theta(o, model);
  SamplerConfig sc = sampler_config(o, data, kSimulate);
  sc.keep_states = o.save_states;
  SimulationResult sim = simulate(model, theta, data, sc);
  write_statistics_csv(out_path(o, "simulation.csv"), sim, model.labels());
  if (o.save_states) write_samples(default_samples(o), sim, model.labels());
  std::cout << "draws: " << sim.statistics.size() << "\nsampler transitions: " << sim.transitions << "\n";
  return kOk;
}

int cmd_assess(const Options& o, const TermRegistry& registry) {
  PopulationData data = load_data(o);
  Model model = load_model(o, data, registry);
  Eigen::VectorXd theta = load_theta(o, model);
  auto stored = stored_samples(o, data);
  std::vector<std::string> stats = o.stats.empty() ? assessment_statistics() : o.stats;
  AssessmentReport rep =
      assess(model, theta, data, stats, stored ? &*stored : nullptr, sampler_config(o, data, kAssess));
  json j;
  j["transitions"] = rep.transitions;
  j["curves"] = json::array();
  for (const Curve& c : rep.curves) {
    std::string file = "assess_" + c.name + ".csv";
    write_text(out_path(o, file), curve_csv(c));
    j["curves"].push_back({{"name", c.name}, {"file", file}});
  }
  std::ofstream(out_path(o, "assess.json")) << j.dump(2) << "\n";
  std::cout << "curves: " << rep.curves.size() << "\nsampler transitions: " << rep.transitions << "\n";
  return kOk;
}

int cmd_predict(const Options& o, const TermRegistry& registry) {
  PopulationData data = load_data(o);
  Model model = load_model(o, data, registry);
  Eigen::VectorXd theta = load_theta(o, model);
  PredictionVariant variant;
  if (o.variant == "conditional")
    variant = PredictionVariant::conditional;
  else if (o.variant == "marginal")
    variant = PredictionVariant::marginal;
  else
    throw UsageError("--variant must be conditional or marginal");
  std::optional<SimulationResult> samples = stored_samples(o, data);
  if (variant == PredictionVariant::marginal && !samples) {
    SamplerConfig sc = sampler_config(o, data, kPredict);
    samples = simulate(model, theta, data, sc);
  }
  Predictions p = predict(model, theta, data, variant, samples ? &*samples : nullptr);
  auto emit = [&](const std::string& name, const std::string& text) {
    std::string path = out_path(o, name);
    write_text(path, text);
    std::cout << "wrote " << path << "\n";
  };
  if (!p.x.empty()) emit("predictions_x.csv", unit_predictions_csv(p.x, data));
  if (!p.y.empty()) emit("predictions_y.csv", unit_predictions_csv(p.y, data));
  if (!p.z.empty()) emit("predictions_z.csv", dyad_predictions_csv(p.z, data));
  return kOk;
}

// Exact conditionals by enumeration next to the model's logistic form, at the observed state.
int cmd_oracle(const Options& o, const TermRegistry& registry) {
  PopulationData data = load_data(o);
  Model model = load_model(o, data, registry);
  Eigen::VectorXd theta = load_theta(o, model);
  ExactDistribution dist = enumerate(model, data, theta, Enumeration::gray_code);
  const State s = data.state();
  std::ostringstream csv;
  csv << "kind,src,dst,exact,model,abs_error\n";
  double worst = 0.0;
  for (const Target& t : dist.vars) {
    double exact = exact_conditional(dist, t, s);
    double fitted = logistic(model.change_statistic(data, s, t).dot(theta));
    worst = std::max(worst, std::abs(exact - fitted));
    const char* kind = t.kind == Target::x ? "x" : t.kind == Target::y ? "y" : "z";
    csv << kind << "," << csv_escape(data.unit_ids[t.i]) << ","
        << (t.kind == Target::z ? csv_escape(data.unit_ids[t.j]) : std::string()) << "," << format_number(exact)
        << "," << format_number(fitted) << "," << format_number(std::abs(exact - fitted)) << "\n";
  }
  write_text(out_path(o, "oracle.csv"), csv.str());
  std::cout << "states: " << dist.size() << "\nlog normalizing constant: " << format_number(dist.log_c)
            << "\nmax abs error: " << format_number(worst) << "\n";
  return kOk;
}

int cmd_fixture(const Options& o) {
  PopulationData data = generate_fixture(parse_fixture_profile(o.profile), o.n_units, o.seed);
  write_population(data, o.out);
  std::cout << describe_text(data);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netglm: joint models of unit attributes and network ties"};
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  auto* data = "Data";
  app.add_option("--data-attrs", o.attrs, "attributes CSV (unit id, x, y, covariates)")->group(data);
  app.add_option("--data-edges", o.edges, "edges CSV (src, dst)")->group(data);
  app.add_option("--data-neighborhoods", o.neighborhoods, "neighborhood CSV (unit, member); default all units")
      ->group(data);
  app.add_option("--directed", o.directed, "treat edges as directed (true/false)")->group(data);
  app.add_option("--type-x", o.type_x, "family of x: binomial, poisson or normal")->group(data);
  app.add_option("--type-y", o.type_y, "family of y: binomial, poisson or normal")->group(data);
  app.add_flag("--fix-x", o.fix_x, "treat x as fixed")->group(data);
  app.add_flag("--fix-z", o.fix_z, "treat all ties as fixed")->group(data);
  app.add_flag("--fix-z-alocal", o.fix_z_alocal, "fix ties between units with disjoint neighborhoods")->group(data);
  app.add_option("--scale-x", o.scale_x, "variance of a normal x (default: sample variance)")->group(data);
  app.add_option("--scale-y", o.scale_y, "variance of a normal y (default: sample variance)")->group(data);

  auto* model = "Model";
  app.add_option("--formula", o.formula, "model formula, e.g. \"attribute_y + edges(mode = 'local')\"")
      ->group(model);
  app.add_option("--plugin", o.plugins, "shared module exporting netglm_register_terms")->group(model);
  app.add_option("--fit", o.fit_path, "fit.json supplying the weights")->group(model);
  app.add_option("--theta", o.theta, "weights as a comma-separated list in label order")->group(model);

  auto* run = "Run";
  app.add_option("--max-it", o.max_it, "maximum outer iterations of the estimator")->group(run);
  app.add_option("--burn-in", o.burn_in, "discarded draws")->group(run);
  app.add_option("--n-sim", o.n_sim, "recorded draws")->group(run);
  app.add_option("--seed", o.seed, "top-level seed; every random stream derives from it")->group(run);
  app.add_option("--y-proposals", o.y_proposals, "attribute updates per draw (default 10 N)")->group(run);
  app.add_option("--z-proposals", o.z_proposals, "tie proposals per draw (default 10 N)")->group(run);
  app.add_flag("--reference-shaped", o.reference_shaped, "10 tie proposals per free dyad per draw")->group(run);
  app.add_option("--kernel", o.kernel, "tie kernel: tnt or gibbs")->group(run);
  app.add_option("--out", o.out, "output directory")->group(run);
  app.add_option("--threads", o.threads, "worker cap for parallel sections")->check(CLI::PositiveNumber)->group(run);
  app.add_flag("--deterministic", o.deterministic, "omit timings so outputs are byte-identical across runs")
      ->group(run);
  app.add_option("--samples", o.samples_path, "samples file (default <out>/samples.json)")->group(run);
  app.add_flag("--reuse-samples", o.reuse_samples, "use stored draws instead of simulating")->group(run);

  auto* describe = app.add_subcommand("describe", "print the data summary; --stats writes distributions");
  auto* fit_cmd = app.add_subcommand("fit", "estimate weights; writes fit.json, trace.csv, summary.txt, samples.json");
  auto* sim_cmd = app.add_subcommand("simulate", "draw from the model; writes simulation.csv");
  auto* assess_cmd = app.add_subcommand("assess", "goodness-of-fit envelopes; writes assess_<curve>.csv");
  auto* predict_cmd = app.add_subcommand("predict", "prediction tables; writes predictions_<x|y|z>.csv");
  auto* oracle_cmd = app.add_subcommand("oracle", "exact conditionals of a tiny binary population; writes oracle.csv");
  auto* fixture_cmd = app.add_subcommand("fixture", "write a synthetic population to --out");

  for (auto* sc : {describe, assess_cmd})
    sc->add_option("--stats", o.stats, "statistics: degree, spillover_degree, geodesic, dyadwise_shared_partner, "
                                       "edgewise_shared_partner, x_distribution, y_distribution");
  sim_cmd->add_flag("--save-states", o.save_states, "also store the drawn states (see --samples)");
  predict_cmd->add_option("--variant", o.variant, "conditional or marginal");
  fixture_cmd->add_option("--profile", o.profile, "directed_binary or undirected_normal");
  fixture_cmd->add_option("--n", o.n_units, "number of units");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    TermRegistry registry = TermRegistry::with_builtins();
    load_plugins(o, registry);
    if (describe->parsed()) return cmd_describe(o);
    if (fit_cmd->parsed()) return cmd_fit(o, registry);
    if (sim_cmd->parsed()) return cmd_simulate(o, registry);
    if (assess_cmd->parsed()) return cmd_assess(o, registry);
    if (predict_cmd->parsed()) return cmd_predict(o, registry);
    if (oracle_cmd->parsed()) return cmd_oracle(o, registry);
    if (fixture_cmd->parsed()) return cmd_fixture(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nrun 'netglm --help' for the flag list\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const ConvergenceError& e) {
    std::cerr << "not converged: " << e.what() << "\n";
    return kConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
