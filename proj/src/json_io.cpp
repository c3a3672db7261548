#include "rcpe/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rcpe {

using nlohmann::json;

namespace {

json spec_to_json(const ActionClassSpec& spec) {
  json out;
  if (const auto* e = std::get_if<EnumeratedSpec>(&spec)) {
    out["type"] = "enumerated";
    out["actions"] = e->actions;
  } else if (const auto* k = std::get_if<KnapsackSpec>(&spec)) {
    out["type"] = "knapsack";
    out["weights"] = k->weights;
    out["capacity"] = k->capacity;
  } else {
    const auto& t = std::get<TransportSpec>(spec);
    out["type"] = "transport";
    out["supplies"] = t.supplies;
    out["demands"] = t.demands;
  }
  return out;
}

ActionClassSpec spec_from_json(const json& in) {
  const std::string type = in.at("type").get<std::string>();
  if (type == "enumerated") {
    EnumeratedSpec spec;
    spec.actions = in.at("actions").get<std::vector<ActionVector>>();
    return spec;
  }
  if (type == "knapsack") {
    KnapsackSpec spec;
    spec.weights = in.at("weights").get<std::vector<std::int64_t>>();
    spec.capacity = in.at("capacity").get<std::int64_t>();
    return spec;
  }
  if (type == "transport") {
    TransportSpec spec;
    spec.supplies = in.at("supplies").get<std::vector<std::int64_t>>();
    spec.demands = in.at("demands").get<std::vector<std::int64_t>>();
    return spec;
  }
  throw InvalidSpecError("instance json: unknown spec type '" + type + "'");
}

}  // namespace

std::string instance_to_json(const BanditInstance& instance) {
  json out;
  out["d"] = instance.d;
  out["mu"] = instance.mu;
  out["sigma"] = instance.noise_sigma;
  out["spec"] = spec_to_json(instance.spec);
  return out.dump();
}

BanditInstance instance_from_json(const std::string& text) {
  const json in = json::parse(text);
  BanditInstance instance;
  instance.d = in.at("d").get<std::size_t>();
  instance.mu = in.at("mu").get<std::vector<double>>();
  instance.noise_sigma = in.at("sigma").get<double>();
  instance.spec = spec_from_json(in.at("spec"));
  validate(instance);
  return instance;
}

std::string actions_to_json(std::size_t d, const std::vector<ActionVector>& actions) {
  json out;
  out["d"] = d;
  out["actions"] = actions;
  return out.dump();
}

std::vector<ActionVector> actions_from_json(const std::string& text, std::size_t expect_d) {
  const json in = json::parse(text);
  const auto d = in.at("d").get<std::size_t>();
  if (d != expect_d) throw InvalidSpecError("actions json: dimension mismatch");
  auto actions = in.at("actions").get<std::vector<ActionVector>>();
  for (const auto& a : actions) {
    if (a.size() != d) throw InvalidSpecError("actions json: action length != d");
  }
  return actions;
}

std::string trial_record_to_json(const TrialRecord& record) {
  json out;
  out["algo"] = record.algo;
  out["d"] = record.d;
  out["T"] = record.budget;
  out["seed"] = record.seed;
  out["pulls"] = record.pulls;
  out["output"] = record.output.has_value() ? json(*record.output) : json(nullptr);
  out["correct"] = record.correct;
  out["ms"] = record.wall_ms;
  return out.dump();
}

std::string gap_report_to_json(const GapReport& report) {
  json out;
  out["available"] = true;
  json gaps = json::array();
  for (double g : report.gaps) gaps.push_back(std::isfinite(g) ? json(g) : json(nullptr));
  out["gaps"] = std::move(gaps);
  out["H"] = report.H;
  out["H2"] = report.H2;
  out["L"] = report.L;
  out["U_A"] = report.U_A;
  out["V"] = report.V;
  out["V_appendix"] = report.V_appendix;
  out["best"] = report.best;
  return out.dump();
}

std::string metrics_unavailable_json(const std::string& reason) {
  json out;
  out["available"] = false;
  out["reason"] = reason;
  return out.dump();
}

SweepConfig sweep_config_from_json(const std::string& text) {
  const json in = json::parse(text);
  SweepConfig config;
  config.dims = in.at("dims").get<std::vector<std::size_t>>();
  config.budgets = in.at("budgets").get<std::vector<std::int64_t>>();
  config.trials = in.at("trials").get<std::size_t>();
  config.master_seed = in.at("seed").get<std::uint64_t>();
  config.family = in.at("family").get<std::string>();
  if (in.contains("sigma")) config.sigma_override = in.at("sigma").get<double>();
  if (in.contains("n_actions")) config.n_actions = in.at("n_actions").get<std::size_t>();
  for (const auto& a : in.at("algos")) {
    AlgoConfig algo;
    algo.name = a.at("name").get<std::string>();
    if (a.contains("beta")) algo.beta = a.at("beta").get<double>();
    if (a.contains("alloc")) {
      const std::string mode = a.at("alloc").get<std::string>();
      if (mode == "lagrange") {
        algo.alloc = AllocationMode::kLagrange;
      } else if (mode == "minimax") {
        algo.alloc = AllocationMode::kMinimax;
      } else {
        throw InvalidSpecError("sweep json: unknown alloc mode '" + mode + "'");
      }
    }
    config.algos.push_back(std::move(algo));
  }
  validate(config);
  return config;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace rcpe
