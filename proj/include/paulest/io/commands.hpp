// Copyright 2026 The paulest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Batch commands behind the command-line tool. Each command turns a parsed
// spec into a set of named output files held in memory; nothing touches the
// filesystem here, so a failing command never leaves partial output.

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paulest/io/spec_file.hpp"
#include "paulest/io/table.hpp"
#include "paulest/paulest.hpp"

namespace paulest::io {

enum class OutputFormat { Csv, Json };

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  OutputFormat format = OutputFormat::Csv;
  unsigned threads = 1;
};

struct OutputFile {
  std::string name;
  std::string contents;
};

struct CommandOutput {
  std::vector<OutputFile> files;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"fisher", "optimal-config", "optimize", "estimate", "simulate", "sweep"};
  return names;
}

namespace detail {

using Json = nlohmann::ordered_json;

inline Json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Map: {
      Json j = Json::object();
      for (const auto& kv : node) j[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return j;
    }
    case YAML::NodeType::Sequence: {
      Json j = Json::array();
      for (const auto& item : node) j.push_back(yaml_to_json(item));
      return j;
    }
    case YAML::NodeType::Scalar: {
      const auto& s = node.Scalar();
      long long n = 0;
      const auto ires = std::from_chars(s.data(), s.data() + s.size(), n);
      if (ires.ec == std::errc() && ires.ptr == s.data() + s.size()) return n;
      double v = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
      return s;
    }
    default:
      return nullptr;
  }
}

inline Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline void check_top_level(const SpecDocument& doc, const std::string& command,
                            std::initializer_list<const char*> allowed) {
  require_keys(doc.root, command + " spec", allowed);
}

inline std::uint64_t resolve_seed(const SpecDocument& doc, const CommandOptions& opt) {
  if (opt.seed) return *opt.seed;
  return scalar_or<std::uint64_t>(doc.root["seed"], "seed", 0);
}

struct Emitter {
  const std::string command;
  const SpecDocument& doc;
  const CommandOptions& opt;
  std::uint64_t seed = 0;
  CommandOutput out;
  Json meta_extra = Json::object();

  void table(const std::string& stem, const Table& t) {
    if (opt.format == OutputFormat::Csv) {
      out.files.push_back({stem + ".csv", render_csv(t, command, doc.hash, seed)});
    } else {
      out.files.push_back({stem + ".json", render_json(t, command, doc.hash, seed)});
    }
  }

  void file(std::string name, std::string contents) { out.files.push_back({std::move(name), std::move(contents)}); }

  CommandOutput finish() {
    Json meta;
    meta["format"] = "paulest-meta";
    meta["version"] = 1;
    meta["library_version"] = kVersion;
    meta["command"] = command;
    meta["spec_hash"] = hex64(doc.hash);
    meta["seed"] = seed;
    Json files = Json::array();
    for (const auto& f : out.files) files.push_back(f.name);
    meta["outputs"] = std::move(files);
    meta["spec"] = yaml_to_json(doc.root);
    for (auto it = meta_extra.begin(); it != meta_extra.end(); ++it) meta[it.key()] = it.value();
    out.files.push_back({command + ".meta.json", meta.dump(2) + "\n"});
    return std::move(out);
  }
};

inline Table long_table() { return Table{{"quantity", "config", "i", "j", "value"}, {}}; }

inline void add_matrix(Table& t, const std::string& quantity, const Cell& config, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      t.add({quantity, config, std::int64_t{i + 1}, std::int64_t{j + 1}, m(i, j)});
    }
  }
}

inline void add_vector(Table& t, const std::string& quantity, const Cell& config, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) t.add({quantity, config, std::int64_t{i + 1}, std::monostate{}, v[i]});
}

inline void add_scalar(Table& t, const std::string& quantity, const Cell& config, double v) {
  t.add({quantity, config, std::monostate{}, std::monostate{}, v});
}

inline void add_cramer_rao(Table& t, const FisherMatrix& total) {
  const auto crb = cramer_rao_bound(total);
  if (crb.bounded) {
    add_matrix(t, "crb", std::string("all"), crb.covariance);
  } else {
    for (std::size_t k = 0; k < crb.null_directions.size(); ++k) {
      add_vector(t, "crb_null_direction", static_cast<std::int64_t>(k + 1), crb.null_directions[k]);
    }
  }
}

inline std::vector<QubitConfiguration> parse_qubit_configurations(const YAML::Node& node) {
  if (!node || !node.IsSequence() || node.size() == 0) throw SpecError("configurations must be a non-empty list");
  std::vector<QubitConfiguration> out;
  for (const auto& item : node) {
    require_keys(item, "qubit configuration", {"theta", "m"});
    out.push_back({vector3(item["theta"], "configuration.theta"), vector3(item["m"], "configuration.m")});
  }
  return out;
}

inline ConfigurationSet as_set(const std::vector<QubitConfiguration>& configs) {
  if (configs.size() != 3) throw SpecError("exactly three configurations are needed here");
  return ConfigurationSet{{configs[0], configs[1], configs[2]}};
}

struct GeneralConfig {
  MeasurementConfiguration config;
  std::optional<BlockOptimum> optimum;
  std::size_t block = 0;  // 0-based, only meaningful with `optimum`
};

inline std::vector<GeneralConfig> parse_general_configurations(const YAML::Node& node, const GeneralizedPauliChannel& ch,
                                                               std::uint64_t seed) {
  if (!node || !node.IsSequence() || node.size() == 0) throw SpecError("configurations must be a non-empty list");
  std::vector<GeneralConfig> out;
  const auto len = static_cast<Eigen::Index>(ch.dim() * ch.dim());
  for (const auto& item : node) {
    require_keys(item, "configuration", {"optimal_block", "block", "state", "effect"});
    GeneralConfig cfg;
    if (item["optimal_block"]) {
      const int block = scalar<int>(item["optimal_block"], "configuration.optimal_block");
      if (block < 1 || static_cast<std::size_t>(block) > ch.decomposition.block_count()) {
        throw SpecError("optimal_block " + std::to_string(block) + " out of range 1.." +
                        std::to_string(ch.decomposition.block_count()));
      }
      cfg.block = static_cast<std::size_t>(block - 1);
      cfg.optimum = optimal_block_config(ch, cfg.block, seed);
      cfg.config = cfg.optimum->config;
    } else {
      cfg.config.state = CoefficientVector::state(real_vector(item["state"], "configuration.state", len), ch.dim());
      cfg.config.effect = CoefficientVector::effect(real_vector(item["effect"], "configuration.effect", len), ch.dim());
      const auto sr = validate_state(cfg.config.state, *ch.basis);
      if (!sr.valid) throw InvalidStateError("configuration state: " + sr.message);
      const auto er = validate_effect(cfg.config.effect, *ch.basis);
      if (!er.valid) throw InvalidStateError("configuration effect: " + er.message);
    }
    out.push_back(std::move(cfg));
  }
  return out;
}

inline int block_multiplicity(const GeneralizedPauliChannel& ch, std::size_t block, const BlockOptimum& optimum) {
  if (auto kind = ch.decomposition.kind(block)) {
    const int expected = minimal_projection_rank(*kind, ch.dim());
    if (expected != optimum.rank) {
      throw StructureError("block " + std::to_string(block + 1) + " tagged " + kind->tag() + " expects rank " +
                           std::to_string(expected) + " projections, found rank " + std::to_string(optimum.rank));
    }
  }
  return optimum.rank;
}

inline std::string yaml_list(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  return s + "]";
}

// ---------------------------------------------------------------------------

inline CommandOutput cmd_fisher(const SpecDocument& doc, const CommandOptions& opt) {
  check_top_level(doc, "fisher", {"channel", "configurations", "seed"});
  Emitter em{"fisher", doc, opt, resolve_seed(doc, opt)};
  const auto channel = parse_channel(doc.root["channel"], doc.base_dir);
  Table t = long_table();
  if (channel.is_qubit()) {
    const auto& ch = channel.qubit();
    const auto configs = parse_qubit_configurations(doc.root["configurations"]);
    FisherMatrix total = FisherMatrix::Zero(3, 3);
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const Cell id = static_cast<std::int64_t>(k + 1);
      // Fisher information uses the contractions along the channel axes.
      const FisherMatrix f = qubit_fisher_matrix(ch.lambdas, configs[k]);
      add_scalar(t, "probability", id, output_probability(ch, configs[k].theta, configs[k].m));
      add_matrix(t, "fisher", id, f);
      add_scalar(t, "trace", id, total_fisher_trace(ch.lambdas, configs[k]));
      total += f;
    }
    add_matrix(t, "total_fisher", std::string("all"), total);
    const double det = configs.size() == 3 ? total_fisher_det(ch.lambdas, as_set(configs)) : total.determinant();
    add_scalar(t, "det_total", std::string("all"), det);
    add_scalar(t, "trace_total", std::string("all"), total.trace());
    add_cramer_rao(t, total);
  } else {
    const auto& ch = channel.generalized();
    const auto configs = parse_general_configurations(doc.root["configurations"], ch, em.seed);
    const auto blocks = static_cast<Eigen::Index>(ch.decomposition.block_count());
    FisherMatrix total = FisherMatrix::Zero(blocks, blocks);
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const Cell id = static_cast<std::int64_t>(k + 1);
      const auto& cfg = configs[k];
      add_scalar(t, "probability", id, output_probability(ch, cfg.config.state, cfg.config.effect));
      const FisherMatrix f = generalized_fisher_matrix(ch, cfg.config);
      for (Eigen::Index b = 0; b < blocks; ++b) {
        if (f(b, b) != 0.0) t.add({"fisher_diag", id, std::int64_t{b + 1}, std::int64_t{b + 1}, f(b, b)});
      }
      if (cfg.optimum) {
        const auto j = static_cast<std::int64_t>(cfg.block + 1);
        const int k_mult = block_multiplicity(ch, cfg.block, *cfg.optimum);
        t.add({"multiplicity", id, j, std::monostate{}, static_cast<double>(k_mult)});
        t.add({"max_fisher_info", id, j, std::monostate{},
               max_fisher_info(ch.dim(), k_mult, ch.lambdas[static_cast<Eigen::Index>(cfg.block)])});
      }
      total += f;
    }
    add_matrix(t, "total_fisher", std::string("all"), total);
    add_cramer_rao(t, total);
  }
  em.table("fisher", t);
  return em.finish();
}

inline CommandOutput cmd_optimal_config(const SpecDocument& doc, const CommandOptions& opt) {
  check_top_level(doc, "optimal-config", {"channel", "seed"});
  Emitter em{"optimal-config", doc, opt, resolve_seed(doc, opt)};
  const auto channel = parse_channel(doc.root["channel"], doc.base_dir);
  const std::string header = "# paulest optimal configuration spec_hash=" + hex64(doc.hash) +
                             " seed=" + std::to_string(em.seed) + "\nconfigurations:\n";
  std::string configs_yaml = header;
  if (channel.is_qubit()) {
    const auto& ch = channel.qubit();
    const auto set = optimal_qubit_configuration();
    Table t = long_table();
    add_matrix(t, "c_matrix", std::string("all"), set.c_matrix());
    for (std::size_t k = 0; k < 3; ++k) {
      const Cell id = static_cast<std::int64_t>(k + 1);
      add_vector(t, "theta", id, set.configs[k].theta);
      add_vector(t, "m", id, set.configs[k].m);
      t.add({"fisher_diag", id, std::int64_t(k + 1), std::int64_t(k + 1),
             qubit_fisher_matrix(ch.lambdas, set.configs[k])(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k))});
      t.add({"max_fisher_info", id, std::int64_t(k + 1), std::monostate{},
             max_fisher_info(2, 1, ch.lambdas[static_cast<Eigen::Index>(k)])});
      configs_yaml += "  - {theta: " + yaml_list(set.configs[k].theta) + ", m: " + yaml_list(set.configs[k].m) + "}\n";
    }
    add_scalar(t, "det_total", std::string("all"), total_fisher_det(ch.lambdas, set));
    em.table("optimal-config", t);
  } else {
    const auto& ch = channel.generalized();
    Table t{{"block", "kind", "multiplicity", "m0", "d", "lambda", "fisher_diag", "max_fisher_info"}, {}};
    for (std::size_t b = 0; b < ch.decomposition.block_count(); ++b) {
      const auto optimum = optimal_block_config(ch, b, em.seed);
      const int k_mult = block_multiplicity(ch, b, optimum);
      const auto kind = ch.decomposition.kind(b).value_or(infer_block_kind(ch.decomposition, *ch.basis, b));
      const double lambda = ch.lambdas[static_cast<Eigen::Index>(b)];
      t.add({static_cast<std::int64_t>(b + 1), kind.tag(), static_cast<std::int64_t>(k_mult),
             optimum.config.effect.coeffs[0], optimum.overlap, lambda, block_fisher_diag(ch, optimum.config, b),
             max_fisher_info(ch.dim(), k_mult, lambda)});
      configs_yaml += "  - {block: " + std::to_string(b + 1) + ", state: " + yaml_list(optimum.config.state.coeffs) +
                      ", effect: " + yaml_list(optimum.config.effect.coeffs) + "}\n";
    }
    em.table("optimal-config", t);
  }
  em.file("optimal-config.configurations.yaml", configs_yaml);
  return em.finish();
}

inline CommandOutput cmd_optimize(const SpecDocument& doc, const CommandOptions& opt) {
  check_top_level(doc, "optimize", {"channel", "lambdas", "optimizer", "seed"});
  Emitter em{"optimize", doc, opt, resolve_seed(doc, opt)};
  Eigen::Vector3d lambdas;
  if (doc.root["lambdas"]) {
    lambdas = vector3(doc.root["lambdas"], "lambdas");
  } else if (doc.root["channel"]) {
    const auto channel = parse_channel(doc.root["channel"], doc.base_dir);
    if (!channel.is_qubit()) throw SpecError("optimize works on qubit channels");
    lambdas = channel.qubit().lambdas;
  } else {
    throw SpecError("optimize spec needs 'lambdas' or a qubit 'channel'");
  }
  auto settings = parse_optimizer(doc.root["optimizer"]);
  settings.seed = em.seed;
  settings.threads = opt.threads;
  const auto result = maximize_det_fisher(lambdas, settings);

  Table t = long_table();
  add_matrix(t, "c_matrix", std::string("best"), result.best_c);
  for (std::size_t k = 0; k < 3; ++k) {
    add_vector(t, "theta", static_cast<std::int64_t>(k + 1), result.best_set.configs[k].theta);
    add_vector(t, "m", static_cast<std::int64_t>(k + 1), result.best_set.configs[k].m);
  }
  add_scalar(t, "det_fisher", std::string("best"), result.best_value);
  add_scalar(t, "det_fisher_axis_aligned", std::string("reference"),
             total_fisher_det(lambdas, optimal_qubit_configuration()));
  add_scalar(t, "starts_total", std::string("all"), result.total_starts);
  add_scalar(t, "starts_converged", std::string("all"), result.starts_converged);
  add_scalar(t, "starts_agreeing", std::string("all"), result.starts_agreeing);
  add_scalar(t, "converged", std::string("best"), result.converged ? 1.0 : 0.0);
  add_scalar(t, "degenerate_lambdas", std::string("all"), result.degenerate_lambdas ? 1.0 : 0.0);
  add_scalar(t, "cptp_valid", std::string("all"), result.cptp_valid ? 1.0 : 0.0);
  em.table("optimize", t);
  em.meta_extra["optimizer"] = {{"grid_points_per_axis", settings.grid_points_per_axis},
                                {"max_iterations", settings.max_iterations},
                                {"step_size", settings.step_size},
                                {"tolerance", settings.tolerance},
                                {"start_jitter", settings.start_jitter},
                                {"seed", settings.seed}};
  if (result.degenerate_lambdas) em.meta_extra["warnings"] = Json::array({"|lambda_i| not strictly ordered; optimum is degenerate"});
  return em.finish();
}

inline CommandOutput cmd_estimate(const SpecDocument& doc, const CommandOptions& opt) {
  check_top_level(doc, "estimate", {"input_triple", "measurement_triple", "frequencies", "counts", "configurations", "seed"});
  Emitter em{"estimate", doc, opt, resolve_seed(doc, opt)};
  Table t = long_table();
  if (doc.root["configurations"]) {
    const auto set = as_set(parse_qubit_configurations(doc.root["configurations"]));
    const auto nu = vector3(doc.root["frequencies"], "frequencies");
    add_vector(t, "lambda", std::string("estimate"), estimate_lambda_known_directions(set, nu));
    em.table("estimate", t);
    return em.finish();
  }
  FrequencyMatrix freq;
  freq.nu = row_matrix(doc.root["frequencies"], "frequencies");
  const auto input = column_triple(doc.root["input_triple"], "input_triple");
  const auto measurement = column_triple(doc.root["measurement_triple"], "measurement_triple");
  if (const auto counts = doc.root["counts"]) {
    if (counts.IsScalar()) {
      freq.counts.setConstant(scalar<int>(counts, "counts"));
    } else {
      freq.counts = row_matrix(counts, "counts").array().round().cast<int>().matrix();
    }
    try {
      freq.validate();
    } catch (const Error& e) {
      throw SpecError(std::string("frequencies: ") + e.what());
    }
  } else {
    for (double v : freq.nu.reshaped()) {
      if (!(v >= 0.0 && v <= 1.0)) throw SpecError("frequencies must lie in [0, 1]");
    }
  }
  require_invertible_triple(input, "input");
  require_invertible_triple(measurement, "measurement");
  const auto est = full_direction_estimate(input, measurement, freq);
  add_vector(t, "lambda", std::string("estimate"), est.lambdas);
  add_vector(t, "angle", std::string("estimate"), est.angles);
  add_matrix(t, "raw_a", std::string("estimate"), est.raw_a);
  add_matrix(t, "symmetrized_a", std::string("estimate"), est.symmetrized_a);
  add_scalar(t, "degenerate", std::string("estimate"), est.degenerate ? 1.0 : 0.0);
  add_scalar(t, "gimbal_lock", std::string("estimate"), est.gimbal_lock ? 1.0 : 0.0);
  add_scalar(t, "residual", std::string("estimate"), est.residual);
  em.table("estimate", t);
  return em.finish();
}

inline Json experiment_json(const ExperimentSpec& spec, const Eigen::Matrix3d& measurement) {
  Json j;
  j["truth"] = {{"lambdas", vector_json(spec.truth.lambdas)}, {"angles", vector_json(spec.truth.angles)}};
  j["input_triple_columns"] = matrix_json(spec.input_triple.transpose());
  j["measurement_triple_columns"] = matrix_json(measurement.transpose());
  j["random_measurement"] = spec.random_measurement;
  j["shots"] = spec.shots_per_cell;
  j["repetitions"] = spec.repetitions;
  j["weight"] = spec.weight;
  j["seed"] = spec.seed;
  return j;
}

inline const std::vector<std::string>& mse_columns() {
  static const std::vector<std::string> cols{"mse_lambda1", "mse_lambda2", "mse_lambda3",
                                             "mse_phi1",    "mse_phi2",    "mse_phi3"};
  return cols;
}

inline ExperimentSpec experiment_with_options(const SpecDocument& doc, const CommandOptions& opt) {
  auto spec = parse_experiment(doc);
  if (opt.seed) spec.seed = *opt.seed;
  spec.threads = opt.threads;
  return spec;
}

inline CommandOutput cmd_simulate(const SpecDocument& doc, const CommandOptions& opt) {
  check_top_level(doc, "simulate", {"experiment", "sweep"});
  const auto spec = experiment_with_options(doc, opt);
  Emitter em{"simulate", doc, opt, spec.seed};
  const auto report = run_monte_carlo(spec);
  Table t;
  t.columns = {"shots", "repetitions", "weight"};
  t.columns.insert(t.columns.end(), mse_columns().begin(), mse_columns().end());
  t.columns.insert(t.columns.end(), {"V", "NV", "failures"});
  std::vector<Cell> row{report.shots, std::int64_t{report.trials}, report.weight};
  for (double m : report.per_parameter) row.emplace_back(m);
  row.insert(row.end(), {report.objective_v, report.n_times_v, std::int64_t{report.failures}});
  t.add(std::move(row));
  em.table("simulate", t);
  em.meta_extra["resolved"] = experiment_json(spec, resolved_measurement_triple(spec));
  em.meta_extra["failures"] = report.failures;
  em.meta_extra["truth_parameters"] = report.truth;
  em.meta_extra["mean_estimates"] = report.mean_estimate;
  return em.finish();
}

inline CommandOutput cmd_sweep(const SpecDocument& doc, const CommandOptions& opt) {
  check_top_level(doc, "sweep", {"experiment", "sweep"});
  const auto spec = experiment_with_options(doc, opt);
  Emitter em{"sweep", doc, opt, spec.seed};
  em.meta_extra["resolved"] = experiment_json(spec, resolved_measurement_triple(spec));
  if (const auto* orth = std::get_if<OrthogonalitySweep>(&spec.sweep)) {
    const auto table = sweep_orthogonality(spec, orth->angles_deg);
    Table t;
    t.columns = {"angle_deg", "det", "V", "NV"};
    t.columns.insert(t.columns.end(), mse_columns().begin(), mse_columns().end());
    t.columns.push_back("failures");
    int failures = 0;
    for (const auto& row : table.rows) {
      std::vector<Cell> cells{row.angle_deg, row.det, row.report.objective_v, row.report.n_times_v};
      for (double m : row.report.per_parameter) cells.emplace_back(m);
      cells.emplace_back(std::int64_t{row.report.failures});
      failures += row.report.failures;
      t.add(std::move(cells));
    }
    em.table("sweep", t);
    em.meta_extra["sweep"] = "orthogonality";
    em.meta_extra["skipped_angles_deg"] = table.skipped_angles_deg;
    em.meta_extra["failures"] = failures;
  } else if (const auto* scaling = std::get_if<ScalingSweep>(&spec.sweep)) {
    const auto table = sweep_scaling(spec, scaling->shots, scaling->weights);
    Table t{{"c", "N", "V", "NV"}, {}};
    for (const auto& row : table.rows) t.add({row.weight, row.shots, row.objective_v, row.n_times_v});
    int failures = 0;
    for (const auto& r : table.reports) failures += r.failures;
    em.table("sweep", t);
    em.meta_extra["sweep"] = "scaling";
    em.meta_extra["failures"] = failures;
  } else {
    throw SpecError("sweep command needs a 'sweep' section");
  }
  return em.finish();
}

}  // namespace detail

/// Runs one named command on a parsed spec.
inline CommandOutput run_command(const std::string& command, const SpecDocument& doc, const CommandOptions& opt) {
  if (command == "fisher") return detail::cmd_fisher(doc, opt);
  if (command == "optimal-config") return detail::cmd_optimal_config(doc, opt);
  if (command == "optimize") return detail::cmd_optimize(doc, opt);
  if (command == "estimate") return detail::cmd_estimate(doc, opt);
  if (command == "simulate") return detail::cmd_simulate(doc, opt);
  if (command == "sweep") return detail::cmd_sweep(doc, opt);
  throw SpecError("unknown command '" + command + "'");
}

/// Process exit status for an error kind; 0 is reserved for success.
inline int exit_code_for(const Error& e) {
  const std::string kind = e.kind();
  if (kind == "invalid_spec" || kind == "invalid_argument" || kind == "dimension_mismatch") return 2;
  if (kind == "singular_information") return 3;
  if (kind == "unidentifiable") return 4;
  if (kind == "structure") return 5;
  if (kind == "singular_matrix") return 6;
  if (kind == "invalid_model") return 7;
  if (kind == "invalid_state") return 8;
  if (kind == "resource") return 9;
  if (kind == "trial_failures") return 10;
  return 1;
}

}  // namespace paulest::io
