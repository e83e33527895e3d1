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

// Plain-text YAML spec files: channels, decompositions, configurations,
// optimizer settings and Monte Carlo experiments.

#include <yaml-cpp/yaml.h>

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "paulest/paulest.hpp"

namespace paulest::io {

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct SpecDocument {
  YAML::Node root;
  std::string text;
  std::filesystem::path base_dir;
  std::uint64_t hash = 0;
};

inline SpecDocument parse_spec_text(std::string text, std::filesystem::path base_dir = ".") {
  SpecDocument doc;
  try {
    doc.root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw SpecError(std::string("spec is not valid YAML: ") + e.what());
  }
  if (!doc.root.IsMap()) throw SpecError("spec must be a key-value map at the top level");
  doc.hash = fnv1a64(text);
  doc.text = std::move(text);
  doc.base_dir = std::move(base_dir);
  return doc;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline SpecDocument load_spec_file(const std::filesystem::path& path) {
  return parse_spec_text(read_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

// ---------------------------------------------------------------------------
// Node helpers

inline void require_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw SpecError(where + " must be a map");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw SpecError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where) {
  if (!node || !node.IsScalar()) throw SpecError(where + ": expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw SpecError(where + ": cannot parse '" + node.Scalar() + "'");
  }
}

template <class T>
T scalar_or(const YAML::Node& node, const std::string& where, T fallback) {
  return node ? scalar<T>(node, where) : fallback;
}

inline std::vector<double> number_list(const YAML::Node& node, const std::string& where) {
  if (!node || !node.IsSequence()) throw SpecError(where + ": expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(scalar<double>(node[i], where));
  return out;
}

inline RealVector real_vector(const YAML::Node& node, const std::string& where, Eigen::Index expected = -1) {
  const auto values = number_list(node, where);
  if (expected >= 0 && static_cast<Eigen::Index>(values.size()) != expected) {
    throw SpecError(where + ": expected " + std::to_string(expected) + " entries, got " +
                    std::to_string(values.size()));
  }
  return Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline Eigen::Vector3d vector3(const YAML::Node& node, const std::string& where) {
  return real_vector(node, where, 3);
}

/// Three column vectors given as a list [[x,y,z], [x,y,z], [x,y,z]], or the
/// word `identity`.
inline Eigen::Matrix3d column_triple(const YAML::Node& node, const std::string& where) {
  if (node && node.IsScalar() && node.Scalar() == "identity") return Eigen::Matrix3d::Identity();
  if (!node || !node.IsSequence() || node.size() != 3) throw SpecError(where + ": expected three 3-vectors or 'identity'");
  Eigen::Matrix3d m;
  for (int j = 0; j < 3; ++j) m.col(j) = vector3(node[static_cast<std::size_t>(j)], where);
  return m;
}

/// Rows of a 3x3 matrix given as [[row0], [row1], [row2]].
inline Eigen::Matrix3d row_matrix(const YAML::Node& node, const std::string& where) {
  if (!node || !node.IsSequence() || node.size() != 3) throw SpecError(where + ": expected three rows");
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) m.row(i) = vector3(node[static_cast<std::size_t>(i)], where).transpose();
  return m;
}

// ---------------------------------------------------------------------------
// Decompositions and channels

/// A decomposition is a preset name ("M4-C2", "M4-mixed", "M2-pauli"), a
/// path to a decomposition file, or an inline map
/// {dim, blocks: [[...], ...], kinds: [C2, M2, ...]}.
inline SubalgebraDecomposition parse_decomposition(const YAML::Node& node, const std::filesystem::path& base_dir) {
  if (node && node.IsScalar()) {
    const auto name = node.Scalar();
    if (auto preset = preset_decomposition(name)) return *preset;
    const auto path = std::filesystem::path(name).is_absolute() ? std::filesystem::path(name) : base_dir / name;
    if (!std::filesystem::exists(path)) throw SpecError("unknown decomposition preset or file '" + name + "'");
    const auto doc = load_spec_file(path);
    return parse_decomposition(doc.root, doc.base_dir);
  }
  require_keys(node, "decomposition", {"dim", "blocks", "kinds"});
  SubalgebraDecomposition d;
  d.dim = scalar<int>(node["dim"], "decomposition.dim");
  if (d.dim < 2) throw SpecError("decomposition.dim must be >= 2");
  const auto blocks = node["blocks"];
  if (!blocks || !blocks.IsSequence() || blocks.size() == 0) throw SpecError("decomposition.blocks must be a non-empty list");
  for (const auto& b : blocks) {
    std::vector<int> indices;
    if (!b.IsSequence()) throw SpecError("decomposition.blocks entries must be index lists");
    for (const auto& i : b) indices.push_back(scalar<int>(i, "decomposition.blocks"));
    d.blocks.push_back(std::move(indices));
  }
  if (const auto kinds = node["kinds"]) {
    if (!kinds.IsSequence() || kinds.size() != d.blocks.size()) {
      throw SpecError("decomposition.kinds must list one tag per block");
    }
    for (const auto& k : kinds) d.kinds.push_back(BlockKind::parse(scalar<std::string>(k, "decomposition.kinds")));
  }
  return d;
}

struct ChannelSpec {
  std::variant<QubitPauliChannel, GeneralizedPauliChannel> channel;
  std::string decomposition_ref;  // as written in the spec, for echoing

  bool is_qubit() const { return std::holds_alternative<QubitPauliChannel>(channel); }
  const QubitPauliChannel& qubit() const { return std::get<QubitPauliChannel>(channel); }
  const GeneralizedPauliChannel& generalized() const { return std::get<GeneralizedPauliChannel>(channel); }
};

/// {lambdas, angles} for a qubit channel, or {dim, decomposition, lambdas}
/// for a generalized one. A decomposition is validated before use.
inline ChannelSpec parse_channel(const YAML::Node& node, const std::filesystem::path& base_dir) {
  require_keys(node, "channel", {"dim", "lambdas", "angles", "decomposition"});
  ChannelSpec spec;
  if (!node["decomposition"]) {
    const int dim = scalar_or<int>(node["dim"], "channel.dim", 2);
    if (dim != 2) throw SpecError("channel without a decomposition must be a qubit channel (dim 2)");
    QubitPauliChannel ch;
    ch.lambdas = vector3(node["lambdas"], "channel.lambdas");
    if (node["angles"]) ch.angles = vector3(node["angles"], "channel.angles");
    spec.channel = ch;
    return spec;
  }
  if (node["angles"]) throw SpecError("channel.angles only applies to qubit channels");
  auto d = parse_decomposition(node["decomposition"], base_dir);
  spec.decomposition_ref = node["decomposition"].IsScalar() ? node["decomposition"].Scalar() : "inline";
  if (node["dim"] && scalar<int>(node["dim"], "channel.dim") != d.dim) {
    throw SpecError("channel.dim does not match the decomposition dimension");
  }
  auto basis = std::make_shared<const OperatorBasis>(basis_for_dimension(d.dim));
  const auto report = validate_decomposition(d, *basis);
  if (!report.valid) {
    if (report.in_range && report.disjoint && report.covers && !report.closed) {
      throw StructureError("decomposition block is not a subalgebra: " + report.issues.front());
    }
    throw SpecError("invalid decomposition: " + (report.issues.empty() ? std::string("?") : report.issues.front()));
  }
  auto lambdas = real_vector(node["lambdas"], "channel.lambdas", static_cast<Eigen::Index>(d.block_count()));
  spec.channel = GeneralizedPauliChannel::make(std::move(basis), std::move(d), std::move(lambdas));
  return spec;
}

// ---------------------------------------------------------------------------
// Optimizer and experiments

inline OptimizerSettings parse_optimizer(const YAML::Node& node, OptimizerSettings s = {}) {
  if (!node) return s;
  require_keys(node, "optimizer", {"grid_points_per_axis", "max_iterations", "step_size", "tolerance", "start_jitter"});
  s.grid_points_per_axis = scalar_or<int>(node["grid_points_per_axis"], "optimizer.grid_points_per_axis",
                                          s.grid_points_per_axis);
  s.max_iterations = scalar_or<int>(node["max_iterations"], "optimizer.max_iterations", s.max_iterations);
  s.step_size = scalar_or<double>(node["step_size"], "optimizer.step_size", s.step_size);
  s.tolerance = scalar_or<double>(node["tolerance"], "optimizer.tolerance", s.tolerance);
  s.start_jitter = scalar_or<double>(node["start_jitter"], "optimizer.start_jitter", s.start_jitter);
  try {
    s.validate();
  } catch (const Error& e) {
    throw SpecError(std::string("optimizer: ") + e.what());
  }
  return s;
}

/// experiment: {truth: {lambdas, angles}, input_triple, measurement_triple
/// (a triple, `identity` or `random`), shots, repetitions, weight, seed}
/// plus an optional top-level sweep: {type: orthogonality, angles_deg} or
/// {type: scaling, shots, weights}.
inline ExperimentSpec parse_experiment(const SpecDocument& doc) {
  const auto node = doc.root["experiment"];
  if (!node) throw SpecError("spec has no 'experiment' section");
  require_keys(node, "experiment",
               {"truth", "input_triple", "measurement_triple", "shots", "repetitions", "weight", "seed"});
  ExperimentSpec spec;
  const auto truth = node["truth"];
  require_keys(truth, "experiment.truth", {"lambdas", "angles"});
  spec.truth.lambdas = vector3(truth["lambdas"], "experiment.truth.lambdas");
  if (truth["angles"]) spec.truth.angles = vector3(truth["angles"], "experiment.truth.angles");
  if (node["input_triple"]) spec.input_triple = column_triple(node["input_triple"], "experiment.input_triple");
  if (const auto m = node["measurement_triple"]) {
    if (m.IsScalar() && m.Scalar() == "random") {
      spec.random_measurement = true;
    } else {
      spec.measurement_triple = column_triple(m, "experiment.measurement_triple");
    }
  }
  spec.shots_per_cell = scalar_or<std::int64_t>(node["shots"], "experiment.shots", spec.shots_per_cell);
  spec.repetitions = scalar_or<int>(node["repetitions"], "experiment.repetitions", spec.repetitions);
  spec.weight = scalar_or<double>(node["weight"], "experiment.weight", spec.weight);
  spec.seed = scalar_or<std::uint64_t>(node["seed"], "experiment.seed", spec.seed);

  if (const auto sweep = doc.root["sweep"]) {
    const auto type = scalar<std::string>(sweep["type"], "sweep.type");
    if (type == "orthogonality") {
      require_keys(sweep, "sweep", {"type", "angles_deg"});
      spec.sweep = OrthogonalitySweep{number_list(sweep["angles_deg"], "sweep.angles_deg")};
    } else if (type == "scaling") {
      require_keys(sweep, "sweep", {"type", "shots", "weights"});
      ScalingSweep s;
      for (double n : number_list(sweep["shots"], "sweep.shots")) {
        if (n < 1 || n != std::floor(n)) throw SpecError("sweep.shots must be positive integers");
        s.shots.push_back(static_cast<std::int64_t>(n));
      }
      s.weights = number_list(sweep["weights"], "sweep.weights");
      spec.sweep = std::move(s);
    } else {
      throw SpecError("sweep.type must be 'orthogonality' or 'scaling'");
    }
  }
  try {
    spec.validate();
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError(std::string("experiment: ") + e.what());
  }
  return spec;
}

}  // namespace paulest::io
