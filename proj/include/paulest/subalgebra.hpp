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

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "paulest/basis.hpp"
#include "paulest/errors.hpp"

namespace paulest {

/// Isomorphism type of a block: the commutative algebra C^k or the full
/// matrix algebra M_m.
struct BlockKind {
  enum class Type { Unknown, Commutative, FullMatrix };
  Type type = Type::Unknown;
  int order = 0;

  static BlockKind commutative(int k) { return {Type::Commutative, k}; }
  static BlockKind full_matrix(int m) { return {Type::FullMatrix, m}; }

  std::string tag() const {
    switch (type) {
      case Type::Commutative: return "C" + std::to_string(order);
      case Type::FullMatrix: return "M" + std::to_string(order);
      default: return "?";
    }
  }

  static BlockKind parse(const std::string& tag) {
    if (tag.size() < 2 || (tag[0] != 'C' && tag[0] != 'M')) throw SpecError("bad block kind tag '" + tag + "'");
    int order = 0;
    try {
      order = std::stoi(tag.substr(1));
    } catch (const std::exception&) {
      throw SpecError("bad block kind tag '" + tag + "'");
    }
    if (order < 2) throw SpecError("block kind order must be >= 2 in '" + tag + "'");
    return tag[0] == 'C' ? commutative(order) : full_matrix(order);
  }

  friend bool operator==(const BlockKind&, const BlockKind&) = default;
};

/// Partition of the traceless basis indices {1, ..., n^2 - 1} into blocks;
/// block i together with v_0 spans the subalgebra A_i. Blocks are 0-based.
struct SubalgebraDecomposition {
  int dim = 0;
  std::vector<std::vector<int>> blocks;
  std::vector<BlockKind> kinds;  // optional; empty or one per block

  std::size_t block_count() const { return blocks.size(); }

  /// pi[i] = block containing basis index i; pi[0] = -1.
  std::vector<int> block_of_index() const {
    std::vector<int> pi(static_cast<std::size_t>(dim) * dim, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (int i : blocks[b]) {
        if (i > 0 && static_cast<std::size_t>(i) < pi.size()) pi[static_cast<std::size_t>(i)] = static_cast<int>(b);
      }
    }
    return pi;
  }

  std::optional<BlockKind> kind(std::size_t block) const {
    if (block < kinds.size() && kinds[block].type != BlockKind::Type::Unknown) return kinds[block];
    return std::nullopt;
  }
};

/// Multiplicity of the nonzero eigenvalues of a minimal projection in a block
/// of the given kind inside M_n: n/k for C^k, n/m for M_m.
inline int minimal_projection_rank(const BlockKind& kind, int n) {
  if (kind.type == BlockKind::Type::Unknown || kind.order < 2 || n % kind.order != 0) {
    throw StructureError("no minimal projection rank for block kind " + kind.tag() + " in dimension " +
                         std::to_string(n));
  }
  return n / kind.order;
}

/// Qubit decomposition {v_0, v_i}, i = 1, 2, 3, of M_2 in the Pauli basis.
inline SubalgebraDecomposition qubit_pauli_decomposition() {
  return {2, {{1}, {2}, {3}}, std::vector<BlockKind>(3, BlockKind::commutative(2))};
}

/// M_4 = span{v_0, v_i} for each of the 15 traceless tensor-Pauli elements.
inline SubalgebraDecomposition m4_c2_decomposition() {
  SubalgebraDecomposition d;
  d.dim = 4;
  for (int i = 1; i < 16; ++i) {
    d.blocks.push_back({i});
    d.kinds.push_back(BlockKind::commutative(2));
  }
  return d;
}

/// I (x) M_2, M_2 (x) I and three maximal abelian subalgebras C^4 of M_4.
/// Index 4a + b denotes sigma_a (x) sigma_b / 2.
inline SubalgebraDecomposition m4_mixed_decomposition() {
  return {4,
          {{1, 2, 3}, {4, 8, 12}, {5, 10, 15}, {6, 11, 13}, {7, 14, 9}},
          {BlockKind::full_matrix(2), BlockKind::full_matrix(2), BlockKind::commutative(4),
           BlockKind::commutative(4), BlockKind::commutative(4)}};
}

inline std::optional<SubalgebraDecomposition> preset_decomposition(const std::string& name) {
  if (name == "M4-C2") return m4_c2_decomposition();
  if (name == "M4-mixed") return m4_mixed_decomposition();
  if (name == "M2-pauli") return qubit_pauli_decomposition();
  return std::nullopt;
}

/// Basis the presets refer to: the Pauli basis, or tensor-Pauli for n = 2^k.
inline OperatorBasis basis_for_dimension(int n) {
  if (n == 2) return build_pauli_basis();
  int k = 0;
  while ((1 << k) < n) ++k;
  if (n < 2 || (1 << k) != n) throw InvalidArgumentError("no tensor-Pauli basis for dimension " + std::to_string(n));
  return build_tensor_pauli_basis(k);
}

struct DecompositionReport {
  bool valid = true;
  bool in_range = true;
  bool disjoint = true;
  bool covers = true;
  bool orthogonal = true;
  bool closed = true;
  bool uniform = true;
  int block_dimension = 0;  // s, when uniform
  int block_count = 0;      // N_s
  bool dimension_count_holds = false;
  std::vector<std::string> issues;
};

namespace detail {

inline ComplexMatrix traceless_part(const ComplexMatrix& m) {
  const auto n = m.rows();
  return m - (m.trace() / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
}

/// Residual of projecting `m` onto span{v_0} + span{v_l : l in block}.
inline double span_residual(const ComplexMatrix& m, const std::vector<int>& block, const OperatorBasis& basis) {
  ComplexMatrix rest = m - (basis[0] * m).trace() * basis[0];
  for (int l : block) rest -= (basis[static_cast<std::size_t>(l)] * m).trace() * basis[static_cast<std::size_t>(l)];
  return rest.norm();
}

}  // namespace detail

/// Checks the partition, pairwise orthogonality of traceless parts, closure
/// of every block-plus-identity span under products, and (s-1) N_s = n^2 - 1.
inline DecompositionReport validate_decomposition(const SubalgebraDecomposition& d, const OperatorBasis& basis) {
  DecompositionReport report;
  const int total = d.dim * d.dim;
  report.block_count = static_cast<int>(d.blocks.size());
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    report.valid = false;
    report.issues.push_back(std::move(msg));
  };
  if (basis.dim != d.dim) {
    fail(report.in_range, "decomposition dimension " + std::to_string(d.dim) + " != basis dimension " +
                              std::to_string(basis.dim));
    return report;
  }
  if (!d.kinds.empty() && d.kinds.size() != d.blocks.size()) {
    report.valid = false;
    report.issues.push_back("kind tag count does not match block count");
  }
  std::vector<int> owner(static_cast<std::size_t>(total), -1);
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    if (d.blocks[b].empty()) fail(report.in_range, "block " + std::to_string(b) + " is empty");
    for (int i : d.blocks[b]) {
      if (i < 1 || i >= total) {
        fail(report.in_range, "index " + std::to_string(i) + " outside 1.." + std::to_string(total - 1));
        continue;
      }
      auto& slot = owner[static_cast<std::size_t>(i)];
      if (slot >= 0) {
        fail(report.disjoint, "index " + std::to_string(i) + " appears in blocks " + std::to_string(slot) +
                                  " and " + std::to_string(b));
      } else {
        slot = static_cast<int>(b);
      }
    }
  }
  for (int i = 1; i < total; ++i) {
    if (owner[static_cast<std::size_t>(i)] < 0) fail(report.covers, "index " + std::to_string(i) + " not covered");
  }
  if (!report.in_range) return report;

  for (std::size_t a = 0; a < d.blocks.size(); ++a) {
    for (std::size_t b = a + 1; b < d.blocks.size(); ++b) {
      for (int i : d.blocks[a]) {
        for (int j : d.blocks[b]) {
          const auto ti = detail::traceless_part(basis[static_cast<std::size_t>(i)]);
          const auto tj = detail::traceless_part(basis[static_cast<std::size_t>(j)]);
          if (std::abs((ti * tj).trace()) > tol::kOrthogonality) {
            fail(report.orthogonal, "traceless parts of indices " + std::to_string(i) + " and " + std::to_string(j) +
                                        " (blocks " + std::to_string(a) + ", " + std::to_string(b) +
                                        ") are not orthogonal");
          }
        }
      }
    }
  }

  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    const auto& block = d.blocks[b];
    for (int i : block) {
      for (int j : block) {
        const ComplexMatrix product = basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(j)];
        const double residual = detail::span_residual(product, block, basis);
        if (residual >= tol::kClosure) {
          fail(report.closed, "block " + std::to_string(b) + " not closed: v_" + std::to_string(i) + " v_" +
                                  std::to_string(j) + " leaves the span (residual " + std::to_string(residual) + ")");
        }
      }
    }
  }

  const std::size_t first = d.blocks.empty() ? 0 : d.blocks.front().size();
  for (const auto& block : d.blocks) {
    if (block.size() != first) report.uniform = false;
  }
  if (report.uniform && !d.blocks.empty()) {
    report.block_dimension = static_cast<int>(first) + 1;
    report.dimension_count_holds = (report.block_dimension - 1) * report.block_count == total - 1;
    if (!report.dimension_count_holds) {
      report.valid = false;
      report.issues.push_back("(s-1) N_s = " + std::to_string((report.block_dimension - 1) * report.block_count) +
                              " != n^2 - 1 = " + std::to_string(total - 1));
    }
  }
  return report;
}

/// Commutative blocks are C^{|block|+1}; otherwise M_m with m^2 = |block|+1.
inline BlockKind infer_block_kind(const SubalgebraDecomposition& d, const OperatorBasis& basis, std::size_t block) {
  if (block >= d.blocks.size()) throw InvalidArgumentError("block index out of range");
  const auto& indices = d.blocks[block];
  bool commutative = true;
  for (int i : indices) {
    for (int j : indices) {
      const auto& a = basis[static_cast<std::size_t>(i)];
      const auto& b = basis[static_cast<std::size_t>(j)];
      if ((a * b - b * a).norm() > tol::kClosure) commutative = false;
    }
  }
  const int span_dim = static_cast<int>(indices.size()) + 1;
  if (commutative) return BlockKind::commutative(span_dim);
  const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(span_dim))));
  if (m * m == span_dim) return BlockKind::full_matrix(m);
  return {};
}

}  // namespace paulest
