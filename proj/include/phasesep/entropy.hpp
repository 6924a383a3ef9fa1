#pragma once

#include <vector>

#include <Eigen/Dense>

#include "phasesep/classical.hpp"
#include "phasesep/torus.hpp"
#include "phasesep/wigner.hpp"

namespace phasesep {

enum class LogBase { E, Two };

struct SchmidtDecomposition {
  Eigen::VectorXd singular_values;  // nonincreasing
  Eigen::MatrixXcd left;             // empty unless factors were requested
  Eigen::MatrixXcd right;
  double norm2 = 0.0;                // sum of squared singular values

  bool has_factors() const { return left.size() > 0; }
};

struct EntropyResult {
  double value = 0.0;
  LogBase log_base = LogBase::E;
  /// Normalized weight of the coefficients dropped below 1e-14 * mu_1.
  double spectrum_tail_mass = 0.0;
  Index terms = 0;
};

/// Full singular-value spectrum; throws NonFinite on NaN/Inf input.
SchmidtDecomposition schmidt_spectrum(const Eigen::MatrixXd& X, bool keep_factors = false);
SchmidtDecomposition schmidt_spectrum(const Eigen::MatrixXcd& X, bool keep_factors = false);

/// h = -sum p_n log p_n with p_n = mu_n^2 / sum mu^2.
EntropyResult svd_entropy(const SchmidtDecomposition& s, LogBase base = LogBase::E);
EntropyResult svd_entropy(const Eigen::VectorXd& singular_values, LogBase base = LogBase::E);

/// Bipartition of field axes: `rows` lists the axes of the first part; the
/// remaining axes, in order, index the columns.
struct AxisSplit {
  std::vector<int> rows;

  static AxisSplit q_p() { return {{0}}; }
  static AxisSplit factors() { return {{0, 1}}; }
};

/// Reshapes a field into the matrix whose SVD defines the separability entropy.
Eigen::MatrixXd split_matrix(const PhaseSpaceField& field, const AxisSplit& split);

EntropyResult field_separability_entropy(const PhaseSpaceField& field, const AxisSplit& split,
                                         LogBase base = LogBase::E);
EntropyResult wigner_separability_entropy(const WignerField& W, const AxisSplit& split,
                                          LogBase base = LogBase::E);
EntropyResult classical_separability_entropy(const PhaseSpaceField& rho_c, const AxisSplit& split,
                                             LogBase base = LogBase::E);

/// R_{(l1 j1),(l2 j2)} = rho_{(l1 l2),(j1 j2)}.
Eigen::MatrixXcd operator_reshuffle(const DensityOperator& rho);
EntropyResult operator_space_entanglement_entropy(const DensityOperator& rho, LogBase base = LogBase::E);

/// Schmidt coefficients of a pure two-factor state (psi reshaped to N x N).
SchmidtDecomposition state_schmidt(const TorusState& psi);
EntropyResult entanglement_entropy(const TorusState& psi, LogBase base = LogBase::E);

/// -Tr rho log rho, eigenvalues below 1e-14 clamped to zero.
double von_neumann_entropy(const Eigen::MatrixXcd& rho, LogBase base = LogBase::E);
/// Reduced operator of factor `keep` (0 or 1) of a two-factor operator.
Eigen::MatrixXcd partial_trace(const DensityOperator& rho, int keep);
EntropyResult mutual_information(const DensityOperator& rho, LogBase base = LogBase::E);

double to_base(double nats, LogBase base);

}  // namespace phasesep
