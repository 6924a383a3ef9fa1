#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phasesep/classical.hpp"
#include "phasesep/torus.hpp"

namespace phasesep {

/// chi(k, l) = Tr[rho D(k, l)^dagger] over the fundamental window, stored at
/// FFT slots: values(window.slot(k), window.slot(l)).
struct ChordFunction {
  TorusGeometry geometry;
  Eigen::MatrixXcd values;

  Complex at(int k, int l) const;
};

enum class WignerConstruction { ChordN, PhasePoint2N };
enum class GhostHandling { NotApplicable, Removed, Kept };

struct WignerProvenance {
  WignerConstruction construction = WignerConstruction::ChordN;
  GhostHandling ghosts = GhostHandling::NotApplicable;
  /// integral of W^2 over the torus equals hs_scale * Tr(rho^2).
  double hs_scale = 1.0;
  /// Largest imaginary part discarded when the field was made real.
  double imag_residue = 0.0;

  std::string describe() const;
};

struct WignerField {
  PhaseSpaceField field;
  WignerProvenance provenance;
};

ChordFunction chord_function(const DensityOperator& rho);
ChordFunction chord_function(const TorusState& psi);

/// Isometric Wigner function on the N x N grid. Grid index a sits at
/// q = (a + theta_q)/N and b at p = (b + theta_p)/N; for the default phases
/// these are the cell centres. Integrates to Tr(rho) and satisfies
/// integral W^2 = N Tr(rho^2).
WignerField wigner_1d(const DensityOperator& rho);
WignerField wigner_1d(const TorusState& psi);
WignerField wigner_from_chord(const ChordFunction& chi);

/// Product of single-torus transforms on a two-factor operator, stored in the
/// axis order (q1, p1, q2, p2). integral W^2 = N^2 Tr(rho^2).
WignerField wigner_2d(const DensityOperator& rho);
WignerField wigner_2d(const TorusState& psi);

/// Wigner function on the doubled 2N x 2N grid (index a at q = (a/2 + theta_q)/N).
/// Kept: every chord of the 2N-periodic extension contributes, which exposes
/// the ghost replicas. Removed: only the fundamental window contributes, and
/// the even sublattice reproduces wigner_1d exactly.
WignerField phasepoint_wigner(const DensityOperator& rho, GhostHandling ghosts);
WignerField phasepoint_wigner(const TorusState& psi, GhostHandling ghosts);

/// Binary dump: magic "PSWF", uint32 version, uint32 dims, dims x uint32
/// grid_shape, uint32 provenance length + bytes, then row-major float64
/// values; all little-endian.
void write_field_dump(const std::string& path, const PhaseSpaceField& field, const std::string& provenance);
struct FieldDump {
  PhaseSpaceField field;
  std::string provenance;
};
FieldDump read_field_dump(const std::string& path);

}  // namespace phasesep
