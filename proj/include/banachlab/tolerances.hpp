#pragma once

namespace banachlab {

// Central numeric tolerance configuration. Every module reads its
// thresholds from here so that tests and library agree on one set of
// numbers.
struct Tolerances {
  double hermitian_entrywise = 1e-12;   // |a_ij - conj(a_ji)| on construction
  double projection_residual = 1e-10;   // ||P^2 - P||_2 and |tr P - 1|
  double unitarity = 1e-10;             // ||U*U - I||_2
  double phase_nonzero = 1e-10;         // modulus below which a coordinate counts as zero
  double spectral_reconstruction = 1e-10;
  double degenerate_residual = 1e-8;    // Gram-Schmidt residual cutoff in eigenspaces
  double norm_identity = 1e-10;         // homogeneity / triangle checks on samples
  double homogeneity_map = 1e-9;        // ||F(lambda x) - lambda F(x)||
  double antipodal_sign = 1e-10;        // first-nonzero threshold for the sign rule
  double envelope_witness = 1e-9;       // witness re-evaluation slack
  double envelope_bracket = 1e-6;       // sandwich / weak-duality slack
  double certification_margin = 1e-6;   // dual functional violation margin
  double bound_trace = 1e-12;           // relative slack when replaying a trace
  double delta_floor = 1e-9;            // quasi-norm delta for exact symmetries
};

inline const Tolerances& tols() {
  static const Tolerances t{};
  return t;
}

}  // namespace banachlab
