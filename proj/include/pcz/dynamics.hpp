#pragma once

// Two-transmon subspace propagator under a modulated exchange coupling.
//
// Basis order {|00>, |01>, |10>, |11>, |02>, |20>}; the first label is qubit 1.
// The coupling g(t) drives |10><->|01> with weight 1 and |11><->|02>,
// |11><->|20> with weight sqrt(2). Integration runs in the frame rotating at
// the idle diagonal frequencies; evolve() returns the lab-frame propagator.

#include <array>
#include <vector>

#include "pcz/circuit_model.hpp"
#include "pcz/cmatrix.hpp"
#include "pcz/pulse.hpp"

namespace pcz {

inline constexpr std::size_t kSubspaceDim = 6;

namespace basis {
inline constexpr std::size_t k00 = 0;
inline constexpr std::size_t k01 = 1;
inline constexpr std::size_t k10 = 2;
inline constexpr std::size_t k11 = 3;
inline constexpr std::size_t k02 = 4;
inline constexpr std::size_t k20 = 5;
}  // namespace basis

struct SubspaceUnitary {
  CMatrix matrix = CMatrix::identity(kSubspaceDim);
  double t_total = 0.0;  // ns
};

// Diagonal frequencies in GHz in basis order. With include_shift the qubit
// frequencies carry the coupler-induced shift at phi relative to idle.
std::array<double, kSubspaceDim> diag_frequencies(const DeviceModel& model, double phi, bool include_shift);

// Rotating-frame Hamiltonian (angular units, rad/ns) for coupling g (MHz),
// diagonal shifts (MHz, relative to idle) and time t (ns).
CMatrix interaction_hamiltonian(const std::array<double, kSubspaceDim>& idle_freqs, double g_mhz,
                                const std::array<double, kSubspaceDim>& shift_mhz, double t);

struct EvolveOptions {
  bool include_shift = false;
  // Initial RK4 step in ns; 0 picks one from the fastest frequency in the problem.
  double dt = 0.0;
  // Accept when halving the step changes every matrix entry by less than this.
  double tolerance = 1e-7;
  int max_refinements = 8;
  // Number of evenly spaced interior snapshots to keep (interaction frame).
  int checkpoints = 0;
};

struct EvolveReport {
  SubspaceUnitary unitary;  // lab frame
  double dt = 0.0;          // step of the accepted run
  double achieved_delta = 0.0;
  int refinements = 0;
  std::vector<SubspaceUnitary> checkpoints;
};

EvolveReport evolve_detailed(const DeviceModel& model, const PulseParams& pulse, const EvolveOptions& options = {});

SubspaceUnitary evolve(const DeviceModel& model, const PulseParams& pulse, bool include_shift = false);

// Removes the idle diagonal phases: exp(+i H0 t) U.
SubspaceUnitary interaction_frame(const SubspaceUnitary& u, const DeviceModel& model);
// Inverse of interaction_frame: exp(-i H0 t) U.
SubspaceUnitary lab_frame(const SubspaceUnitary& u, const DeviceModel& model);

}  // namespace pcz
