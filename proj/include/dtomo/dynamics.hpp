#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "dtomo/core.hpp"
#include "dtomo/instance.hpp"
#include "dtomo/rng.hpp"

namespace dtomo {

// A step moved some |dX| >= 2, which would cross more than one boundary;
// the time step is too large for the current field strength.
struct StepOverflowError : std::runtime_error {
  StepOverflowError(int node, double dx);
  int node;
  double dx;
};

// Drift evaluation workspace. Rays are independent, so the kernel runs one
// ray at a time (OpenMP across rays): refresh particle positions/charges,
// insertion-sort the persisted per-ray order (nearly sorted between steps),
// then accumulate below-minus-above fields by prefix sums over groups of
// exactly equal X. Per-ray charge sums are integer-valued, so results are
// bit-identical for any thread count or tie order.
class DriftBuffer {
 public:
  explicit DriftBuffer(const TomographyInstance& instance);

  // Drift of every free node at the given state. The returned span stays
  // valid until the next compute() call. Also refreshes aux_drift().
  std::span<const double> compute(const SpinState& state);

  // Formal drift of the pinned auxiliary particle from the last compute().
  double aux_drift() const { return aux_drift_; }

  const TomographyInstance& instance() const { return *instance_; }

 private:
  const TomographyInstance* instance_;
  std::vector<int> ray_offset_;   // slot range of ray r: [ray_offset_[r], ray_offset_[r+1])
  std::vector<int> slot_node_;    // free node per slot, -1 for the aux slot
  std::vector<int> order_;        // per-ray permutation of local slots, persisted
  std::vector<double> pos_;       // X per slot
  std::vector<double> charge_;    // sigma (free) or spin_data (aux) per slot
  std::vector<double> contrib_;   // per-slot drift contribution
  std::vector<int> node_slot_offset_;  // CSR over nodes into node_slot_
  std::vector<int> node_slot_;
  std::vector<double> xdot_;
  double aux_drift_ = 0.0;
};

// Literal pairwise evaluation of the equations of motion from the vector
// charge table: xdot_a = sum_b (q_a . q_b) sgn(X_a - X_b) over all particles
// including the pinned auxiliary one. O(N^2); the reference the fast kernel
// is tested against.
std::vector<double> drift_reference(const VectorChargeTable& charges, const SpinState& state);
double aux_drift_reference(const VectorChargeTable& charges, const SpinState& state);

// Sum of reference drifts over a node subset (node_count = auxiliary).
double drift_rate_of_subset(const TomographyInstance& instance, const SpinState& state,
                            std::span<const int> subset);

// Applies X += dt * xdot with the wrap rule: leaving [-1, 1) wraps by +-2 and
// flips sigma once. Returns the number of flips; throws StepOverflowError if
// any |dt * xdot| >= 2.
int apply_euler_update(SpinState& state, std::span<const double> xdot, double dt);

// One Euler step of the buffered dynamics.
int euler_step(DriftBuffer& buffer, SpinState& state, double dt);

// M Euler steps of size T/M. When trace is given, samples (t0 + k*dt,
// relaxed cut) every trace_stride steps and after the final step.
void evolve_stage(DriftBuffer& buffer, SpinState& state, double stage_time, int steps,
                  int trace_stride = 0, double t0 = 0.0,
                  std::vector<std::pair<double, double>>* trace = nullptr);

// Resamples every free continuous component uniformly on [-1, 1); sigma and
// the auxiliary spin are untouched.
void agitate(SpinState& state, Rng& rng);

// Uniform sigma and X initialization.
SpinState random_state(int node_count, Rng& rng);

// Full machine loop: evolve a stage, stop if every ray charge vanishes,
// otherwise agitate, up to max_agitations times. A step overflow terminates
// the run and is reported in RunReport::error.
RunReport run_machine(const TomographyInstance& instance, const MachineConfig& config);

// Same loop from a caller-supplied initial state (the config seed then only
// drives agitations).
RunReport run_machine_from(const TomographyInstance& instance, const MachineConfig& config,
                           SpinState state);

}  // namespace dtomo
