#include "dtomo/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "dtomo/analysis.hpp"

namespace dtomo {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974ull;

double sign_of(double a, double b) {
  if (a > b) return 1.0;
  if (a < b) return -1.0;
  return 0.0;
}

// Sparse dot product of two ray-ascending charge vectors.
double sparse_dot(const std::vector<std::pair<int, double>>& a,
                  const std::vector<std::pair<int, double>>& b) {
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (a[i].first > b[j].first) {
      ++j;
    } else {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return dot;
}

double dot_with_aux(const std::vector<std::pair<int, double>>& a,
                    const std::vector<double>& aux) {
  double dot = 0.0;
  for (const auto& [r, v] : a) dot += v * aux[r];
  return dot;
}

}  // namespace

StepOverflowError::StepOverflowError(int node_, double dx_)
    : std::runtime_error("step overflow: node " + std::to_string(node_) + " moved " +
                         std::to_string(dx_) + " in one step; reduce dt"),
      node(node_),
      dx(dx_) {}

DriftBuffer::DriftBuffer(const TomographyInstance& instance) : instance_(&instance) {
  const int rays = instance.ray_count();
  ray_offset_.resize(rays + 1);
  ray_offset_[0] = 0;
  for (int r = 0; r < rays; ++r) {
    ray_offset_[r + 1] = ray_offset_[r] + instance.rays.ray_size(r) + 1;  // +1 for aux
  }
  const int slots = ray_offset_[rays];
  slot_node_.assign(slots, -1);
  order_.resize(slots);
  pos_.resize(slots);
  charge_.resize(slots);
  contrib_.resize(slots);

  for (int r = 0; r < rays; ++r) {
    const auto& ray = instance.rays.rays[r];
    const int base = ray_offset_[r];
    for (std::size_t i = 0; i < ray.size(); ++i) slot_node_[base + i] = ray[i];
    for (int i = 0; i < ray_offset_[r + 1] - base; ++i) order_[base + i] = i;
  }

  const int nodes = instance.node_count();
  node_slot_offset_.assign(nodes + 1, 0);
  for (int s = 0; s < slots; ++s) {
    if (slot_node_[s] >= 0) ++node_slot_offset_[slot_node_[s] + 1];
  }
  for (int v = 0; v < nodes; ++v) node_slot_offset_[v + 1] += node_slot_offset_[v];
  node_slot_.resize(node_slot_offset_[nodes]);
  std::vector<int> cursor(node_slot_offset_.begin(), node_slot_offset_.end() - 1);
  for (int s = 0; s < slots; ++s) {  // slot order is ray-ascending
    if (slot_node_[s] >= 0) node_slot_[cursor[slot_node_[s]]++] = s;
  }
  xdot_.resize(nodes);
}

std::span<const double> DriftBuffer::compute(const SpinState& state) {
  const TomographyInstance& inst = *instance_;
  const int rays = inst.ray_count();

#pragma omp parallel for schedule(static) if (rays >= 64)
  for (int r = 0; r < rays; ++r) {
    const int base = ray_offset_[r];
    const int count = ray_offset_[r + 1] - base;
    double* pos = pos_.data() + base;
    double* charge = charge_.data() + base;
    double* contrib = contrib_.data() + base;
    const int* node = slot_node_.data() + base;
    int* order = order_.data() + base;

    double total = 0.0;
    for (int i = 0; i < count; ++i) {
      if (node[i] >= 0) {
        pos[i] = state.x[node[i]];
        charge[i] = state.sigma[node[i]];
      } else {
        pos[i] = 0.0;
        charge[i] = inst.spin_data[r];
      }
      total += charge[i];
    }

    // Nearly sorted across steps, so insertion is usually linear. A shift
    // budget of ~N log N catches disordered states (first call, right after
    // an agitation) and falls back to std::sort, keeping every call within
    // the N log N bound. Tie order does not matter: group sums are integers.
    int log2_count = 1;
    while ((1 << log2_count) < count) ++log2_count;
    const int budget = count * (log2_count + 2);
    int shifts = 0;
    for (int i = 1; i < count && shifts <= budget; ++i) {
      const int slot = order[i];
      const double v = pos[slot];
      int j = i - 1;
      while (j >= 0 && pos[order[j]] > v) {
        order[j + 1] = order[j];
        --j;
        ++shifts;
      }
      order[j + 1] = slot;
    }
    if (shifts > budget) {
      std::sort(order, order + count,
                [pos](int a, int b) { return pos[a] < pos[b] || (pos[a] == pos[b] && a < b); });
    }

    // Exactly coincident particles exert no force on each other, so fields
    // are constant across a group of equal X.
    const double lambda = inst.lambda[r];
    double below = 0.0;
    int g = 0;
    while (g < count) {
      const double gx = pos[order[g]];
      int h = g;
      double group_sum = 0.0;
      while (h < count && pos[order[h]] == gx) {
        group_sum += charge[order[h]];
        ++h;
      }
      const double field = below - (total - below - group_sum);
      for (int k = g; k < h; ++k) {
        contrib[order[k]] = lambda * charge[order[k]] * field;
      }
      below += group_sum;
      g = h;
    }
  }

  const int nodes = inst.node_count();
#pragma omp parallel for schedule(static) if (nodes >= 256)
  for (int v = 0; v < nodes; ++v) {
    double sum = 0.0;
    for (int k = node_slot_offset_[v]; k < node_slot_offset_[v + 1]; ++k) {
      sum += contrib_[node_slot_[k]];
    }
    xdot_[v] = sum;
  }

  double aux = 0.0;
  for (int r = 0; r < rays; ++r) aux += contrib_[ray_offset_[r + 1] - 1];
  aux_drift_ = aux;
  return xdot_;
}

std::vector<double> drift_reference(const VectorChargeTable& charges, const SpinState& state) {
  const int n = static_cast<int>(charges.free_charges.size());
  std::vector<double> xdot(n, 0.0);
  for (int a = 0; a < n; ++a) {
    double rate = 0.0;
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      const double dot = sparse_dot(charges.free_charges[a], charges.free_charges[b]);
      if (dot != 0.0) rate += dot * sign_of(state.x[a], state.x[b]);
    }
    rate += dot_with_aux(charges.free_charges[a], charges.aux_charge) *
            sign_of(state.x[a], 0.0);
    xdot[a] = rate;
  }
  return xdot;
}

double aux_drift_reference(const VectorChargeTable& charges, const SpinState& state) {
  double rate = 0.0;
  const int n = static_cast<int>(charges.free_charges.size());
  for (int b = 0; b < n; ++b) {
    const double dot = dot_with_aux(charges.free_charges[b], charges.aux_charge);
    if (dot != 0.0) rate += dot * sign_of(0.0, state.x[b]);
  }
  return rate;
}

double drift_rate_of_subset(const TomographyInstance& instance, const SpinState& state,
                            std::span<const int> subset) {
  if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
  const VectorChargeTable charges = assemble_charges(instance, state.sigma);
  const std::vector<double> xdot = drift_reference(charges, state);
  double rate = 0.0;
  for (int node : subset) {
    rate += node == instance.node_count() ? aux_drift_reference(charges, state) : xdot[node];
  }
  return rate;
}

int apply_euler_update(SpinState& state, std::span<const double> xdot, double dt) {
  int flips = 0;
  for (int i = 0; i < state.size(); ++i) {
    const double dx = dt * xdot[i];
    if (!(std::fabs(dx) < 2.0)) throw StepOverflowError(i, dx);
    double x = state.x[i] + dx;
    if (x >= 1.0) {
      x -= 2.0;
      state.sigma[i] = -state.sigma[i];
      ++flips;
    } else if (x < -1.0) {
      x += 2.0;
      state.sigma[i] = -state.sigma[i];
      ++flips;
    }
    state.x[i] = x;
  }
  return flips;
}

int euler_step(DriftBuffer& buffer, SpinState& state, double dt) {
  return apply_euler_update(state, buffer.compute(state), dt);
}

void evolve_stage(DriftBuffer& buffer, SpinState& state, double stage_time, int steps,
                  int trace_stride, double t0,
                  std::vector<std::pair<double, double>>* trace) {
  if (!(stage_time > 0.0) || steps < 1) {
    throw std::invalid_argument("stage requires positive duration and steps");
  }
  const double dt = stage_time / steps;
  for (int k = 1; k <= steps; ++k) {
    euler_step(buffer, state, dt);
    if (trace != nullptr && trace_stride > 0 && (k % trace_stride == 0 || k == steps)) {
      trace->emplace_back(t0 + k * dt, relaxed_cut(buffer.instance(), state));
    }
  }
}

void agitate(SpinState& state, Rng& rng) {
  for (auto& x : state.x) x = rng.next_symmetric();
}

SpinState random_state(int node_count, Rng& rng) {
  std::vector<Spin> sigma(node_count);
  for (auto& s : sigma) s = (rng.next() & 1) ? Spin{1} : Spin{-1};
  std::vector<double> x(node_count);
  for (auto& v : x) v = rng.next_symmetric();
  return SpinState{std::move(sigma), std::move(x)};
}

RunReport run_machine(const TomographyInstance& instance, const MachineConfig& config) {
  validate_config(config);
  Rng rng(mix_seed(config.seed, kInitStream));
  return run_machine_from(instance, config, random_state(instance.node_count(), rng));
}

RunReport run_machine_from(const TomographyInstance& instance, const MachineConfig& config,
                           SpinState state) {
  validate_config(config);
  if (state.size() != instance.node_count()) {
    throw std::invalid_argument("state size does not match instance");
  }
  const auto start = std::chrono::steady_clock::now();
  Rng rng(mix_seed(config.seed, kInitStream));
  // Reproduce the seed stream of run_machine so both entry points agitate
  // identically after the initial state.
  {
    SpinState discard = random_state(instance.node_count(), rng);
    (void)discard;
  }

  RunReport report;
  DriftBuffer buffer(instance);
  const bool tracing = config.trace_stride > 0;
  if (tracing) {
    report.cut_trace.emplace_back(0.0, relaxed_cut(instance, state));
  }

  double t_base = 0.0;
  while (true) {
    try {
      evolve_stage(buffer, state, config.stage_time, config.steps_per_stage,
                   config.trace_stride, t_base, tracing ? &report.cut_trace : nullptr);
    } catch (const StepOverflowError& overflow) {
      report.error = overflow.what();
      break;
    }
    t_base += config.stage_time;
    report.wall.steps += config.steps_per_stage;
    report.residuals = ray_charges(instance, state.sigma);
    report.stage_cuts.push_back(cut_value(instance, state.sigma));
    const bool solved = std::all_of(report.residuals.begin(), report.residuals.end(),
                                    [](long long q) { return q == 0; });
    if (solved) {
      report.solved = true;
      break;
    }
    if (report.agitations_used >= config.max_agitations) break;
    agitate(state, rng);
    ++report.agitations_used;
  }

  report.final_sigma = state.sigma;
  report.residuals = ray_charges(instance, state.sigma);
  report.wall.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dtomo
