#include "vsl/euler.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vsl/fft.hpp"

namespace vsl {

std::string to_string(PoissonMode mode) {
  switch (mode) {
    case PoissonMode::periodic: return "periodic";
    case PoissonMode::free_space: return "free_space";
  }
  return "unknown";
}

PoissonMode poisson_mode_from_string(const std::string& name) {
  if (name == "periodic") return PoissonMode::periodic;
  if (name == "free_space" || name == "free-space") return PoissonMode::free_space;
  throw std::invalid_argument("unknown poisson mode '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(cfl > 0.0) || cfl > 1.0) throw std::invalid_argument("solver.cfl must lie in (0, 1]");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("run.t_end must be finite and >= 0");
  if (snapshot_stride < 1) throw std::invalid_argument("run.snapshot_stride must be >= 1");
  if (time_direction != 1 && time_direction != -1) throw std::invalid_argument("time_direction must be +1 or -1");
}

namespace {

// Samples of the velocity kernels ∇⊥G of the whole-plane Green's function,
// transformed on the zero-padded 2n grid. G is truncated at radius 3L, which
// covers every separation inside the box, so the truncated kernel has an
// explicit smooth Fourier transform.
struct FreeSpaceKernel {
  std::vector<Complex> k1;
  std::vector<Complex> k2;
};

double truncated_green_hat(double k, double R) {
  const double logR = std::log(R);
  if (k == 0.0) return 0.5 * R * R * logR - 0.25 * R * R;
  const double kR = k * R;
  return R * logR * std::cyl_bessel_j(1.0, kR) / k + (std::cyl_bessel_j(0.0, kR) - 1.0) / (k * k);
}

std::shared_ptr<const FreeSpaceKernel> build_free_space_kernel(const GridSpec& spec) {
  const int n = spec.n;
  const int n4 = 4 * n;
  const int half4 = n4 / 2;
  const double h = spec.h();
  const double dk = 2.0 * kPi / (n4 * h);
  const double R = 3.0 * spec.L;

  // Ĝ depends on |k| only: tabulate one octant.
  const int q = half4 + 1;
  std::vector<double> ghat(static_cast<std::size_t>(q) * q);
  for (int a = 0; a < q; ++a) {
    for (int b = a; b < q; ++b) {
      const double v = truncated_green_hat(dk * std::hypot(static_cast<double>(a), static_cast<double>(b)), R);
      ghat[static_cast<std::size_t>(a) * q + b] = v;
      ghat[static_cast<std::size_t>(b) * q + a] = v;
    }
  }

  RealFft2d f4(n4);
  const int nh4 = half4 + 1;
  std::vector<Complex> s1(f4.spectral_size());
  std::vector<Complex> s2(f4.spectral_size());
  for (int j = 0; j < n4; ++j) {
    const int my = signed_mode(j, n4);
    for (int i = 0; i < nh4; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * nh4 + i;
      if (i == half4 || j == half4) {
        s1[idx] = s2[idx] = 0.0;
        continue;
      }
      const double g = ghat[static_cast<std::size_t>(std::abs(my)) * q + i];
      s1[idx] = Complex(0.0, -dk * my * g);
      s2[idx] = Complex(0.0, dk * i * g);
    }
  }
  // f4.inverse divides by n4²; the continuous inverse needs 1/(n4 h)², so the
  // result is h² K(x), exactly the midpoint convolution weight.
  std::vector<double> g1(static_cast<std::size_t>(n4) * n4);
  std::vector<double> g2(g1.size());
  f4.inverse(s1, g1);
  f4.inverse(s2, g2);
  s1.clear();
  s1.shrink_to_fit();
  s2.clear();
  s2.shrink_to_fit();

  const int n2 = 2 * n;
  std::vector<double> r1(static_cast<std::size_t>(n2) * n2);
  std::vector<double> r2(r1.size());
  for (int b = 0; b < n2; ++b) {
    const int ob = b < n ? b : b - n2;
    const int sb = (ob + n4) % n4;
    for (int a = 0; a < n2; ++a) {
      const int oa = a < n ? a : a - n2;
      const int sa = (oa + n4) % n4;
      r1[static_cast<std::size_t>(b) * n2 + a] = g1[static_cast<std::size_t>(sb) * n4 + sa];
      r2[static_cast<std::size_t>(b) * n2 + a] = g2[static_cast<std::size_t>(sb) * n4 + sa];
    }
  }
  RealFft2d f2(n2);
  auto kernel = std::make_shared<FreeSpaceKernel>();
  kernel->k1.resize(f2.spectral_size());
  kernel->k2.resize(f2.spectral_size());
  f2.forward(r1, kernel->k1);
  f2.forward(r2, kernel->k2);
  return kernel;
}

std::shared_ptr<const FreeSpaceKernel> free_space_kernel(const GridSpec& spec) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const FreeSpaceKernel>> cache;
  const auto key = std::make_pair(spec.n, spec.L);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto kernel = build_free_space_kernel(spec);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(kernel)).first->second;
}

// Transform workspace shared by the velocity operator and the time stepper.
class Engine {
 public:
  Engine(const GridSpec& spec, PoissonMode mode, bool dealias)
      : spec_(spec), mode_(mode), n_(spec.n), nh_(spec.n / 2 + 1), fft_(spec.n) {
    const double dk = kPi / spec.L;
    kx_.resize(nh_);
    ky_.resize(n_);
    for (int i = 0; i < nh_; ++i) kx_[i] = (i == n_ / 2) ? 0.0 : dk * i;
    for (int j = 0; j < n_; ++j) ky_[j] = (j == n_ / 2) ? 0.0 : dk * signed_mode(j, n_);
    keep_.assign(fft_.spectral_size(), 1);
    inv_k2_.assign(fft_.spectral_size(), 0.0);
    for (int j = 0; j < n_; ++j) {
      const int my = signed_mode(j, n_);
      for (int i = 0; i < nh_; ++i) {
        const std::size_t idx = index(i, j);
        if (dealias && (3 * i >= n_ || 3 * std::abs(my) >= n_)) keep_[idx] = 0;
        if (i == n_ / 2 || j == n_ / 2) continue;
        const double k2 = dk * dk * (static_cast<double>(i) * i + static_cast<double>(my) * my);
        if (k2 > 0.0) inv_k2_[idx] = 1.0 / k2;
      }
    }
    what_.resize(fft_.spectral_size());
    tmp_.resize(fft_.spectral_size());
    if (mode_ == PoissonMode::free_space) {
      kernel_ = free_space_kernel(spec);
      fft2_ = std::make_unique<RealFft2d>(2 * n_);
      pad_.assign(static_cast<std::size_t>(4) * n_ * n_, 0.0);
      pad_hat_.resize(fft2_->spectral_size());
      pad_tmp_.resize(fft2_->spectral_size());
      pad_out_.resize(pad_.size());
    }
  }

  const GridSpec& spec() const { return spec_; }
  RealFft2d& fft() { return fft_; }
  std::vector<Complex>& what() { return what_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nh_ + i; }
  bool kept(std::size_t idx) const { return keep_[idx] != 0; }

  void forward(std::span<const double> in) { fft_.forward(in, what_); }

  void truncate(std::vector<Complex>& s) const {
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (!keep_[k]) s[k] = 0.0;
    }
  }

  /// ∂x (axis 0) or ∂y (axis 1) of the field whose spectrum is in what_.
  void derivative(int axis, std::span<double> out) {
    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < nh_; ++i) {
        const std::size_t idx = index(i, j);
        const double k = axis == 0 ? kx_[i] : ky_[j];
        tmp_[idx] = Complex(-k * what_[idx].imag(), k * what_[idx].real());
      }
    }
    fft_.inverse(tmp_, out);
  }

  /// Velocity of the field whose spectrum is in what_ and whose physical
  /// values are omega (used by the free-space closure). Returns the mean
  /// vorticity removed by the periodic closure.
  double velocity(std::span<const double> omega, std::span<double> u1, std::span<double> u2) {
    if (mode_ == PoissonMode::periodic) {
      for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < nh_; ++i) {
          const std::size_t idx = index(i, j);
          const Complex w = what_[idx] * inv_k2_[idx];
          tmp_[idx] = Complex(-ky_[j] * w.imag(), ky_[j] * w.real());  // i k2 ω̂/|k|²
        }
      }
      fft_.inverse(tmp_, u1);
      for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < nh_; ++i) {
          const std::size_t idx = index(i, j);
          const Complex w = what_[idx] * inv_k2_[idx];
          tmp_[idx] = Complex(kx_[i] * w.imag(), -kx_[i] * w.real());  // -i k1 ω̂/|k|²
        }
      }
      fft_.inverse(tmp_, u2);
      return what_[0].real() / (static_cast<double>(n_) * n_);
    }

    const int n2 = 2 * n_;
    for (int j = 0; j < n_; ++j) {
      std::memcpy(&pad_[static_cast<std::size_t>(j) * n2], &omega[static_cast<std::size_t>(j) * n_],
                  sizeof(double) * n_);
    }
    fft2_->forward(pad_, pad_hat_);
    for (int c = 0; c < 2; ++c) {
      const auto& k = c == 0 ? kernel_->k1 : kernel_->k2;
      for (std::size_t s = 0; s < pad_hat_.size(); ++s) pad_tmp_[s] = pad_hat_[s] * k[s];
      fft2_->inverse(pad_tmp_, pad_out_);
      auto out = c == 0 ? u1 : u2;
      for (int j = 0; j < n_; ++j) {
        const double* src = &pad_out_[static_cast<std::size_t>(j) * n2];
        double* dst = &out[static_cast<std::size_t>(j) * n_];
        std::memcpy(dst, src, sizeof(double) * n_);
      }
    }
    return 0.0;
  }

 private:
  GridSpec spec_;
  PoissonMode mode_;
  int n_;
  int nh_;
  RealFft2d fft_;
  std::vector<double> kx_;
  std::vector<double> ky_;
  std::vector<unsigned char> keep_;
  std::vector<double> inv_k2_;
  std::vector<Complex> what_;
  std::vector<Complex> tmp_;

  std::shared_ptr<const FreeSpaceKernel> kernel_;
  std::unique_ptr<RealFft2d> fft2_;
  std::vector<double> pad_;
  std::vector<Complex> pad_hat_;
  std::vector<Complex> pad_tmp_;
  std::vector<double> pad_out_;
};

double max_abs_velocity(std::span<const double> u1, std::span<const double> u2) {
  double m = 0.0;
  for (std::size_t k = 0; k < u1.size(); ++k) m = std::max(m, std::hypot(u1[k], u2[k]));
  return m;
}

double relative_drift(double value, double baseline) {
  return baseline != 0.0 ? std::abs(value - baseline) / std::abs(baseline) : std::abs(value);
}

}  // namespace

Velocity velocity_from_vorticity(const ScalarField& omega, PoissonMode mode) {
  Engine engine(omega.spec(), mode, false);
  Velocity v{ScalarField(omega.spec()), ScalarField(omega.spec()), 0.0};
  engine.forward(omega.values());
  v.mean_vorticity = engine.velocity(omega.values(), v.u1.values(), v.u2.values());
  return v;
}

double spectral_divergence(const ScalarField& u1, const ScalarField& u2) {
  require_same_grid(u1, u2);
  Engine engine(u1.spec(), PoissonMode::periodic, false);
  const std::size_t size = u1.spec().size();
  std::vector<double> d1(size), d2(size);
  engine.forward(u1.values());
  engine.derivative(0, d1);
  engine.forward(u2.values());
  engine.derivative(1, d2);
  double div = 0.0;
  for (std::size_t k = 0; k < size; ++k) div = std::max(div, std::abs(d1[k] + d2[k]));
  const double umax = max_abs_velocity(u1.values(), u2.values());
  if (umax == 0.0) return 0.0;
  const double kmax = kPi * u1.spec().n / (2.0 * u1.spec().L);
  return div / (kmax * umax);
}

// ---------------------------------------------------------------------------

Baselines measure_baselines(const ScalarField& omega) {
  Baselines b;
  b.L1 = lp_norm(omega, 1.0);
  b.L2 = lp_norm(omega, 2.0);
  b.J = angular_impulse(omega);
  b.sup = sup_norm(omega);
  if (b.sup > 0.0) {
    for (int k = 1; k <= 16; ++k) b.ladder_alpha.push_back(b.sup * k / 17.0);
    for (double a : b.ladder_alpha) {
      std::size_t c = 0;
      for (double v : omega.values()) c += v > a ? 1 : 0;
      b.ladder_counts.push_back(c);
    }
  }
  b.patch_q = patch_conserved_quantity(omega);
  b.patch_q_linear = patch_conserved_quantity_linear(omega);
  return b;
}

FlowState FlowState::initial(ScalarField omega0) {
  FlowState s;
  s.baselines = measure_baselines(omega0);
  s.omega = std::move(omega0);
  return s;
}

ConservationRecord conservation_report(const FlowState& state) {
  const Baselines& b = state.baselines;
  const ScalarField& w = state.omega;
  ConservationRecord r;
  r.t = state.t;
  r.L1 = lp_norm(w, 1.0);
  r.L2 = lp_norm(w, 2.0);
  r.J = angular_impulse(w);
  r.drift_L1 = relative_drift(r.L1, b.L1);
  r.drift_L2 = relative_drift(r.L2, b.L2);
  r.drift_J = relative_drift(r.J, b.J);
  if (!b.ladder_alpha.empty() && b.ladder_counts.front() > 0) {
    double worst = 0.0;
    for (std::size_t k = 0; k < b.ladder_alpha.size(); ++k) {
      std::size_t c = 0;
      for (double v : w.values()) c += v > b.ladder_alpha[k] ? 1 : 0;
      const double diff = std::abs(static_cast<double>(c) - static_cast<double>(b.ladder_counts[k]));
      worst = std::max(worst, diff);
    }
    r.dist_drift = worst / static_cast<double>(b.ladder_counts.front());
  }
  r.patch_q = patch_conserved_quantity(w);
  r.patch_q_drift = relative_drift(r.patch_q, b.patch_q);
  r.patch_q_linear = patch_conserved_quantity_linear(w);
  r.patch_q_linear_drift = relative_drift(r.patch_q_linear, b.patch_q_linear);
  r.boundary_mass = boundary_mass_fraction(w);
  r.min_value = *std::min_element(w.values().begin(), w.values().end());
  return r;
}

void write_conservation_csv_header(std::ostream& out) { out << "t,L1,L2,J,dist_drift,patch_q,boundary_mass\n"; }

void append_conservation_csv(std::ostream& out, const ConservationRecord& rec) {
  std::ostringstream line;
  line << std::setprecision(17) << rec.t << ',' << rec.L1 << ',' << rec.L2 << ',' << rec.J << ',' << rec.dist_drift
       << ',' << rec.patch_q << ',' << rec.boundary_mass << '\n';
  out << line.str();
}

// ---------------------------------------------------------------------------

struct SpectralSolver::Impl {
  Impl(const GridSpec& spec, const SolverConfig& cfg)
      : engine(spec, cfg.poisson, cfg.dealias),
        size(spec.size()),
        wd(size),
        wx(size),
        wy(size),
        u1(size),
        u2(size),
        prod(size),
        stage(size),
        k1(size),
        k2(size),
        k3(size),
        k4(size) {}

  // out = -dir * P(u·∇ω); returns max|u| of the (truncated) field.
  double tendency(const SolverConfig& cfg, std::span<const double> omega, std::span<double> out) {
    engine.forward(omega);
    std::span<const double> source = omega;
    if (cfg.dealias) {
      engine.truncate(engine.what());
      if (cfg.poisson == PoissonMode::free_space) {
        engine.fft().inverse(engine.what(), wd);
        source = wd;
      }
    }
    engine.derivative(0, wx);
    engine.derivative(1, wy);
    engine.velocity(source, u1, u2);
    const double umax = max_abs_velocity(u1, u2);
    for (std::size_t k = 0; k < size; ++k) prod[k] = u1[k] * wx[k] + u2[k] * wy[k];
    engine.forward(prod);
    if (cfg.dealias) engine.truncate(engine.what());
    engine.fft().inverse(engine.what(), out);
    const double s = -static_cast<double>(cfg.time_direction);
    for (double& v : out) v *= s;
    return umax;
  }

  void apply_filter(std::span<double> omega) {
    const GridSpec& g = engine.spec();
    const int n = g.n;
    const int nh = n / 2 + 1;
    engine.forward(omega);
    auto& w = engine.what();
    for (int j = 0; j < n; ++j) {
      const double ey = std::pow(std::abs(signed_mode(j, n)) / (n / 2.0), 36);
      for (int i = 0; i < nh; ++i) {
        const double ex = std::pow(i / (n / 2.0), 36);
        w[engine.index(i, j)] *= std::exp(-36.0 * (ex + ey));
      }
    }
    engine.fft().inverse(w, omega);
  }

  Engine engine;
  std::size_t size;
  std::vector<double> wd, wx, wy, u1, u2, prod, stage, k1, k2, k3, k4;
};

SpectralSolver::SpectralSolver(const GridSpec& spec, const SolverConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  impl_ = std::make_unique<Impl>(spec, cfg_);
}

SpectralSolver::~SpectralSolver() = default;

ScalarField SpectralSolver::tendency(const ScalarField& omega) {
  if (!(omega.spec() == impl_->engine.spec())) throw std::invalid_argument("tendency: grid mismatch");
  ScalarField out(omega.spec());
  impl_->tendency(cfg_, omega.values(), out.values());
  return out;
}

StepInfo SpectralSolver::step(FlowState& state, double dt_max) {
  if (!(state.omega.spec() == impl_->engine.spec())) throw std::invalid_argument("step: grid mismatch");
  Impl& m = *impl_;
  auto w = state.omega.values();
  const std::size_t size = m.size;
  const double h = state.omega.spec().h();

  const double umax = m.tendency(cfg_, w, m.k1);
  if (!std::isfinite(umax)) {
    std::ostringstream msg;
    msg << "solver blowup: non-finite velocity at t = " << state.t << " (step " << state.steps << ")";
    throw std::runtime_error(msg.str());
  }
  double dt = umax > 0.0 ? cfg_.cfl * h / umax : kInf;
  dt = std::min(dt, dt_max);
  if (!std::isfinite(dt)) dt = cfg_.cfl * h;

  for (std::size_t k = 0; k < size; ++k) m.stage[k] = w[k] + 0.5 * dt * m.k1[k];
  m.tendency(cfg_, m.stage, m.k2);
  for (std::size_t k = 0; k < size; ++k) m.stage[k] = w[k] + 0.5 * dt * m.k2[k];
  m.tendency(cfg_, m.stage, m.k3);
  for (std::size_t k = 0; k < size; ++k) m.stage[k] = w[k] + dt * m.k3[k];
  m.tendency(cfg_, m.stage, m.k4);
  const double sixth = dt / 6.0;
  bool finite = true;
  for (std::size_t k = 0; k < size; ++k) {
    w[k] += sixth * (m.k1[k] + 2.0 * m.k2[k] + 2.0 * m.k3[k] + m.k4[k]);
    finite = finite && std::isfinite(w[k]);
  }
  if (!finite) {
    std::ostringstream msg;
    msg << "solver blowup: non-finite vorticity after step " << state.steps + 1 << " at t = " << state.t + dt;
    throw std::runtime_error(msg.str());
  }
  if (cfg_.filter) m.apply_filter(w);

  state.t = (dt == dt_max) ? state.t + dt_max : state.t + dt;
  ++state.steps;
  return StepInfo{dt, umax, false};
}

void SpectralSolver::evolve(FlowState& state, const Observer& observer) {
  if (observer) observer(state, StepInfo{0.0, 0.0, true});
  const double end = cfg_.t_end;
  const double eps = 1e-13 * std::max(1.0, std::abs(end));
  while (state.t < end - eps) {
    StepInfo info = step(state, end - state.t);
    if (state.t >= end - eps) state.t = end;
    info.snapshot = state.steps % cfg_.snapshot_stride == 0 || state.t >= end;
    if (observer) observer(state, info);
  }
}

FlowState step(const FlowState& state, const SolverConfig& cfg) {
  SpectralSolver solver(state.omega.spec(), cfg);
  FlowState next = state;
  solver.step(next, std::max(0.0, cfg.t_end - state.t) > 0.0 ? cfg.t_end - state.t : kInf);
  return next;
}

void evolve(FlowState& state, const SolverConfig& cfg, const Observer& observer) {
  SpectralSolver solver(state.omega.spec(), cfg);
  solver.evolve(state, observer);
}

}  // namespace vsl
