#include "gwpdyn/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "gwpdyn/errors.hpp"

namespace gwp {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<Vec> grid_points(const GridSpec& spec) {
  std::vector<Vec> pts;
  pts.reserve(spec.size());
  for (long i = 0; i < spec.size(); ++i) pts.push_back(spec.point(i));
  return pts;
}

bool on_boundary(const GridSpec& spec, long index) {
  for (int a = spec.dim() - 1; a >= 0; --a) {
    const int k = static_cast<int>(index % spec.n[a]);
    index /= spec.n[a];
    if (k == 0 || k == spec.n[a] - 1) return true;
  }
  return false;
}

// Wave vectors in FFT order.
std::vector<double> kinetic_energies(const GridSpec& spec, const MassSpec& ms) {
  std::vector<double> t(spec.size());
  const int d = spec.dim();
  Vec k(d);
  for (long i = 0; i < spec.size(); ++i) {
    long rem = i;
    for (int a = d - 1; a >= 0; --a) {
      const int j = static_cast<int>(rem % spec.n[a]);
      rem /= spec.n[a];
      const int jj = j < spec.n[a] / 2 ? j : j - spec.n[a];
      k(a) = 2.0 * kPi * jj / (spec.hi[a] - spec.lo[a]);
    }
    t[i] = 0.5 * ms.hbar * ms.hbar * k.dot(ms.m_inv * k);
  }
  return t;
}

class Fft {
 public:
  explicit Fft(const GridSpec& spec) : n_(spec.size()) {
    buf_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n_));
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* b = reinterpret_cast<fftw_complex*>(buf_);
    fwd_ = fftw_plan_dft(spec.dim(), spec.n.data(), b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(spec.dim(), spec.n.data(), b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  cplx* data() { return buf_; }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }
  long size() const { return n_; }

 private:
  long n_;
  cplx* buf_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

}  // namespace

long GridSpec::size() const {
  long s = 1;
  for (int v : n) s *= v;
  return s;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

void GridSpec::validate() const {
  if (n.empty() || n.size() > 2) fail(ErrorCode::unsupported, "grid supports D = 1 or 2");
  if (lo.size() != n.size() || hi.size() != n.size())
    fail(ErrorCode::invalid_argument, "grid lo/hi must have one entry per axis");
  for (int a = 0; a < dim(); ++a) {
    if (n[a] < 8 || (n[a] & (n[a] - 1)) != 0)
      fail(ErrorCode::invalid_argument, "grid points per axis must be a power of two >= 8");
    if (!(hi[a] > lo[a])) fail(ErrorCode::invalid_argument, "grid needs hi > lo");
  }
}

Vec GridSpec::point(long index) const {
  Vec x(dim());
  for (int a = dim() - 1; a >= 0; --a) {
    const int k = static_cast<int>(index % n[a]);
    index /= n[a];
    x(a) = lo[a] + k * spacing(a);
  }
  return x;
}

GridState grid_init(const GaussianState& g, const GridSpec& spec, const MassSpec& ms) {
  spec.validate();
  if (state_dim(g) != spec.dim()) fail(ErrorCode::invalid_argument, "grid and state dimensions differ");
  GridState s;
  s.spec = spec;
  s.psi = evaluate_wavefunction(g, grid_points(spec), ms);
  double edge = 0.0, sum = 0.0;
  for (long i = 0; i < spec.size(); ++i) {
    if (on_boundary(spec, i)) edge = std::max(edge, std::abs(s.psi[i]));
    sum += std::norm(s.psi[i]);
  }
  if (edge > 1e-6) fail(ErrorCode::range, "Gaussian leaks through the grid boundary");
  const double scale = norm(g, ms) / std::sqrt(sum * spec.cell_volume());
  for (auto& v : s.psi) v *= scale;
  return s;
}

struct GridPropagator::Impl {
  GridSpec spec;
  std::vector<cplx> half_v;
  std::vector<cplx> kin;
  mutable Fft fft;
  explicit Impl(const GridSpec& s) : spec(s), fft(s) {}
};

GridPropagator::GridPropagator(const GridSpec& spec, const Potential& pot, const MassSpec& ms,
                               double dt) {
  spec.validate();
  if (pot.dim() != spec.dim()) fail(ErrorCode::invalid_argument, "grid and potential dimensions differ");
  impl_ = std::make_unique<Impl>(spec);
  const long n = spec.size();
  impl_->half_v.resize(n);
  for (long i = 0; i < n; ++i)
    impl_->half_v[i] = std::exp(cplx(0.0, -0.5 * dt * pot.value(spec.point(i)) / ms.hbar));
  const auto t = kinetic_energies(spec, ms);
  impl_->kin.resize(n);
  for (long i = 0; i < n; ++i)
    impl_->kin[i] = std::exp(cplx(0.0, -dt * t[i] / ms.hbar)) / static_cast<double>(n);
}

GridPropagator::~GridPropagator() = default;

void GridPropagator::step(GridState& s) const {
  Impl& m = *impl_;
  const long n = m.fft.size();
  if (static_cast<long>(s.psi.size()) != n) fail(ErrorCode::invalid_argument, "grid state size mismatch");
  cplx* b = m.fft.data();
  for (long i = 0; i < n; ++i) b[i] = s.psi[i] * m.half_v[i];
  m.fft.forward();
  for (long i = 0; i < n; ++i) b[i] *= m.kin[i];
  m.fft.backward();
  for (long i = 0; i < n; ++i) s.psi[i] = b[i] * m.half_v[i];
}

void GridPropagator::run(GridState& s, long n_steps) const {
  for (long k = 0; k < n_steps; ++k) step(s);
}

GridObservables grid_observables(const GridState& s, const Potential& pot, const MassSpec& ms) {
  const GridSpec& spec = s.spec;
  const long n = spec.size();
  GridObservables o;
  o.mean_q = Vec::Zero(spec.dim());
  double n2 = 0.0, vsum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double w = std::norm(s.psi[i]);
    const Vec x = spec.point(i);
    n2 += w;
    o.mean_q += w * x;
    vsum += w * pot.value(x);
  }
  Fft fft(spec);
  for (long i = 0; i < n; ++i) fft.data()[i] = s.psi[i];
  fft.forward();
  const auto t = kinetic_energies(spec, ms);
  double tsum = 0.0, ksum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double w = std::norm(fft.data()[i]);
    tsum += w * t[i];
    ksum += w;
  }
  o.norm = std::sqrt(n2 * spec.cell_volume());
  o.mean_q /= n2;
  o.potential = vsum / n2;
  o.kinetic = tsum / ksum;
  o.energy = o.kinetic + o.potential;
  return o;
}

cplx grid_overlap(const GridState& s, const GaussianState& g, const MassSpec& ms) {
  const auto gv = evaluate_wavefunction(g, grid_points(s.spec), ms);
  cplx sum = 0.0;
  for (size_t i = 0; i < gv.size(); ++i) sum += std::conj(gv[i]) * s.psi[i];
  return sum * s.spec.cell_volume();
}

double grid_l2_difference(const GridState& a, const GridState& b) {
  if (a.psi.size() != b.psi.size()) fail(ErrorCode::invalid_argument, "grid states differ in size");
  double sum = 0.0;
  for (size_t i = 0; i < a.psi.size(); ++i) sum += std::norm(a.psi[i] - b.psi[i]);
  return std::sqrt(sum * a.spec.cell_volume());
}

double grid_l2_difference(const GridState& s, const GaussianState& g, const MassSpec& ms) {
  const auto gv = evaluate_wavefunction(g, grid_points(s.spec), ms);
  double sum = 0.0;
  for (size_t i = 0; i < gv.size(); ++i) sum += std::norm(s.psi[i] - gv[i]);
  return std::sqrt(sum * s.spec.cell_volume());
}

}  // namespace gwp
