#include "beamtrack/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace beamtrack {

namespace {

/// Sum_m c_m z^m by Horner's rule.
cplx poly(const CVec& c, cplx z) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

/// w^H a(x) for arbitrary weights.
cplx response(const CVec& w, const ArrayConfig& cfg, double x) {
  const cplx step = std::polar(1.0, -cfg.phase_step() * x);
  cplx a{1.0, 0.0};
  cplx acc{0.0, 0.0};
  for (const cplx& wm : w) {
    acc += std::conj(wm) * a;
    a *= step;
  }
  return acc;
}

double dictionary_atom(int k, int size) {
  return static_cast<double>(2 * k - 1 - size) / size;
}

}  // namespace

// ---------------------------------------------------------------------------
// Least squares

LeastSquares::LeastSquares(ArrayConfig cfg, BaselineMode mode, int m0)
    : cfg_(cfg),
      mode_(mode),
      m0_(m0 > 0 ? m0 : 2 * cfg.num_antennas),
      book_(coarse_sweep_codebook(cfg)),
      dirs_(sweep_directions(cfg)),
      sums_(static_cast<std::size_t>(cfg.num_antennas)),
      counts_(static_cast<std::size_t>(cfg.num_antennas), 0) {}

void LeastSquares::initialize(std::span<const Observation> sweep) {
  if (sweep.size() != book_.size()) fail_invalid("least squares needs a full sweep");
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    sums_[k] = sweep[k].y;
    counts_[k] = 1;
  }
  next_ = 0;
  stale_ = true;
}

cplx LeastSquares::pilot_response(double x, Rng&) {
  return matched_response(cfg_, dirs_[next_], x);
}

void LeastSquares::update(Observation y) {
  if (mode_ == BaselineMode::Static) {
    sums_[next_] += y.y;
    counts_[next_] += 1;
  } else {
    sums_[next_] = y.y;
    counts_[next_] = 1;
  }
  next_ = (next_ + 1) % cfg_.num_antennas;
  stale_ = true;
}

void LeastSquares::refresh() {
  if (!stale_) return;
  const int M = cfg_.num_antennas;
  h_hat_.assign(static_cast<std::size_t>(M), cplx{0.0, 0.0});
  for (int k = 0; k < M; ++k) {
    if (counts_[k] == 0) continue;
    const cplx mean = sums_[k] / static_cast<double>(counts_[k]);
    for (int m = 0; m < M; ++m) h_hat_[m] += book_[k].weights()[m] * mean;
  }
  double best = -1.0;
  for (int k = 1; k <= m0_; ++k) {
    const double x = dictionary_atom(k, m0_);
    const double mag = std::abs(poly(h_hat_, std::polar(1.0, cfg_.phase_step() * x)));
    if (mag > best) {
      best = mag;
      x_hat_ = x;
    }
  }
  stale_ = false;
}

double LeastSquares::estimate_x() {
  refresh();
  return x_hat_;
}

const CVec* LeastSquares::channel_estimate() {
  refresh();
  return &h_hat_;
}

// ---------------------------------------------------------------------------
// Compressed sensing

CompressedSensing::CompressedSensing(ArrayConfig cfg, BaselineMode mode, int m0)
    : cfg_(cfg),
      mode_(mode),
      m0_(m0 > 0 ? m0 : 2 * cfg.num_antennas),
      window_(std::max(1, cfg.num_antennas / 2)),
      b_(static_cast<std::size_t>(cfg.num_antennas)),
      diag_(static_cast<std::size_t>(cfg.num_antennas)) {}

void CompressedSensing::initialize(std::span<const Observation> sweep) {
  initialize_at(initial_estimate(cfg_, sweep, m0_).value());
}

void CompressedSensing::initialize_at(double x) {
  x_hat_ = SpatialFrequency(x).value();
  probes_.clear();
  obs_.clear();
  std::fill(b_.begin(), b_.end(), cplx{0.0, 0.0});
  std::fill(diag_.begin(), diag_.end(), cplx{0.0, 0.0});
  pooled_ = 0;
  stale_ = false;
}

cplx CompressedSensing::pilot_response(double x, Rng& probe_rng) {
  static const cplx kSymbols[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const double scale = 1.0 / cfg_.sqrt_m();
  probe_.resize(static_cast<std::size_t>(cfg_.num_antennas));
  for (auto& w : probe_) w = kSymbols[probe_rng.uniform_int(0, 3)] * scale;
  return response(probe_, cfg_, x);
}

void CompressedSensing::update(Observation y) {
  if (probe_.empty()) throw Error(ErrorCode::Runtime, "compressed sensing update without a probe");
  if (mode_ == BaselineMode::Static) {
    const int M = cfg_.num_antennas;
    for (int m = 0; m < M; ++m) b_[m] += probe_[m] * y.y;
    // diag_[D] = sum over m - m' = D of conj(w_m) w_m'.
    for (int D = 0; D < M; ++D)
      for (int m = D; m < M; ++m) diag_[D] += std::conj(probe_[m]) * probe_[m - D];
    ++pooled_;
  } else {
    probes_.push_back(probe_);
    obs_.push_back(y.y);
    if (static_cast<int>(probes_.size()) > window_) {
      probes_.erase(probes_.begin());
      obs_.erase(obs_.begin());
    }
  }
  probe_.clear();
  stale_ = true;
}

double CompressedSensing::estimate_x() {
  if (!stale_) return x_hat_;
  const int M = cfg_.num_antennas;
  CVec b = b_;
  CVec diag = diag_;
  if (mode_ == BaselineMode::Dynamic) {
    std::fill(b.begin(), b.end(), cplx{0.0, 0.0});
    std::fill(diag.begin(), diag.end(), cplx{0.0, 0.0});
    for (std::size_t n = 0; n < probes_.size(); ++n) {
      const CVec& w = probes_[n];
      for (int m = 0; m < M; ++m) b[m] += w[m] * obs_[n];
      for (int D = 0; D < M; ++D)
        for (int m = D; m < M; ++m) diag[D] += std::conj(w[m]) * w[m - D];
    }
  }
  // Correlation sum_m b_m z^m and column energy diag_0 + 2 Re sum_D diag_D z^-D.
  CVec off(diag.begin(), diag.end());
  off[0] = 0.0;
  const double e0 = diag[0].real();
  const double phi = cfg_.phase_step();
  const cplx step = std::polar(1.0, phi * 2.0 / kDictionarySize);
  cplx z = std::polar(1.0, phi * dictionary_atom(1, kDictionarySize));
  double best = -1.0;
  for (int k = 1; k <= kDictionarySize; ++k) {
    const double corr = std::norm(poly(b, z));
    const double energy = e0 + 2.0 * poly(off, std::conj(z)).real();
    const double score = energy > 0.0 ? corr / energy : 0.0;
    if (score > best) {
      best = score;
      x_hat_ = dictionary_atom(k, kDictionarySize);
    }
    z *= step;
    if ((k & 63) == 0) z /= std::abs(z);
  }
  stale_ = false;
  return x_hat_;
}

// ---------------------------------------------------------------------------
// Sector sweep with neighbour refinement

SectorSweep::SectorSweep(ArrayConfig cfg, int period)
    : cfg_(cfg), period_(period), dirs_(sweep_directions(cfg)) {
  if (period < 3) fail_invalid("sector-sweep probing period must be at least 3 slots");
}

void SectorSweep::initialize(std::span<const Observation> sweep) {
  if (sweep.size() != dirs_.size()) fail_invalid("sector sweep needs a full sweep");
  best_ = 0;
  for (std::size_t k = 1; k < sweep.size(); ++k)
    if (std::abs(sweep[k].y) > std::abs(sweep[best_].y)) best_ = static_cast<int>(k);
  begin_refinement();
}

void SectorSweep::begin_refinement() {
  const int M = cfg_.num_antennas;
  std::vector<int> base;
  for (int k = best_ - 1; k <= best_ + 1; ++k)
    if (k >= 0 && k < M) base.push_back(k);
  cand_.clear();
  for (int i = 0; i < period_; ++i) cand_.push_back(base[i % base.size()]);
  energy_.assign(static_cast<std::size_t>(M), 0.0);
  hits_.assign(static_cast<std::size_t>(M), 0);
  phase_ = 0;
}

cplx SectorSweep::pilot_response(double x, Rng&) {
  return matched_response(cfg_, dirs_[cand_[phase_]], x);
}

void SectorSweep::update(Observation y) {
  const int k = cand_[phase_];
  energy_[k] += std::abs(y.y);
  hits_[k] += 1;
  if (++phase_ < period_) return;
  int pick = best_;
  double top = energy_[best_] / hits_[best_];
  for (int c : cand_) {
    const double mean = energy_[c] / hits_[c];
    if (mean > top) {
      top = mean;
      pick = c;
    }
  }
  best_ = pick;
  begin_refinement();
}

// ---------------------------------------------------------------------------
// Extended Kalman filter on theta

KalmanTracker::KalmanTracker(ArrayConfig cfg, double rho, KalmanParams params, int m0)
    : cfg_(cfg), rho_(rho), params_(params), m0_(m0 > 0 ? m0 : 2 * cfg.num_antennas) {
  if (!(rho > 0.0)) fail_invalid("Kalman filter needs a finite positive SNR");
  if (!(params.process_noise >= 0.0)) fail_invalid("process noise must be non-negative");
  if (!(params.initial_variance >= 0.0)) fail_invalid("initial variance must be non-negative");
  if (params_.initial_variance == 0.0) {
    const double w = 1.0 / (cfg.num_antennas * cfg.spacing_ratio);
    params_.initial_variance = w * w;
  }
}

void KalmanTracker::initialize(std::span<const Observation> sweep) {
  initialize_at(initial_estimate(cfg_, sweep, m0_).value());
}

void KalmanTracker::initialize_at(double x) {
  theta_ = std::asin(SpatialFrequency(x).value());
  p_ = params_.initial_variance;
  slot_ = 0;
  diverged_ = false;
}

double KalmanTracker::probe_angle() const {
  const double off = params_.offset_deg * kPi / 180.0;
  const double a = (slot_ % 2 == 0) ? theta_ + off : theta_ - off;
  return std::clamp(a, -kPi / 2.0, kPi / 2.0);
}

cplx KalmanTracker::pilot_response(double x, Rng&) {
  return matched_response(cfg_, std::sin(probe_angle()), x);
}

void KalmanTracker::update(Observation y) {
  const double v = std::sin(probe_angle());
  const double xh = std::sin(theta_);
  // h(theta) = a(v)^H a(sin theta)/sqrt(M) and its theta derivative.
  const double phi = cfg_.phase_step();
  const cplx step = std::polar(1.0, phi * (v - xh));
  cplx term{1.0, 0.0};
  cplx h{0.0, 0.0};
  cplx dh{0.0, 0.0};
  for (int m = 0; m < cfg_.num_antennas; ++m) {
    h += term;
    dh += cplx{0.0, -phi * m} * term;
    term *= step;
  }
  h /= cfg_.sqrt_m();
  dh *= std::cos(theta_) / cfg_.sqrt_m();

  const double r = 1.0 / (2.0 * rho_);
  const double prior = p_ + params_.process_noise;
  const double post = 1.0 / (1.0 / prior + std::norm(dh) / r);
  theta_ += post * std::real(std::conj(dh) * (y.y - h)) / r;
  p_ = post;
  ++slot_;
  if (!std::isfinite(theta_) || !std::isfinite(p_) || std::abs(theta_) >= kPi / 2.0) {
    diverged_ = true;
    theta_ = std::clamp(std::isfinite(theta_) ? theta_ : 0.0, -kPi / 2.0, kPi / 2.0);
    if (!std::isfinite(p_)) p_ = params_.initial_variance;
  }
}

}  // namespace beamtrack
