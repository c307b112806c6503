#pragma once

// Core value types shared by every beamtrack module.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace beamtrack {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  InvalidArgument = 1,
  Config = 2,
  Runtime = 3,
  NotApplicable = 4,
};

/// Exception carrying a machine-readable code and, for configuration
/// problems, the dotted path of the offending field.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::string field = {})
      : std::runtime_error(what), code_(code), field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

[[noreturn]] inline void fail_invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, what);
}

/// Uniform linear array: M antennas spaced d apart, d expressed in wavelengths.
struct ArrayConfig {
  int num_antennas = 0;
  double spacing_ratio = 0.5;

  static ArrayConfig make(int num_antennas, double spacing_ratio = 0.5);

  /// Phase increment 2*pi*d/lambda between neighbouring elements per unit x.
  double phase_step() const noexcept { return 2.0 * kPi * spacing_ratio; }
  double sqrt_m() const noexcept;
};

/// Normalized spatial frequency x = sin(theta), confined to [-1, 1].
class SpatialFrequency {
 public:
  SpatialFrequency() = default;
  explicit SpatialFrequency(double x);

  static SpatialFrequency clamped(double x) noexcept;

  double value() const noexcept { return x_; }
  operator double() const noexcept { return x_; }

 private:
  double x_ = 0.0;
};

struct ChannelState {
  SpatialFrequency x;
  cplx beta{1.0, 0.0};

  static ChannelState make(SpatialFrequency x, cplx beta);
};

/// Pilot symbol and per-antenna SNR rho = |p beta|^2 / sigma^2. The noise
/// power is always derived from rho, never stored.
struct SnrConfig {
  cplx pilot{1.0, 0.0};
  double rho = 1.0;
  bool noise_free = false;

  static SnrConfig make(double rho, cplx pilot = {1.0, 0.0});
  static SnrConfig from_db(double snr_db, cplx pilot = {1.0, 0.0});
  static SnrConfig noiseless(cplx pilot = {1.0, 0.0});

  double noise_power(cplx beta) const noexcept;
};

double db_to_linear(double db) noexcept;

/// Analog beamformer: M phase-shifter weights of modulus 1/sqrt(M).
///
/// `weights()` holds the complex vector w itself, so the combiner output is
/// w^H a(x). With phases w_m the entries are e^{-j w_m}/sqrt(M), i.e. the
/// Hermitian transpose of the row of phasors e^{+j w_m}.
class BeamformingVector {
 public:
  static BeamformingVector from_phases(std::span<const double> phases);
  /// Entries e^{j arg(h_m)}/sqrt(M): the beamformer co-phasing channel h.
  static BeamformingVector co_phased(std::span<const cplx> h);

  std::size_t size() const noexcept { return w_.size(); }
  const CVec& weights() const noexcept { return w_; }
  std::vector<double> phases() const;

 private:
  explicit BeamformingVector(CVec w);
  CVec w_;
};

struct Observation {
  cplx y;
};

}  // namespace beamtrack
