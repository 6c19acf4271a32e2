// Copyright 2026 The audioroi Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "audioroi/op_counter.hpp"
#include "audioroi/stft.hpp"

namespace audioroi::ssl {

inline constexpr double kSpeedOfSound = 343.0;  // m/s

/// Microphone positions in the camera frame: x right, y down, z forward
/// along the optical axis. Meters.
class ArrayGeometry {
 public:
  explicit ArrayGeometry(std::vector<Eigen::Vector3d> mics);

  /// Square of side `side` meters centered on the optical axis, in the
  /// image plane. Mic order: top-left, top-right, bottom-right, bottom-left.
  static ArrayGeometry square(double side = 0.064);

  std::size_t num_mics() const { return mics_.size(); }
  const std::vector<Eigen::Vector3d>& mics() const { return mics_; }
  /// All unordered pairs (i, j) with i < j, lexicographic.
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const {
    return pairs_;
  }
  std::size_t num_pairs() const { return pairs_.size(); }
  double max_spacing() const;

 private:
  std::vector<Eigen::Vector3d> mics_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Pinhole camera with square pixels and principal point at the image center.
struct CameraModel {
  std::size_t width = 640;
  std::size_t height = 480;
  double hfov_deg = 60.0;

  void validate() const;
  double focal_px() const;
};

struct GridDims {
  std::size_t cols = 9;
  std::size_t rows = 7;

  std::size_t size() const { return cols * rows; }
};

struct RegionIndex {
  std::size_t col = 0;
  std::size_t row = 0;

  friend bool operator==(const RegionIndex&, const RegionIndex&) = default;
};

struct Pixel {
  double x = 0.0;
  double y = 0.0;
};

/// Frequencies included in the beamformer sums.
struct FrequencyBand {
  double low_hz = 100.0;
  double high_hz = 8000.0;
};

/// Unit far-field direction seen through pixel `p`.
Eigen::Vector3d pixel_to_direction(const CameraModel& camera, Pixel p);
/// Projection of a forward-facing direction (z > 0) onto the image plane.
Pixel direction_to_pixel(const CameraModel& camera, const Eigen::Vector3d& dir);

/// Far-field TDOA of pair (i, j) in samples: (r_j - r_i) . u / c * fs.
/// Positive when mic i hears the wavefront later than mic j.
double pair_tdoa_samples(const ArrayGeometry& geometry, std::size_t i,
                         std::size_t j, const Eigen::Vector3d& direction,
                         double sample_rate);

/// Camera-projected steering grid with per-region, per-pair TDOAs.
class SteeringGrid {
 public:
  SteeringGrid(const ArrayGeometry& geometry, CameraModel camera, GridDims dims,
               double sample_rate, std::size_t frame_size,
               FrequencyBand band = {});

  const CameraModel& camera() const { return camera_; }
  GridDims dims() const { return dims_; }
  std::size_t num_regions() const { return dims_.size(); }
  std::size_t num_pairs() const { return pairs_.size(); }
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const {
    return pairs_;
  }
  double sample_rate() const { return sample_rate_; }
  std::size_t frame_size() const { return frame_size_; }
  /// Inclusive bin range summed by the beamformer.
  std::size_t first_bin() const { return first_bin_; }
  std::size_t last_bin() const { return last_bin_; }
  std::size_t num_band_bins() const { return last_bin_ - first_bin_ + 1; }

  std::size_t region_index(RegionIndex r) const;
  RegionIndex region_at(std::size_t index) const;
  const Eigen::Vector3d& direction(std::size_t region) const {
    return directions_[region];
  }
  double tdoa(std::size_t region, std::size_t pair) const {
    return tdoas_[region * pairs_.size() + pair];
  }

 private:
  CameraModel camera_;
  GridDims dims_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  double sample_rate_;
  std::size_t frame_size_;
  std::size_t first_bin_;
  std::size_t last_bin_;
  std::vector<Eigen::Vector3d> directions_;
  std::vector<double> tdoas_;
};

SteeringGrid build_grid(const ArrayGeometry& geometry, const CameraModel& camera,
                        GridDims dims, double sample_rate, std::size_t frame_size,
                        FrequencyBand band = {});

/// Center of the region's pixel cell.
Pixel region_to_pixel(const SteeringGrid& grid, RegionIndex region);
/// Region whose cell contains `p`; pixels outside the image are clamped.
RegionIndex pixel_to_region(const SteeringGrid& grid, Pixel p);

/// Recursively averaged, mask-weighted PHAT cross-spectra for every mic pair.
class CrossSpectrumState {
 public:
  CrossSpectrumState(std::vector<std::pair<std::size_t, std::size_t>> pairs,
                     std::size_t bins, double alpha);

  /// X_ij <- (1 - alpha) X_ij + alpha M[k] X_i X_j^* / (|X_i| |X_j|).
  /// An empty mask means all ones. Bins where |X_i||X_j| = 0 add nothing.
  void update(const dsp::Spectrogram& spec, std::size_t t,
              std::span<const double> mask = {}, OpCounter* counter = nullptr);

  std::size_t num_pairs() const { return pairs_.size(); }
  std::size_t num_bins() const { return bins_; }
  double alpha() const { return alpha_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const {
    return pairs_;
  }

  std::complex<double>& at(std::size_t pair, std::size_t k) {
    return values_[pair * bins_ + k];
  }
  const std::complex<double>& at(std::size_t pair, std::size_t k) const {
    return values_[pair * bins_ + k];
  }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::size_t bins_;
  double alpha_;
  std::vector<std::complex<double>> values_;
};

/// Beamformer energy per region, row-major (index = row * cols + col).
struct AcousticImage {
  GridDims dims;
  std::vector<double> energies;
  RegionIndex argmax;
  std::size_t frame = 0;

  /// Picks the maximum, ties to the lowest row-major index.
  static AcousticImage from_energies(GridDims dims, std::vector<double> energies,
                                     std::size_t frame = 0);
  double energy(RegionIndex r) const { return energies[r.row * dims.cols + r.col]; }
};

/// Direct evaluation: energy(q) = sum_pairs sum_k Re(X_ij[k] e^{+j 2 pi k
/// tdoa_ij(q) / N}), with the phasors formed on the fly from grid TDOAs.
AcousticImage srp_phat_exact(const CrossSpectrumState& state,
                             const SteeringGrid& grid,
                             OpCounter* counter = nullptr, std::size_t frame = 0);

/// Low-rank factorization of the real steering matrix.
///
/// Energies are Re(D w) for the complex steering matrix D and the stacked
/// cross-spectra w. Writing w as interleaved (Re, Im) gives a real
/// regions x (2 pairs bins) matrix A with E = A w. A = U S V^T is truncated
/// to the smallest rank R whose relative Frobenius error is <= delta, and
/// stored as (U_R S_R) and V_R^T.
class SvdPhatModel {
 public:
  SvdPhatModel(const SteeringGrid& grid, double delta);

  std::size_t rank() const { return static_cast<std::size_t>(left_.cols()); }
  double delta() const { return delta_; }
  double reconstruction_error() const { return reconstruction_error_; }
  const Eigen::VectorXd& singular_values() const { return singular_values_; }
  const Eigen::MatrixXd& steering() const { return steering_; }
  GridDims dims() const { return dims_; }
  std::size_t num_pairs() const { return num_pairs_; }

  /// Supervector (interleaved Re, Im over pairs then band bins).
  Eigen::VectorXd supervector(const CrossSpectrumState& state) const;

  AcousticImage evaluate(const CrossSpectrumState& state,
                         OpCounter* counter = nullptr,
                         std::size_t frame = 0) const;

  /// FLOPs of one evaluate() call and of one srp_phat_exact() call.
  std::uint64_t evaluation_flops() const;
  std::uint64_t exact_flops() const;

 private:
  GridDims dims_;
  std::size_t num_pairs_;
  std::size_t first_bin_;
  std::size_t last_bin_;
  double delta_;
  double reconstruction_error_;
  Eigen::MatrixXd steering_;  // regions x 2M
  Eigen::VectorXd singular_values_;
  Eigen::MatrixXd left_;   // regions x R, U_R S_R
  Eigen::MatrixXd right_;  // R x 2M, V_R^T
};

/// delta = 0 keeps full rank; negative delta is an error.
SvdPhatModel build_svd_model(const SteeringGrid& grid, double delta);

AcousticImage srp_phat_svd(const SvdPhatModel& model,
                           const CrossSpectrumState& state,
                           OpCounter* counter = nullptr, std::size_t frame = 0);

/// FLOPs of srp_phat_exact on this grid.
std::uint64_t exact_srp_flops(const SteeringGrid& grid);

}  // namespace audioroi::ssl
