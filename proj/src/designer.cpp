// Copyright 2026 The sectorbeam Authors
// SPDX-License-Identifier: Apache-2.0
#include "sectorbeam/designer.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "sectorbeam/parallel.hpp"

namespace sectorbeam {

std::string to_string(WeightingMode mode) {
  return mode == WeightingMode::elevation_cosine ? "elevation_cosine"
                                                 : "verbatim_azimuth_cosine";
}

WeightingMode weighting_mode_from_string(const std::string& name) {
  if (name == "elevation_cosine") return WeightingMode::elevation_cosine;
  if (name == "verbatim_azimuth_cosine") return WeightingMode::verbatim_azimuth_cosine;
  throw ConfigError("unknown weighting_mode '" + name + "'");
}

double QuadratureGrid::total_weight() const {
  return std::accumulate(nodes.begin(), nodes.end(), 0.0,
                         [](double acc, const QuadratureNode& n) { return acc + n.weight; });
}

namespace {

bool divides_exactly(double range, double step) {
  const double ratio = range / step;
  return std::abs(ratio - std::round(ratio)) < 1e-9 && std::round(ratio) >= 1.0;
}

}  // namespace

void DesignConfig::validate() const {
  if (n_fft < 64 || (n_fft & (n_fft - 1)) != 0) {
    throw ConfigError("design.n_fft must be a power of two >= 64");
  }
  if (!(sample_rate_hz > 0.0)) {
    throw ConfigError("design.sample_rate_hz must be positive");
  }
  if (diagonal_loading < 0.0) {
    throw ConfigError("design.diagonal_loading must be >= 0");
  }
  if (!(angle_step_deg > 0.0) || !divides_exactly(360.0, angle_step_deg) ||
      !divides_exactly(180.0, angle_step_deg)) {
    throw ConfigError("design.angle_step_deg must divide both 360 and 180 exactly");
  }
}

QuadratureGrid build_grid(double step_deg, WeightingMode mode) {
  if (!(step_deg > 0.0) || !divides_exactly(360.0, step_deg) ||
      !divides_exactly(180.0, step_deg)) {
    throw ConfigError("build_grid: step_deg " + std::to_string(step_deg) +
                      " must divide both 360 and 180 exactly");
  }
  const auto n_az = static_cast<int>(std::round(360.0 / step_deg));
  const auto n_el = static_cast<int>(std::round(180.0 / step_deg));
  const double cell = deg2rad(step_deg) * deg2rad(step_deg);

  QuadratureGrid grid;
  grid.azimuth_step_deg = step_deg;
  grid.elevation_step_deg = step_deg;
  grid.mode = mode;
  grid.nodes.reserve(static_cast<std::size_t>(n_az) * static_cast<std::size_t>(n_el));
  for (int j = 0; j < n_az; ++j) {
    const double az = (j + 0.5) * step_deg;
    for (int k = 0; k < n_el; ++k) {
      const double el = -90.0 + (k + 0.5) * step_deg;
      const double density = mode == WeightingMode::elevation_cosine
                                 ? std::cos(deg2rad(el))
                                 : std::cos(deg2rad(az));
      grid.nodes.push_back({Direction(az, el), density * cell});
    }
  }
  return grid;
}

SteeringBasis::SteeringBasis(const ArrayGeometry& geom, const QuadratureGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.nodes.size());
  const Eigen::Index channels = geom.channels();
  projection_.resize(n, channels);
  weights_.resize(n);
  dirs_.reserve(grid.nodes.size());
  for (Eigen::Index row = 0; row < n; ++row) {
    const auto& node = grid.nodes[static_cast<std::size_t>(row)];
    const Eigen::Vector3d k = unit_vector(node.dir);
    for (Eigen::Index i = 0; i < channels; ++i) {
      projection_(row, i) = k.dot(geom.mics[static_cast<std::size_t>(i)]);
    }
    weights_[row] = node.weight;
    dirs_.push_back(node.dir);
  }
  const auto columns =
      static_cast<Eigen::Index>(std::round(360.0 / grid.azimuth_step_deg));
  if (columns >= 1 && n % columns == 0) {
    azimuth_columns_ = columns;
  }
  column_height_ = n / azimuth_columns_;
}

Eigen::MatrixXcd SteeringBasis::steering_matrix(double freq_hz,
                                                double speed_of_sound) const {
  const double scale = -2.0 * kPi * freq_hz / speed_of_sound;
  const Eigen::ArrayXXd phase = scale * projection_.array();
  Eigen::MatrixXcd d(projection_.rows(), projection_.cols());
  d.real() = phase.cos().matrix();
  d.imag() = phase.sin().matrix();
  return d;
}

namespace {

// Kahan-compensated matrix accumulation: acc += term.
void compensated_add(Eigen::MatrixXcd& acc, Eigen::MatrixXcd& comp,
                     const Eigen::MatrixXcd& term) {
  for (Eigen::Index i = 0; i < acc.size(); ++i) {
    const std::complex<double> y = term.data()[i] - comp.data()[i];
    const std::complex<double> t = acc.data()[i] + y;
    comp.data()[i] = (t - acc.data()[i]) - y;
    acc.data()[i] = t;
  }
}

}  // namespace

Eigen::MatrixXcd SteeringBasis::gram(const Eigen::MatrixXcd& steering) const {
  // G = sum_n w_n d_n d_n^H with d_n the transposed row n of the steering
  // matrix: per azimuth column G_a = D_a^T diag(w_a) conj(D_a), combined
  // with compensated summation.
  const Eigen::Index channels = steering.cols();
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(channels, channels);
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(channels, channels);
  for (Eigen::Index a = 0; a < azimuth_columns_; ++a) {
    const auto block = steering.middleRows(a * column_height_, column_height_);
    Eigen::MatrixXcd weighted = block.conjugate();
    weighted.array().colwise() *= weights_.segment(a * column_height_, column_height_).array();
    compensated_add(gram, comp, block.transpose() * weighted);
  }
  return gram;
}

Eigen::VectorXcd SteeringBasis::sector_moment(const Eigen::MatrixXcd& steering,
                                              const std::vector<bool>& mask) const {
  Eigen::VectorXd masked = weights_;
  for (Eigen::Index n = 0; n < masked.size(); ++n) {
    if (!mask[static_cast<std::size_t>(n)]) masked[n] = 0.0;
  }
  const Eigen::Index channels = steering.cols();
  Eigen::MatrixXcd moment = Eigen::MatrixXcd::Zero(channels, 1);
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(channels, 1);
  for (Eigen::Index a = 0; a < azimuth_columns_; ++a) {
    const auto block = steering.middleRows(a * column_height_, column_height_);
    const Eigen::MatrixXcd partial =
        block.transpose() *
        masked.segment(a * column_height_, column_height_).cast<std::complex<double>>();
    compensated_add(moment, comp, partial);
  }
  return moment.col(0);
}

std::vector<bool> SteeringBasis::sector_mask(const AngularSector& sector) const {
  std::vector<bool> mask(dirs_.size());
  for (std::size_t n = 0; n < dirs_.size(); ++n) {
    mask[n] = sector.contains(dirs_[n]);
  }
  return mask;
}

Eigen::MatrixXcd gram_matrix(const ArrayGeometry& geom, const QuadratureGrid& grid,
                             double freq_hz, const WaveContext& ctx) {
  SteeringBasis basis(geom, grid);
  return basis.gram(basis.steering_matrix(freq_hz, ctx.speed_of_sound_mps));
}

Eigen::VectorXcd target_moment(const ArrayGeometry& geom, const QuadratureGrid& grid,
                               const SectorTarget& target, double freq_hz,
                               const WaveContext& ctx) {
  SteeringBasis basis(geom, grid);
  return basis.sector_moment(basis.steering_matrix(freq_hz, ctx.speed_of_sound_mps),
                             basis.sector_mask(target.sector));
}

namespace {

constexpr double kMaxCondition = 1e14;

// Spectral factorization of the loaded Gram. The solve goes through the
// eigendecomposition, which stays stable for the indefinite Grams the
// verbatim azimuth-cosine mode produces; singularity is judged on |lambda|.
// Two rounds of iterative refinement with an extended-precision residual
// push the forward error well below cond * eps, which the cyclic
// channel-symmetry bound of 1e-8 needs at heavily loaded low bins.
struct LoadedSolver {
  Eigen::MatrixXcd loaded;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eigen;
  double condition = 0.0;
  bool singular = false;

  Eigen::VectorXcd spectral_solve(const Eigen::VectorXcd& rhs) const {
    const Eigen::VectorXcd projected = eigen.eigenvectors().adjoint() * rhs;
    return eigen.eigenvectors() *
           (projected.array() / eigen.eigenvalues().array()).matrix();
  }

  Eigen::VectorXcd refined_residual(const Eigen::VectorXcd& w,
                                    const Eigen::VectorXcd& rhs) const {
    const auto n = loaded.rows();
    Eigen::VectorXcd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::complex<long double> acc(rhs[i].real(), rhs[i].imag());
      for (Eigen::Index k = 0; k < n; ++k) {
        const std::complex<long double> a(loaded(i, k).real(), loaded(i, k).imag());
        const std::complex<long double> x(w[k].real(), w[k].imag());
        acc -= a * x;
      }
      r[i] = std::complex<double>(static_cast<double>(acc.real()),
                                  static_cast<double>(acc.imag()));
    }
    return r;
  }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const {
    Eigen::VectorXcd w = spectral_solve(rhs);
    for (int pass = 0; pass < 2; ++pass) {
      w += spectral_solve(refined_residual(w, rhs));
    }
    return w;
  }
};

LoadedSolver factor_loaded_gram(const Eigen::MatrixXcd& gram, double loading) {
  const auto n = gram.rows();
  LoadedSolver out;
  out.loaded = gram;
  const double shift = loading * gram.trace().real() / static_cast<double>(n);
  out.loaded.diagonal().array() += shift;

  out.eigen.compute(out.loaded);
  const double max_abs = out.eigen.eigenvalues().cwiseAbs().maxCoeff();
  const double min_abs = out.eigen.eigenvalues().cwiseAbs().minCoeff();
  out.condition = min_abs > 0.0 ? max_abs / min_abs
                                : std::numeric_limits<double>::infinity();
  out.singular = !(out.condition < kMaxCondition);
  return out;
}

}  // namespace

Eigen::VectorXcd solve_sector_weights(const Eigen::MatrixXcd& gram,
                                      const Eigen::VectorXcd& moment,
                                      double loading) {
  if (gram.rows() != gram.cols() || gram.rows() != moment.size()) {
    throw ConfigError("solve_sector_weights: shape mismatch");
  }
  if (loading < 0.0) {
    throw ConfigError("solve_sector_weights: loading must be >= 0");
  }
  const LoadedSolver solver = factor_loaded_gram(gram, loading);
  if (solver.singular) {
    throw ProcessingError(
        "solve_sector_weights: loaded Gram is numerically singular "
        "(condition estimate " +
        std::to_string(solver.condition) + ")");
  }
  return solver.solve(moment);
}

BeamformerBank design_bank(const ArrayGeometry& geom,
                           const std::vector<AngularSector>& sectors,
                           const DesignConfig& cfg, const WaveContext& ctx,
                           DesignDiagnostics* diagnostics, unsigned threads) {
  cfg.validate();
  if (geom.channels() < 1) {
    throw ConfigError("design_bank: geometry has no microphones");
  }
  if (sectors.empty()) {
    throw ConfigError("design_bank: at least one sector required");
  }

  const QuadratureGrid grid = build_grid(cfg.angle_step_deg, cfg.weighting_mode);
  const SteeringBasis basis(geom, grid);
  std::vector<std::vector<bool>> masks;
  masks.reserve(sectors.size());
  for (const auto& sector : sectors) masks.push_back(basis.sector_mask(sector));

  const int bins = cfg.bins();
  const auto channels = static_cast<Eigen::Index>(geom.channels());
  const auto sector_count = static_cast<Eigen::Index>(sectors.size());

  BeamformerBank bank;
  bank.weights.assign(static_cast<std::size_t>(bins),
                      Eigen::MatrixXcd::Zero(channels, sector_count));
  bank.geometry = geom;
  bank.sectors = sectors;
  bank.config = cfg;
  bank.ctx = ctx;
  if (diagnostics) diagnostics->condition.assign(static_cast<std::size_t>(bins), 0.0);

  std::vector<std::string> failures(static_cast<std::size_t>(bins));

  parallel_for(static_cast<std::size_t>(bins), threads, [&](std::size_t b) {
    const double freq = cfg.bin_freq_hz(static_cast<int>(b));
    const Eigen::MatrixXcd steering =
        basis.steering_matrix(freq, ctx.speed_of_sound_mps);
    const Eigen::MatrixXcd gram = basis.gram(steering);
    const LoadedSolver solver = factor_loaded_gram(gram, cfg.diagonal_loading);
    if (diagnostics) diagnostics->condition[b] = solver.condition;
    if (solver.singular) {
      failures[b] = "bin " + std::to_string(b) + " (" + std::to_string(freq) +
                    " Hz): loaded Gram numerically singular, condition estimate " +
                    std::to_string(solver.condition);
      return;
    }
    for (Eigen::Index s = 0; s < sector_count; ++s) {
      const Eigen::VectorXcd moment =
          basis.sector_moment(steering, masks[static_cast<std::size_t>(s)]);
      const Eigen::VectorXcd w = solver.solve(moment);
      if (!w.allFinite()) {
        failures[b] = "bin " + std::to_string(b) + ", sector " + std::to_string(s) +
                      ": solve produced non-finite weights";
        return;
      }
      bank.weights[b].col(s) = w;
    }
  });

  for (const auto& failure : failures) {
    if (!failure.empty()) {
      throw ProcessingError("design_bank: " + failure);
    }
  }
  return bank;
}

std::complex<double> beam_response(const BeamformerBank& bank, int sector_index,
                                   const Direction& dir, int bin_index) {
  if (sector_index < 0 || sector_index >= bank.sector_count()) {
    throw ConfigError("beam_response: sector index " + std::to_string(sector_index) +
                      " out of range [0, " + std::to_string(bank.sector_count()) + ")");
  }
  if (bin_index < 0 || bin_index >= bank.bins()) {
    throw ConfigError("beam_response: bin index " + std::to_string(bin_index) +
                      " out of range [0, " + std::to_string(bank.bins()) + ")");
  }
  const Eigen::VectorXcd d =
      steering_vector(bank.geometry, dir, bank.bin_freq_hz(bin_index), bank.ctx);
  return bank.weights[static_cast<std::size_t>(bin_index)]
      .col(sector_index)
      .dot(d);  // Eigen's dot conjugates the left operand: w^H d
}

}  // namespace sectorbeam
