#include "bm3d/filtering.hpp"

#include "bm3d/transforms.hpp"

#include <cmath>
#include <string>

namespace bm3d {

namespace {

Vector kaiser_vector(int side, Real beta) {
  Vector v(side);
  if (side == 1) {
    v(0) = 1.0;
    return v;
  }
  const Real denom = std::cyl_bessel_i(0.0, beta);
  for (int i = 0; i < side; ++i) {
    const Real t = 2.0 * i / (side - 1.0) - 1.0;  // [-1, 1]
    v(i) = std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - t * t)) / denom;
  }
  return v;
}

GroupSpectrum group_to_spectrum(const BlockGroup& group) {
  const Dct2& dct = Dct2::of(group.side);
  const long coeffs = static_cast<long>(group.side) * group.side;
  GroupSpectrum spectrum;
  spectrum.side = group.side;
  spectrum.coeffs.resize(group.depth(), coeffs);
  for (int k = 0; k < group.depth(); ++k) {
    const Matrix spec = dct.forward(group.slices[k]);
    spectrum.coeffs.row(k) = Eigen::Map<const Eigen::RowVectorXd>(spec.data(), coeffs);
  }
  return spectrum;
}

BlockGroup spectrum_to_group(const GroupSpectrum& spectrum, const BlockGroup& like) {
  const Dct2& dct = Dct2::of(spectrum.side);
  BlockGroup out;
  out.side = spectrum.side;
  out.origins = like.origins;
  out.slices.reserve(spectrum.depth());
  for (int k = 0; k < spectrum.depth(); ++k) {
    const Eigen::Map<const Matrix> spec(spectrum.coeffs.row(k).data(), spectrum.side,
                                        spectrum.side);
    out.slices.push_back(dct.inverse(spec));
  }
  return out;
}

void validate_group(const BlockGroup& group, const char* op) {
  require(group.depth() >= 1, std::string(op) + ": group is empty");
  require(group.depth() == static_cast<int>(group.origins.size()),
          std::string(op) + ": slice/origin count mismatch");
  require(is_power_of_two(group.depth()),
          std::string(op) + ": group depth " + std::to_string(group.depth()) +
              " is not a power of two");
  for (const Matrix& slice : group.slices) {
    require(slice.rows() == group.side && slice.cols() == group.side,
            std::string(op) + ": slice side mismatch");
  }
}

}  // namespace

WindowProfile kaiser_window(int side, Real beta) {
  require(side >= 1, "kaiser_window: side must be >= 1");
  require(beta >= 0.0, "kaiser_window: beta must be >= 0");
  const Vector v = kaiser_vector(side, beta);
  WindowProfile window;
  window.weights = v * v.transpose();
  window.weights /= window.weights.maxCoeff();
  return window;
}

WindowProfile flat_window(int side) {
  require(side >= 1, "flat_window: side must be >= 1");
  WindowProfile window;
  window.weights = Matrix::Ones(side, side);
  return window;
}

FilteredGroup ht_filter_group(const BlockGroup& group, Real sigma, Real lambda_3d) {
  validate_group(group, "ht_filter_group");
  require(sigma >= 0.0 && lambda_3d >= 0.0, "ht_filter_group: sigma and lambda_3d must be >= 0");

  GroupSpectrum spectrum = group_to_spectrum(group);
  hadamard_forward(spectrum);
  const long retained = hard_threshold(spectrum, lambda_3d * sigma);
  hadamard_inverse(spectrum);

  FilteredGroup result;
  result.estimates = spectrum_to_group(spectrum, group);
  result.weight = sigma > 0.0 ? 1.0 / (sigma * sigma * static_cast<Real>(retained)) : 1.0;
  return result;
}

FilteredGroup wiener_filter_group(const BlockGroup& noisy, const BlockGroup& pilot, Real sigma) {
  validate_group(noisy, "wiener_filter_group");
  validate_group(pilot, "wiener_filter_group");
  require(noisy.side == pilot.side && noisy.depth() == pilot.depth(),
          "wiener_filter_group: noisy and pilot groups differ in shape");

  GroupSpectrum noisy_spec = group_to_spectrum(noisy);
  GroupSpectrum pilot_spec = group_to_spectrum(pilot);
  hadamard_forward(noisy_spec);
  hadamard_forward(pilot_spec);
  const Real weight_energy = wiener_shrink(noisy_spec, pilot_spec, sigma);
  hadamard_inverse(noisy_spec);

  FilteredGroup result;
  result.estimates = spectrum_to_group(noisy_spec, noisy);
  result.weight = weight_energy > 0.0 ? 1.0 / (sigma * sigma * weight_energy) : 1.0;
  return result;
}

void aggregate(EstimateAccumulator& acc, const BlockGroup& estimates, Real weight,
               const WindowProfile& window) {
  require(window.side() == estimates.side, "aggregate: window side differs from block side");
  require(weight > 0.0, "aggregate: weight must be positive");
  const int side = estimates.side;
  const Matrix weighted_window = weight * window.weights;
  for (int k = 0; k < estimates.depth(); ++k) {
    const auto [ox, oy] = estimates.origins[k];
    if (ox < 0 || oy < 0 || ox + side > acc.numerator.cols() ||
        oy + side > acc.numerator.rows()) {
      throw ContractError("aggregate: slice footprint exceeds the accumulator plane");
    }
    acc.numerator.block(oy, ox, side, side).array() +=
        weighted_window.array() * estimates.slices[k].array();
    acc.denominator.block(oy, ox, side, side) += weighted_window;
  }
}

ImagePlane finalize(const EstimateAccumulator& acc) {
  if (!(acc.denominator.array() > 0.0).all()) {
    throw CoverageError("finalize: a pixel has zero aggregation weight (scan grid left it uncovered)");
  }
  return ImagePlane((acc.numerator.array() / acc.denominator.array()).matrix());
}

}  // namespace bm3d
