#pragma once

#include "conic/cones.hpp"
#include "conic/exact.hpp"
#include "conic/linalg.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conic {

// Monte Carlo work is cut into chunks of this many samples; chunk c draws from
// root.substream(c). Results are folded in chunk order, so they do not depend
// on the number of worker threads.
inline constexpr std::size_t kChunkSize = 2048;
inline constexpr std::size_t kMinVolumeSamples = 10000;
inline constexpr double kMaxDegenerateFraction = 1e-3;

struct Estimate {
    std::string name;
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::optional<double> exact_ref;
    std::optional<double> z_score;

    // Attaches an exact reference and the z-score (value - exact) / std_error.
    // With a zero standard error z is 0 on agreement to 1e-12, else +-inf.
    Estimate& with_exact(double exact);
};

// Mean of `hits` Bernoulli draws out of `samples`, Wald standard error.
Estimate indicator_estimate(std::string name, std::size_t hits, std::size_t samples);

// Difference a - b with combined standard error, compared against 0.
Estimate two_sample_difference(std::string name, const Estimate& a, const Estimate& b);

struct SamplingPlan {
    std::size_t samples = 100000;
    RngStream rng{42};
    unsigned threads = 1;
};

// P[0 in int conv(A M)] for Gaussian A in R^{k x n}; equals gamma_k(pos M).
Estimate estimate_absorption(const ConeVRep& m, int k, const SamplingPlan& plan);

// P[(relint C) meets W] for Haar W of dimension n - j; equals gamma_j(C).
Estimate estimate_grassmann_subspace(const ConeVRep& cone, int j, const SamplingPlan& plan);

struct ImageEstimate {
    Estimate estimate;
    std::size_t full_space_images = 0;  // samples with AC = R^k
    std::size_t degenerate_images = 0;  // lower-dimensional subspace images, excluded
};

// E[gamma_j(AC)] via the joint indicator 1{(relint AC) meets U_{k-j}}.
// With exclude_full_space the indicator is multiplied by 1{AC != R^k}.
ImageEstimate estimate_expected_grassmann_image(const ConeVRep& cone, int k, int j,
                                                const SamplingPlan& plan,
                                                bool exclude_full_space = false);

// alpha(C) = P[Z in C], Z uniform on the sphere.
Estimate estimate_solid_angle(const ConeVRep& cone, const SamplingPlan& plan);

// E[alpha(AC)] with (A, Z) drawn jointly per sample.
Estimate estimate_expected_solid_angle_image(const ConeVRep& cone, int k, const SamplingPlan& plan);

// P[<N, g> >= 0 for every generator g]; equals upsilon_0(pos M).
Estimate estimate_persistence_v0(const ConeVRep& m, const SamplingPlan& plan);

struct VolumeEstimate {
    std::vector<double> r_grid;
    std::vector<Estimate> per_r;
    IntrinsicVolumes recovered;
};

// Monte Carlo means of exp((1 - r^-2)/2 |Pi_C(N)|^2) on the grid, inverted
// against the r^k design over the probability simplex.
VolumeEstimate estimate_intrinsic_volumes_mgf(const ConeVRep& cone, const std::vector<double>& r_grid,
                                              const SamplingPlan& plan);

// Empirical CDF of dist^2(Z, C) on the grid, inverted against the Beta design.
VolumeEstimate estimate_intrinsic_volumes_steiner(const ConeVRep& cone,
                                                  const std::vector<double>& r_grid,
                                                  const SamplingPlan& plan);

struct AngleSumEstimate {
    Estimate gaussian;  // E S_{ell,j}(P_n), P_n a Gaussian simplex in R^k
    Estimate regular;   // S_{ell,j}(Delta_n)
    Estimate difference;
};

// Sum of j-th Grassmann angles over the ell-faces, Gaussian vs regular simplex.
AngleSumEstimate estimate_face_angle_sums(int n, int k, int ell, int j, const SamplingPlan& plan);

}  // namespace conic
