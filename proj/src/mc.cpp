#include "conic/mc.hpp"

#include "conic/error.hpp"
#include "conic/feasible.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace conic {

Estimate& Estimate::with_exact(double exact) {
    exact_ref = exact;
    const double diff = value - exact;
    if (std_error > 0.0) {
        z_score = diff / std_error;
    } else if (std::abs(diff) <= 1e-12) {
        z_score = 0.0;
    } else {
        z_score = std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    return *this;
}

Estimate indicator_estimate(std::string name, std::size_t hits, std::size_t samples) {
    Estimate e;
    e.name = std::move(name);
    e.samples = samples;
    if (samples > 0) {
        const double p = static_cast<double>(hits) / static_cast<double>(samples);
        e.value = p;
        e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    }
    return e;
}

Estimate two_sample_difference(std::string name, const Estimate& a, const Estimate& b) {
    Estimate d;
    d.name = std::move(name);
    d.value = a.value - b.value;
    d.std_error = std::hypot(a.std_error, b.std_error);
    d.samples = a.samples + b.samples;
    d.with_exact(0.0);
    return d;
}

namespace {

// Runs body(rng, count) over fixed-size chunks and returns the per-chunk
// results in chunk order.
template <class Tally, class Body>
std::vector<Tally> run_chunks(const SamplingPlan& plan, Body body) {
    const std::size_t chunks = (plan.samples + kChunkSize - 1) / kChunkSize;
    std::vector<Tally> results(chunks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                RngStream rng = plan.rng.substream(c);
                const std::size_t count = std::min(kChunkSize, plan.samples - c * kChunkSize);
                results[c] = body(rng, count);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = chunks;
                return;
            }
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(plan.threads, static_cast<unsigned>(chunks)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

struct Hits {
    std::size_t hits = 0;
    std::size_t used = 0;
    std::size_t full_space = 0;
    std::size_t degenerate = 0;
};

Hits total(const std::vector<Hits>& parts) {
    Hits t;
    for (const auto& p : parts) {
        t.hits += p.hits;
        t.used += p.used;
        t.full_space += p.full_space;
        t.degenerate += p.degenerate;
    }
    return t;
}

template <class Indicator>
Estimate indicator_mean(std::string name, const SamplingPlan& plan, Indicator indicator) {
    const auto parts = run_chunks<Hits>(plan, [&](RngStream& rng, std::size_t count) {
        Hits h;
        for (std::size_t s = 0; s < count; ++s) {
            h.hits += indicator(rng) ? 1 : 0;
        }
        h.used = count;
        return h;
    });
    const Hits t = total(parts);
    return indicator_estimate(std::move(name), t.hits, t.used);
}

void require_not_subspace(const ConeVRep& cone, const char* who) {
    if (is_linear_subspace(cone)) {
        throw PreconditionViolation(std::string(who) +
                                    ": pos M is not a linear subspace is required; "
                                    "subspaces have closed-form angles");
    }
}

void require_samples(const SamplingPlan& plan) {
    if (plan.samples < 1) {
        throw InvalidArgument("sample count must be positive");
    }
}

int cone_dim(const ConeVRep& cone) {
    return numerical_rank(cone.normalized_generators(), kDefaultTol);
}

}  // namespace

Estimate estimate_absorption(const ConeVRep& m, int k, const SamplingPlan& plan) {
    require_samples(plan);
    if (k < 1) {
        throw InvalidArgument("estimate_absorption: k must be >= 1");
    }
    require_not_subspace(m, "estimate_absorption");
    const int n = m.ambient_dim();
    return indicator_mean("absorption_k" + std::to_string(k), plan, [&](RngStream& rng) {
        const Matrix a = sample_gaussian_matrix(k, n, rng);
        return origin_in_interior_of_hull(a * m.generators());
    });
}

Estimate estimate_grassmann_subspace(const ConeVRep& cone, int j, const SamplingPlan& plan) {
    require_samples(plan);
    const int n = cone.ambient_dim();
    if (j < 0 || j > n) {
        throw InvalidArgument("estimate_grassmann_subspace: j outside [0, n]");
    }
    require_not_subspace(cone, "estimate_grassmann_subspace");
    return indicator_mean("grassmann_j" + std::to_string(j), plan, [&](RngStream& rng) {
        const Subspace w = sample_uniform_subspace(n, n - j, rng);
        return relint_meets_subspace_unchecked(cone, w);
    });
}

ImageEstimate estimate_expected_grassmann_image(const ConeVRep& cone, int k, int j,
                                                const SamplingPlan& plan, bool exclude_full_space) {
    require_samples(plan);
    require_not_subspace(cone, "estimate_expected_grassmann_image");
    const int n = cone.ambient_dim();
    const int dim = cone_dim(cone);
    if (k < 1 || j < 0 || j >= std::min(dim, k)) {
        throw InvalidArgument("estimate_expected_grassmann_image: need 0 <= j < min(dim C, k)");
    }

    const auto parts = run_chunks<Hits>(plan, [&](RngStream& rng, std::size_t count) {
        Hits h;
        for (std::size_t s = 0; s < count; ++s) {
            const Matrix a = sample_gaussian_matrix(k, n, rng);
            const Subspace u = sample_uniform_subspace(k, k - j, rng);
            const Matrix images = a * cone.generators();
            if (images.colwise().norm().maxCoeff() == 0.0) {
                ++h.degenerate;
                continue;
            }
            const ConeVRep image = apply_linear_map(a, cone);
            if (is_linear_subspace(image)) {
                // P[AC = R^k] = gamma_k(C) > 0; there gamma_j(AC) = 1 for j < k.
                // Lower-dimensional subspace images have probability zero.
                if (numerical_rank(image.normalized_generators(), kDefaultTol) == k) {
                    ++h.full_space;
                    ++h.used;
                    h.hits += exclude_full_space ? 0 : 1;
                } else {
                    ++h.degenerate;
                }
                continue;
            }
            ++h.used;
            h.hits += relint_meets_subspace_unchecked(image, u) ? 1 : 0;
        }
        return h;
    });
    const Hits t = total(parts);
    if (static_cast<double>(t.degenerate) > kMaxDegenerateFraction * static_cast<double>(plan.samples)) {
        throw SolverFailure("estimate_expected_grassmann_image: " + std::to_string(t.degenerate) +
                            " of " + std::to_string(plan.samples) +
                            " Gaussian images were lower-dimensional subspaces");
    }
    ImageEstimate out;
    out.estimate = indicator_estimate(
        std::string(exclude_full_space ? "image_grassmann_not_full_k" : "image_grassmann_k") +
            std::to_string(k) + "_j" + std::to_string(j),
        t.hits, t.used);
    out.full_space_images = t.full_space;
    out.degenerate_images = t.degenerate;
    return out;
}

Estimate estimate_solid_angle(const ConeVRep& cone, const SamplingPlan& plan) {
    require_samples(plan);
    const int n = cone.ambient_dim();
    return indicator_mean("solid_angle", plan, [&](RngStream& rng) {
        return cone_contains(cone, sample_uniform_sphere(n, rng));
    });
}

Estimate estimate_expected_solid_angle_image(const ConeVRep& cone, int k, const SamplingPlan& plan) {
    require_samples(plan);
    require_not_subspace(cone, "estimate_expected_solid_angle_image");
    const int n = cone.ambient_dim();
    if (k < 1 || k > cone_dim(cone)) {
        throw InvalidArgument("estimate_expected_solid_angle_image: need 1 <= k <= dim C");
    }
    return indicator_mean("image_solid_angle_k" + std::to_string(k), plan, [&](RngStream& rng) {
        const Matrix a = sample_gaussian_matrix(k, n, rng);
        const Vector z = sample_uniform_sphere(k, rng);
        return cone_contains(apply_linear_map(a, cone), z);
    });
}

Estimate estimate_persistence_v0(const ConeVRep& m, const SamplingPlan& plan) {
    require_samples(plan);
    require_not_subspace(m, "estimate_persistence_v0");
    const int n = m.ambient_dim();
    return indicator_mean("persistence_v0", plan, [&](RngStream& rng) {
        const Vector g = sample_gaussian_vector(n, rng);
        // inf over pos M of <g, x> is >= 0 iff it is so on every generator.
        return (g.transpose() * m.generators()).minCoeff() >= 0.0;
    });
}

namespace {

struct Moments {
    std::vector<double> sum;
    std::vector<double> sum_sq;
    std::size_t count = 0;
};

std::string r_label(const char* prefix, double r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_r%.6g", prefix, r);
    return buf;
}

}  // namespace

VolumeEstimate estimate_intrinsic_volumes_mgf(const ConeVRep& cone, const std::vector<double>& r_grid,
                                              const SamplingPlan& plan) {
    if (plan.samples < kMinVolumeSamples) {
        throw InvalidArgument("intrinsic-volume estimators need at least 10^4 samples");
    }
    const int n = cone.ambient_dim();
    const Matrix design = mgf_design_matrix(n, r_grid);
    const std::size_t nr = r_grid.size();
    std::vector<double> coef(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        coef[i] = 0.5 * (1.0 - 1.0 / (r_grid[i] * r_grid[i]));
    }

    const auto parts = run_chunks<Moments>(plan, [&](RngStream& rng, std::size_t count) {
        Moments m;
        m.sum.assign(nr, 0.0);
        m.sum_sq.assign(nr, 0.0);
        for (std::size_t s = 0; s < count; ++s) {
            const double p = proj_norm2(cone, sample_gaussian_vector(n, rng));
            for (std::size_t i = 0; i < nr; ++i) {
                const double v = std::exp(coef[i] * p);
                m.sum[i] += v;
                m.sum_sq[i] += v * v;
            }
        }
        m.count = count;
        return m;
    });

    std::vector<double> sum(nr, 0.0), sum_sq(nr, 0.0);
    std::size_t count = 0;
    for (const auto& m : parts) {
        for (std::size_t i = 0; i < nr; ++i) {
            sum[i] += m.sum[i];
            sum_sq[i] += m.sum_sq[i];
        }
        count += m.count;
    }

    VolumeEstimate out;
    out.r_grid = r_grid;
    Vector means(static_cast<Eigen::Index>(nr));
    const double nd = static_cast<double>(count);
    for (std::size_t i = 0; i < nr; ++i) {
        Estimate e;
        e.name = r_label("mgf", r_grid[i]);
        e.samples = count;
        e.value = sum[i] / nd;
        const double var = std::max(0.0, (sum_sq[i] - nd * e.value * e.value) / (nd - 1.0));
        e.std_error = std::sqrt(var / nd);
        if (coef[i] == 0.0) {
            // r = 1: the integrand is identically 1.
            e.value = 1.0;
            e.std_error = 0.0;
        }
        means(static_cast<Eigen::Index>(i)) = e.value;
        out.per_r.push_back(std::move(e));
    }
    out.recovered = solve_simplex_constrained_ls(design, means);
    return out;
}

VolumeEstimate estimate_intrinsic_volumes_steiner(const ConeVRep& cone,
                                                  const std::vector<double>& r_grid,
                                                  const SamplingPlan& plan) {
    if (plan.samples < kMinVolumeSamples) {
        throw InvalidArgument("intrinsic-volume estimators need at least 10^4 samples");
    }
    const int n = cone.ambient_dim();
    const Matrix design = steiner_design_matrix(n, r_grid);
    const std::size_t nr = r_grid.size();

    const auto parts = run_chunks<std::vector<std::size_t>>(plan, [&](RngStream& rng, std::size_t count) {
        std::vector<std::size_t> below(nr + 1, 0);
        for (std::size_t s = 0; s < count; ++s) {
            const double d = dist2(cone, sample_uniform_sphere(n, rng));
            for (std::size_t i = 0; i < nr; ++i) {
                // dist^2 <= |Z|^2 = 1 exactly; allow for rounding at r = 1.
                if (d <= r_grid[i] + 1e-12) ++below[i];
            }
        }
        below[nr] = count;
        return below;
    });

    std::vector<std::size_t> below(nr + 1, 0);
    for (const auto& p : parts) {
        for (std::size_t i = 0; i <= nr; ++i) below[i] += p[i];
    }

    VolumeEstimate out;
    out.r_grid = r_grid;
    Vector cdf(static_cast<Eigen::Index>(nr));
    for (std::size_t i = 0; i < nr; ++i) {
        Estimate e = indicator_estimate(r_label("steiner_cdf", r_grid[i]), below[i], below[nr]);
        cdf(static_cast<Eigen::Index>(i)) = e.value;
        out.per_r.push_back(std::move(e));
    }
    out.recovered = solve_simplex_constrained_ls(design, cdf);
    return out;
}

AngleSumEstimate estimate_face_angle_sums(int n, int k, int ell, int j, const SamplingPlan& plan) {
    require_samples(plan);
    if (n < 2 || n > k + 1 || ell < 0 || ell > n - 2 || j < 0 || j > n - 2) {
        throw InvalidArgument(
            "estimate_face_angle_sums: need 2 <= n <= k + 1, 0 <= ell <= n - 2, 0 <= j <= n - 2");
    }
    // Exchangeability: every ell-face contributes the same expectation.
    const double faces = binomial(n, ell + 1).convert_to<double>();
    auto scale = [faces](Estimate e) {
        e.value *= faces;
        e.std_error *= faces;
        return e;
    };

    SamplingPlan gaussian_plan = plan;
    gaussian_plan.rng = plan.rng.substream(0xA11CE);
    const Estimate gaussian = indicator_mean("angle_sum_gaussian", gaussian_plan, [&](RngStream& rng) {
        std::vector<Vector> pts;
        pts.reserve(n);
        for (int i = 0; i < n; ++i) {
            pts.push_back(sample_gaussian_vector(k, rng));
        }
        const Subspace u = sample_uniform_subspace(k, k - j, rng);
        const ConeVRep tangent = simplex_tangent_cone(pts, ell + 1);
        return relint_meets_subspace_unchecked(tangent, u);
    });

    std::vector<Vector> vertices;
    for (int i = 0; i < n; ++i) {
        vertices.push_back(Vector::Unit(n, i));
    }
    SamplingPlan regular_plan = plan;
    regular_plan.rng = plan.rng.substream(0xB0B);
    Estimate regular = estimate_grassmann_subspace(simplex_tangent_cone(vertices, ell + 1), j, regular_plan);
    regular.name = "angle_sum_regular";

    AngleSumEstimate out;
    out.gaussian = scale(gaussian);
    out.regular = scale(regular);
    out.difference = two_sample_difference("angle_sum_difference", out.gaussian, out.regular);
    return out;
}

}  // namespace conic
