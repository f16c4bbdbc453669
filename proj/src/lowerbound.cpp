#include "clipofdm/lowerbound.hpp"

#include "clipofdm/evm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace clipofdm {

namespace {

double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

// Orthogonal projector onto the span of the data bins, applied in the
// frequency domain. P is symmetric and circulant.
class DataProjector {
public:
    DataProjector(std::size_t n, std::span<const std::size_t> data) : n_(n), mask_(n, false)
    {
        for (auto k : data) {
            if (k >= n) {
                throw std::invalid_argument("data index out of range");
            }
            mask_[k] = true;
        }
    }

    RealVector apply(std::span<const double> v) const
    {
        auto spec = dft_real(v);
        for (std::size_t k = 0; k < n_; ++k) {
            if (!mask_[k]) {
                spec[k] = Complex{};
            }
        }
        return idft_real(spec);
    }

    // First column of P: p[d] = (1/N) sum_{k in data} cos(2 pi k d / N).
    RealVector kernel() const
    {
        RealVector e(n_, 0.0);
        e[0] = 1.0;
        return apply(e);
    }

private:
    std::size_t n_;
    std::vector<bool> mask_;
};

struct ActiveSet {
    std::vector<std::size_t> interior;
    std::vector<std::size_t> upper;
    std::vector<std::size_t> lower;

    bool operator==(const ActiveSet&) const = default;
};

ActiveSet classify(std::span<const double> v, double floor, double range, double eps)
{
    ActiveSet s;
    for (std::size_t n = 0; n < v.size(); ++n) {
        if (v[n] >= floor + range - eps) {
            s.upper.push_back(n);
        } else if (v[n] <= floor + eps) {
            s.lower.push_back(n);
        } else {
            s.interior.push_back(n);
        }
    }
    return s;
}

// Exact minimizer of the objective with the given active set held fixed.
// Returns false when the result leaves the window.
bool polish(const BoundProblem& prob, const DataProjector& proj, const RealVector& kernel,
            const ActiveSet& act, std::span<const double> v, double floor, double eps,
            RealVector& shaped, double& new_floor)
{
    const std::size_t n = prob.x.size();
    const double range = prob.dynamic_range;
    const std::size_t m = act.interior.size();

    RealVector on_bound(n, 0.0);  // a: 1 on either bound
    RealVector target(n);         // x - R * 1_upper
    std::copy(prob.x.begin(), prob.x.end(), target.begin());
    for (auto i : act.upper) {
        on_bound[i] = 1.0;
        target[i] -= range;
    }
    for (auto i : act.lower) {
        on_bound[i] = 1.0;
    }
    const auto p_bound = proj.apply(on_bound);
    const auto p_target = proj.apply(target);

    auto p_at = [&](std::size_t i, std::size_t j) { return kernel[(i + n - j) % n]; };

    Eigen::MatrixXd normal(m + 1, m + 1);
    Eigen::VectorXd rhs(m + 1);
    Eigen::VectorXd theta0(m + 1);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            normal(a, b) = p_at(act.interior[a], act.interior[b]);
        }
        normal(a, m) = p_bound[act.interior[a]];
        normal(m, a) = p_bound[act.interior[a]];
        rhs(a) = p_target[act.interior[a]];
        theta0(a) = v[act.interior[a]];
    }
    double ll = 0.0;
    double lr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ll += on_bound[i] * p_bound[i];
        lr += on_bound[i] * p_target[i];
    }
    normal(m, m) = ll;
    rhs(m) = lr;
    theta0(m) = floor;

    // Smallest correction from the ADMM iterate; the normal matrix is singular
    // whenever free bins leave directions with no cost.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(normal);
    const Eigen::VectorXd delta = cod.solve(rhs - normal * theta0);
    const Eigen::VectorXd theta = theta0 + delta;

    new_floor = theta(m);
    shaped.assign(n, 0.0);
    for (auto i : act.upper) {
        shaped[i] = new_floor + range;
    }
    for (auto i : act.lower) {
        shaped[i] = new_floor;
    }
    for (std::size_t a = 0; a < m; ++a) {
        double z = theta(a);
        if (z < new_floor - eps || z > new_floor + range + eps) {
            return false;
        }
        shaped[act.interior[a]] = std::clamp(z, new_floor, new_floor + range);
    }
    return true;
}

BoundSolution finish(const BoundProblem& prob, RealVector shaped, double floor)
{
    BoundSolution sol;
    sol.floor = floor;
    RealVector c(shaped.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = shaped[i] - prob.x[i];
    }
    sol.distortion = dft_real(c);
    sol.objective = distortion_objective(prob.x, shaped, prob.data_indices);
    sol.kt = kt_certificate(prob, shaped, floor);
    sol.shaped = std::move(shaped);
    return sol;
}

} // namespace

bool BoundProblem::dc_free() const
{
    return std::find(data_indices.begin(), data_indices.end(), 0U) == data_indices.end();
}

bool BoundProblem::nyquist_free() const
{
    return std::find(data_indices.begin(), data_indices.end(), x.size() / 2) == data_indices.end();
}

double KtCertificate::worst() const
{
    return std::max({stationarity_residual, primal_violation, dual_min, complementarity_residual});
}

double distortion_objective(std::span<const double> x, std::span<const double> shaped,
                            std::span<const std::size_t> data_indices)
{
    RealVector c(x.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = shaped[i] - x[i];
    }
    const auto spec = dft_real(c);
    double total = 0.0;
    for (auto k : data_indices) {
        total += std::norm(spec[k]);
    }
    return total;
}

RealVector project_to_range(std::span<const double> w, double range, double* floor)
{
    const auto [lo_it, hi_it] = std::minmax_element(w.begin(), w.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    RealVector out(w.begin(), w.end());
    if (hi - lo <= range) {
        if (floor != nullptr) {
            *floor = lo;
        }
        return out;
    }

    // Root of the window-floor derivative, sum (L - w)_+ - sum (w - L - R)_+,
    // which is nondecreasing in L.
    auto slope = [&](double level) {
        double s = 0.0;
        for (double v : w) {
            if (v < level) {
                s += level - v;
            } else if (v > level + range) {
                s -= v - level - range;
            }
        }
        return s;
    };
    double a = lo;
    double b = hi - range;
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double mid = 0.5 * (a + b);
        (slope(mid) < 0.0 ? a : b) = mid;
    }
    double level = 0.5 * (a + b);

    // Closed form on the segment the bisection landed in.
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : w) {
        if (v < level) {
            sum += v;
            ++count;
        } else if (v > level + range) {
            sum += v - range;
            ++count;
        }
    }
    if (count > 0) {
        const double exact = sum / static_cast<double>(count);
        if (std::abs(exact - level) <= 1e-9 * (1.0 + std::abs(level))) {
            level = exact;
        }
    }

    for (auto& v : out) {
        v = std::clamp(v, level, level + range);
    }
    if (floor != nullptr) {
        *floor = level;
    }
    return out;
}

KtCertificate kt_certificate(const BoundProblem& prob, std::span<const double> shaped, double floor)
{
    const std::size_t n = prob.x.size();
    const double range = prob.dynamic_range;
    const double scale = std::max(1.0, max_abs(prob.x));
    const double eps = 1e-9 * scale;

    DataProjector proj(n, prob.data_indices);
    RealVector diff(n);
    for (std::size_t i = 0; i < n; ++i) {
        diff[i] = shaped[i] - prob.x[i];
    }
    auto grad = proj.apply(diff);
    for (auto& g : grad) {
        g *= 2.0;
    }

    KtCertificate kt;
    double floor_balance = 0.0;  // stationarity in the window floor
    for (std::size_t i = 0; i < n; ++i) {
        const double up_slack = floor + range - shaped[i];
        const double lo_slack = shaped[i] - floor;
        kt.primal_violation = std::max({kt.primal_violation, -up_slack, -lo_slack});
        if (up_slack <= eps) {
            const double mu = -grad[i];
            floor_balance += mu;
            kt.dual_min = std::max(kt.dual_min, -mu);
            kt.complementarity_residual = std::max(kt.complementarity_residual, std::abs(mu * up_slack));
        } else if (lo_slack <= eps) {
            const double nu = grad[i];
            floor_balance -= nu;
            kt.dual_min = std::max(kt.dual_min, -nu);
            kt.complementarity_residual = std::max(kt.complementarity_residual, std::abs(nu * lo_slack));
        } else {
            kt.stationarity_residual = std::max(kt.stationarity_residual, std::abs(grad[i]));
        }
    }
    kt.stationarity_residual = std::max(kt.stationarity_residual, std::abs(floor_balance));
    return kt;
}

BoundSolution solve_min_distortion(const BoundProblem& prob, const SolverOptions& opts)
{
    const std::size_t n = prob.x.size();
    if (n < 2) {
        throw std::invalid_argument("solve_min_distortion: need at least 2 samples");
    }
    if (!(prob.dynamic_range > 0.0)) {
        throw std::invalid_argument("solve_min_distortion: dynamic_range must be positive");
    }
    const double range = prob.dynamic_range;
    const double scale = std::max(1.0, max_abs(prob.x));
    const double tol = opts.tolerance * scale;
    const double eps_bound = 1e-10 * scale;

    const auto [lo_it, hi_it] = std::minmax_element(prob.x.begin(), prob.x.end());
    if (*hi_it - *lo_it <= range) {
        auto sol = finish(prob, prob.x, *lo_it);
        sol.converged = true;
        return sol;
    }

    DataProjector proj(n, prob.data_indices);
    const auto kernel = proj.kernel();
    constexpr double relax = 1.6;

    double floor = 0.0;
    RealVector v = project_to_range(prob.x, range, &floor);
    RealVector z = v;
    RealVector u(n, 0.0);
    RealVector w(n);
    RealVector zr(n);
    RealVector diff(n);
    double rho = opts.rho;

    ActiveSet last_set;
    std::size_t stable = 0;
    ActiveSet tried;
    bool tried_any = false;

    auto try_polish = [&](const ActiveSet& act, BoundSolution& out) {
        RealVector shaped;
        double new_floor = 0.0;
        if (!polish(prob, proj, kernel, act, v, floor, eps_bound, shaped, new_floor)) {
            return false;
        }
        auto sol = finish(prob, std::move(shaped), new_floor);
        if (sol.kt.worst() > tol) {
            return false;
        }
        sol.polished = true;
        sol.converged = true;
        out = std::move(sol);
        return true;
    };

    std::size_t it = 0;
    bool admm_converged = false;
    for (it = 1; it <= opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = v[i] - u[i];
            diff[i] = prob.x[i] - w[i];
        }
        const auto pd = proj.apply(diff);
        const double step = 2.0 / (2.0 + rho);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = w[i] + step * pd[i];
            zr[i] = relax * z[i] + (1.0 - relax) * v[i];
            w[i] = zr[i] + u[i];
        }
        const RealVector v_prev = v;
        v = project_to_range(w, range, &floor);

        double primal = 0.0;
        double dual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += zr[i] - v[i];
            primal = std::max(primal, std::abs(z[i] - v[i]));
            dual = std::max(dual, rho * std::abs(v[i] - v_prev[i]));
        }
        if (primal < tol && dual < tol) {
            admm_converged = true;
            break;
        }

        if (opts.polish) {
            auto act = classify(v, floor, range, eps_bound);
            stable = (act == last_set) ? stable + 1 : 0;
            last_set = act;
            if (stable >= opts.polish_every && (!tried_any || !(act == tried))) {
                tried = act;
                tried_any = true;
                BoundSolution polished;
                if (try_polish(act, polished)) {
                    polished.iterations = it;
                    return polished;
                }
            }
        }

        if (it % 50 == 0) {
            if (primal > 10.0 * dual) {
                rho *= 2.0;
                for (auto& x : u) {
                    x *= 0.5;
                }
            } else if (dual > 10.0 * primal) {
                rho *= 0.5;
                for (auto& x : u) {
                    x *= 2.0;
                }
            }
        }
    }

    if (opts.polish) {
        BoundSolution polished;
        if (try_polish(classify(v, floor, range, eps_bound), polished)) {
            polished.iterations = std::min(it, opts.max_iterations);
            return polished;
        }
    }
    auto sol = finish(prob, v, floor);
    sol.iterations = std::min(it, opts.max_iterations);
    sol.converged = admm_converged;
    if (!admm_converged) {
        throw SolverError("solve_min_distortion: no convergence after "
                              + std::to_string(opts.max_iterations) + " iterations (kt residual "
                              + std::to_string(sol.kt.worst()) + ")",
                          std::move(sol));
    }
    return sol;
}

BoundEstimate evm_lower_bound(const SubcarrierPlan& plan, double gamma, std::size_t num_symbols,
                              std::uint64_t seed, const SolverOptions& opts)
{
    if (num_symbols == 0) {
        throw std::invalid_argument("evm_lower_bound: num_symbols must be >= 1");
    }
    if (!(gamma >= 0.0)) {
        throw std::invalid_argument("evm_lower_bound: gamma must be >= 0");
    }
    const double sigma = frame_sigma(plan, kQpskPower);
    const double range = 2.0 * gamma * sigma;
    const double scale = plan.reference_scale;
    const auto clip_cfg = plan.scheme == Scheme::DCO ? ClipBiasConfig::make(sigma, gamma, 0.5)
                                                     : ClipBiasConfig::make(sigma, gamma, 0.0);

    const std::size_t batches = std::min<std::size_t>(10, num_symbols);
    std::vector<double> bound_err(batches, 0.0);
    std::vector<double> scheme_err(batches, 0.0);
    std::vector<double> ref_pow(batches, 0.0);
    double kt_sum = 0.0;
    double kt_max = 0.0;
    std::size_t index = 0;

    for (std::size_t b = 0; b < batches; ++b) {
        const std::size_t count = num_symbols / batches + (b < num_symbols % batches ? 1 : 0);
        auto rng = batch_engine(seed, b);
        for (std::size_t s = 0; s < count; ++s, ++index) {
            const auto frame = random_qpsk_frame(plan, rng);
            for (auto k : plan.data_indices) {
                ref_pow[b] += std::norm(scale * frame.spectrum[k]);
            }

            const auto clipped = dft_real(clip(frame.time, clip_cfg));
            for (auto k : plan.data_indices) {
                scheme_err[b] += std::norm(scale * frame.spectrum[k] - clipped[k]);
            }

            if (range == 0.0) {
                // Every waveform collapses to a constant: all data bins are lost.
                for (auto k : plan.data_indices) {
                    bound_err[b] += std::norm(scale * frame.spectrum[k]);
                }
                continue;
            }
            BoundProblem prob{RealVector(frame.time.size()), range, plan.data_indices};
            for (std::size_t i = 0; i < frame.time.size(); ++i) {
                prob.x[i] = scale * frame.time[i];
            }
            BoundSolution sol;
            try {
                sol = solve_min_distortion(prob, opts);
            } catch (const SolverError& e) {
                throw SolverError("symbol " + std::to_string(index) + ": " + e.what(), e.best());
            }
            bound_err[b] += sol.objective;
            kt_sum += sol.kt.worst();
            kt_max = std::max(kt_max, sol.kt.worst());
        }
    }

    const double ref = std::accumulate(ref_pow.begin(), ref_pow.end(), 0.0);
    BoundEstimate est{plan.scheme,
                      gamma,
                      std::sqrt(std::accumulate(bound_err.begin(), bound_err.end(), 0.0) / ref),
                      std::sqrt(std::accumulate(scheme_err.begin(), scheme_err.end(), 0.0) / ref),
                      0.0,
                      kt_sum / static_cast<double>(num_symbols),
                      kt_max,
                      num_symbols};
    if (batches > 1) {
        std::vector<double> e(batches);
        for (std::size_t b = 0; b < batches; ++b) {
            e[b] = std::sqrt(bound_err[b] / ref_pow[b]);
        }
        const double mean = std::accumulate(e.begin(), e.end(), 0.0) / batches;
        double var = 0.0;
        for (double x : e) {
            var += (x - mean) * (x - mean);
        }
        est.stderr_bound = std::sqrt(var / static_cast<double>(batches - 1) / batches);
    }
    return est;
}

AcoKtResult kt_certificate_aco(std::span<const double> x, double gamma_sigma)
{
    const double tol_sym = 1e-9 * std::max(1.0, max_abs(x));
    if (!has_negative_half_symmetry(x, tol_sym)) {
        throw std::invalid_argument("kt_certificate_aco: input lacks negative half symmetry");
    }
    const double top = 2.0 * gamma_sigma;
    const std::size_t half = x.size() / 2;

    AcoKtResult r;
    r.correction.resize(half);
    r.multipliers.assign(x.size(), 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        const double clipped = std::clamp(x[i], 0.0, top);
        const double c = clipped - x[i];
        r.correction[i] = c;
        if (x[i] > top) {
            r.multipliers[i] = 2.0 * (x[i] - clipped);  // upper bound active
        } else if (x[i] < 0.0) {
            r.multipliers[i + half] = 2.0 * (clipped - x[i]);  // lower bound active
        }
    }

    auto& kt = r.certificate;
    for (std::size_t i = 0; i < half; ++i) {
        const double c = r.correction[i];
        const double g_up = x[i] + c - top;
        const double g_lo = -x[i] - c;
        const double mu_up = r.multipliers[i];
        const double mu_lo = r.multipliers[i + half];
        kt.stationarity_residual = std::max(kt.stationarity_residual, std::abs(2.0 * c + mu_up - mu_lo));
        kt.primal_violation = std::max({kt.primal_violation, g_up, g_lo});
        kt.dual_min = std::max({kt.dual_min, -mu_up, -mu_lo});
        kt.complementarity_residual =
            std::max({kt.complementarity_residual, std::abs(mu_up * g_up), std::abs(mu_lo * g_lo)});
    }
    return r;
}

ReducedAcoSolution solve_reduced_aco(std::span<const double> x, double range)
{
    const std::size_t half = x.size() / 2;
    ReducedAcoSolution r{RealVector(half), 0.0};
    for (std::size_t i = 0; i < half; ++i) {
        r.correction[i] = std::clamp(x[i], 0.0, range) - x[i];
        r.objective += r.correction[i] * r.correction[i];
    }
    return r;
}

} // namespace clipofdm
